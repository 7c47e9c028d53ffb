//! Bond scattering matrix and the secular determinant
//! `F(k; theta) = det(I - exp(i(Theta + kL)) S(k))`.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use super::cell::UnitCellGraph;
use super::coupling::CMatrix;
use super::FloquetError;

/// Imaginary residue tolerated in the realified determinant, relative to
/// its size.
const REALITY_TOL: f64 = 1e-8;

/// Bond `2e` runs along edge `e` from `from` to `to`; bond `2e + 1` runs back.
pub fn bond_scattering_at_inverse_k(cell: &UnitCellGraph, s: f64) -> Result<CMatrix, FloquetError> {
    let dim = 2 * cell.edges().len();
    let mut incoming: Vec<Vec<usize>> = cell.vertices().iter().map(|v| vec![0; v.degree()]).collect();
    let mut outgoing = incoming.clone();
    for (e, edge) in cell.edges().iter().enumerate() {
        outgoing[edge.from.vertex][edge.from.port] = 2 * e;
        incoming[edge.to.vertex][edge.to.port] = 2 * e;
        outgoing[edge.to.vertex][edge.to.port] = 2 * e + 1;
        incoming[edge.from.vertex][edge.from.port] = 2 * e + 1;
    }
    let mut out = CMatrix::zeros(dim, dim);
    for (v, coupling) in cell.vertices().iter().enumerate() {
        let sigma = coupling.scattering_at_inverse_k(s)?;
        for p_out in 0..coupling.degree() {
            for p_in in 0..coupling.degree() {
                out[(outgoing[v][p_out], incoming[v][p_in])] = sigma[(p_out, p_in)];
            }
        }
    }
    Ok(out)
}

pub fn bond_scattering(cell: &UnitCellGraph, k: f64) -> Result<CMatrix, FloquetError> {
    if k.is_nan() || k <= 0.0 {
        return Err(FloquetError::InvalidMomentum(k));
    }
    bond_scattering_at_inverse_k(cell, 1.0 / k)
}

/// Square root of `det S(k)` continued from `k = inf` along `s = 1/k`.
fn tracked_sqrt_det(cell: &UnitCellGraph, k: f64) -> Result<Complex64, FloquetError> {
    let det = |s: f64| bond_scattering_at_inverse_k(cell, s).map(|m| m.lu().determinant());
    let target = 1.0 / k;
    let mut d_prev = det(0.0)?;
    let mut phase = d_prev.arg();
    if !cell.is_scale_invariant() {
        let (mut s, mut step) = (0.0, target / 8.0);
        while s < target {
            let s_next = (s + step).min(target);
            let d = det(s_next)?;
            let delta = (d / d_prev).arg();
            if delta.abs() > FRAC_PI_4 {
                step *= 0.5;
                if step < target * 1e-12 {
                    return Err(FloquetError::BranchTrackingLost { k });
                }
                continue;
            }
            phase += delta;
            s = s_next;
            d_prev = d;
            step *= 2.0;
        }
    }
    Ok(Complex64::from_polar(d_prev.norm().sqrt(), 0.5 * phase))
}

/// Everything about the fiber at fixed `k` that does not depend on `theta`.
#[derive(Clone, Debug)]
pub struct SecularFiber {
    k: f64,
    s: CMatrix,
    /// `exp(i k l_b)` per bond.
    propagation: Vec<Complex64>,
    /// `(component, +1 | -1)` per bond.
    phases: Vec<Option<(usize, f64)>>,
    /// `exp(-i k sum l_e) / sqrt(det S(k))`.
    normalisation: Complex64,
}

impl SecularFiber {
    pub fn new(cell: &UnitCellGraph, k: f64) -> Result<Self, FloquetError> {
        let s = bond_scattering(cell, k)?;
        let mut propagation = Vec::with_capacity(s.nrows());
        let mut phases = Vec::with_capacity(s.nrows());
        for e in cell.edges() {
            let p = Complex64::from_polar(1.0, k * e.length);
            propagation.extend([p, p]);
            phases.extend([e.phase.map(|l| (l, 1.0)), e.phase.map(|l| (l, -1.0))]);
        }
        let total: f64 = cell.edges().iter().map(|e| e.length).sum();
        let normalisation = Complex64::from_polar(1.0, -k * total) / tracked_sqrt_det(cell, k)?;
        Ok(SecularFiber { k, s, propagation, phases, normalisation })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Number of bonds carrying each quasimomentum component.
    pub fn phase_multiplicity(&self, nu: usize) -> Vec<usize> {
        let mut c = vec![0; nu];
        for (l, _) in self.phases.iter().flatten() {
            c[*l] += 1;
        }
        c
    }

    pub fn dimension(&self) -> usize {
        self.s.nrows()
    }

    /// `F(k; theta)` before realification.
    pub fn complex(&self, theta: &[f64]) -> Complex64 {
        let mut m = -self.s.clone();
        for (b, (p, ph)) in self.propagation.iter().zip(&self.phases).enumerate() {
            let d = match ph {
                Some((l, sign)) => p * Complex64::from_polar(1.0, sign * theta[*l]),
                None => *p,
            };
            m.row_mut(b).iter_mut().for_each(|z| *z *= d);
            m[(b, b)] += 1.0;
        }
        m.lu().determinant()
    }

    /// `F / sqrt(det(exp(i(Theta + kL)) S))` as a complex number; its
    /// imaginary part vanishes up to rounding.
    pub fn realified_complex(&self, theta: &[f64]) -> Complex64 {
        self.complex(theta) * self.normalisation
    }

    pub fn real(&self, theta: &[f64]) -> Result<f64, FloquetError> {
        let z = self.realified_complex(theta);
        let scale = 1.0 + z.norm();
        if z.im.abs() > REALITY_TOL * scale * self.dimension() as f64 {
            return Err(FloquetError::NotReal { k: self.k, residual: z.im.abs() });
        }
        Ok(z.re)
    }
}

/// `F(k; theta)`, complex.
pub fn secular_complex(cell: &UnitCellGraph, k: f64, theta: &[f64]) -> Result<Complex64, FloquetError> {
    check_theta(cell, theta)?;
    Ok(SecularFiber::new(cell, k)?.complex(theta))
}

/// Realified secular function.
pub fn secular(cell: &UnitCellGraph, k: f64, theta: &[f64]) -> Result<f64, FloquetError> {
    check_theta(cell, theta)?;
    SecularFiber::new(cell, k)?.real(theta)
}

fn check_theta(cell: &UnitCellGraph, theta: &[f64]) -> Result<(), FloquetError> {
    if theta.len() != cell.nu() {
        return Err(FloquetError::Precondition(format!("theta has {} components, expected {}", theta.len(), cell.nu())));
    }
    Ok(())
}

/// `{x}_(2 pi)`: the representative of `x` in `(-pi, pi]`.
pub fn wrap_2pi(x: f64) -> f64 {
    let y = x - 2.0 * PI * (x / (2.0 * PI)).round();
    if y <= -PI {
        y + 2.0 * PI
    } else if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// `({k l_0}, ..., {k l_d})` over the distinct edge lengths.
pub fn phase_vector(cell: &UnitCellGraph, k: f64) -> Vec<f64> {
    cell.distinct_lengths().into_iter().map(|l| wrap_2pi(k * l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn realified_lattice_secular_is_real() {
        let cell = UnitCellGraph::rectangular_lattice(1.0, 0.618, 3.0).unwrap();
        for &k in &[0.3, 1.7, 12.9, 250.0] {
            let fiber = SecularFiber::new(&cell, k).unwrap();
            for theta in [[0.0, 0.0], [0.4, -2.2], [PI, 1.0]] {
                let z = fiber.realified_complex(&theta);
                assert!(z.im.abs() < 1e-10 * (1.0 + z.norm()), "k = {k}: {z}");
            }
        }
    }

    #[test]
    fn kirchhoff_lattice_has_zeros_everywhere() {
        // With alpha = 0, theta = (k a, k b) mod 2 pi solves the condition.
        let cell = UnitCellGraph::rectangular_lattice(1.0, 0.618, 0.0).unwrap();
        for &k in &[0.5, 2.0, 7.3] {
            let theta = [wrap_2pi(k), wrap_2pi(k * 0.618)];
            assert!(secular_complex(&cell, k, &theta).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn wrap_is_half_open() {
        assert_eq!(wrap_2pi(PI), PI);
        assert!((wrap_2pi(-PI) - PI).abs() < 1e-15);
        assert!((wrap_2pi(7.0) - (7.0 - 2.0 * PI)).abs() < 1e-15);
    }
}
