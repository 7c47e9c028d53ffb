//! Gap conditions and gap enumeration.

use std::f64::consts::{FRAC_PI_2, PI};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::certify::{Coef, Rhs, TanTerm};
use super::{DeltaLattice, Endpoint, GapInterval, GapOptions, LatticeError, Side};
use crate::diophantine::ExactReal;

/// Fractional part deciding the condition at `(m, side)`: `{m r}` for
/// `alpha > 0`, `ceil(m r) - m r` for `alpha < 0`.
pub(crate) fn condition_fraction(lat: &DeltaLattice, m: u64, side: Side) -> Result<ExactReal, LatticeError> {
    let mr = lat.ratio(side).scale(&BigInt::from(m))?;
    let f = if lat.alpha() > 0.0 { mr.fract_floor()? } else { mr.fract_ceil()? };
    if f.signum().is_eq() {
        return Err(LatticeError::DegenerateResonance { m, side });
    }
    Ok(f)
}

/// Left-hand side `(2 m pi / l) tan(pi f / 2)` of the gap condition, in
/// double precision.
pub fn gap_lhs(lat: &DeltaLattice, m: u64, side: Side) -> Result<f64, LatticeError> {
    if lat.alpha() == 0.0 {
        return Err(LatticeError::InvalidAlpha);
    }
    let f = condition_fraction(lat, m, side)?;
    Ok(TanTerm { m, frac: &f, coef: Coef::TwoPiOver(lat.length(side)) }.value_f64().0)
}

/// Whether a gap has its fixed endpoint at `m pi / l`.
pub fn gap_condition(lat: &DeltaLattice, m: u64, side: Side) -> Result<bool, LatticeError> {
    gap_condition_with(lat, m, side, &GapOptions::default())
}

pub fn gap_condition_with(lat: &DeltaLattice, m: u64, side: Side, opts: &GapOptions) -> Result<bool, LatticeError> {
    if lat.alpha() == 0.0 {
        return Err(LatticeError::InvalidAlpha);
    }
    if m == 0 {
        return Err(LatticeError::Precondition("m must be positive".into()));
    }
    let f = condition_fraction(lat, m, side)?;
    TanTerm { m, frac: &f, coef: Coef::TwoPiOver(lat.length(side)) }
        .less_than(&Rhs::Double(lat.alpha().abs()), opts.max_bits)
        .ok_or(LatticeError::UncertifiedComparison { m, side, bits: opts.max_bits })
}

/// A candidate anchor that could not be decided.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkippedCandidate {
    pub m: u64,
    pub side: Side,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GapList {
    pub gaps: Vec<GapInterval>,
    pub skipped: Vec<SkippedCandidate>,
}

impl GapList {
    pub fn len(&self) -> usize {
        self.gaps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }
}

/// All gaps whose fixed endpoint lies below `k_max`, sorted by `k_left`.
pub fn enumerate_gaps(lat: &DeltaLattice, k_max: f64) -> Result<GapList, LatticeError> {
    enumerate_gaps_with(lat, k_max, &GapOptions::default())
}

pub fn enumerate_gaps_with(lat: &DeltaLattice, k_max: f64, opts: &GapOptions) -> Result<GapList, LatticeError> {
    if !(k_max > 0.0 && k_max.is_finite()) {
        return Err(LatticeError::Precondition(format!("k_max must be positive, got {k_max}")));
    }
    if lat.alpha() == 0.0 {
        return Ok(GapList::default());
    }
    let candidates: Vec<(u64, Side)> = [Side::A, Side::B]
        .into_iter()
        .flat_map(|side| {
            let top = (k_max * lat.length(side) / PI).ceil() as u64;
            (1..=top).filter(move |&m| lat.anchor(m, side) < k_max).map(move |m| (m, side))
        })
        .collect();
    let outcomes: Vec<Result<Option<GapInterval>, LatticeError>> =
        candidates.par_iter().map(|&(m, side)| gap_at(lat, m, side, opts)).collect();
    let mut list = GapList::default();
    for (&(m, side), outcome) in candidates.iter().zip(outcomes) {
        match outcome {
            Ok(Some(gap)) => list.gaps.push(gap),
            Ok(None) => {}
            Err(e @ (LatticeError::DegenerateResonance { .. } | LatticeError::UncertifiedComparison { .. })) => {
                list.skipped.push(SkippedCandidate { m, side, reason: e.to_string() })
            }
            Err(e) => return Err(e),
        }
    }
    list.gaps.sort_by(|x, y| x.k_left.total_cmp(&y.k_left).then(x.side.cmp(&y.side)));
    Ok(list)
}

/// The gap anchored at `(m, side)`, if the condition holds.
fn gap_at(lat: &DeltaLattice, m: u64, side: Side, opts: &GapOptions) -> Result<Option<GapInterval>, LatticeError> {
    if !gap_condition_with(lat, m, side, opts)? {
        return Ok(None);
    }
    let (la, lb) = (lat.a(), lat.b());
    let other = lat.ratio(side).scale(&BigInt::from(m))?.floor()?;
    let j_other = other.to_u64().ok_or_else(|| LatticeError::Precondition("index overflow".into()))?;
    let (l_self, l_other) = match side {
        Side::A => (la, lb),
        Side::B => (lb, la),
    };
    let anchor = lat.anchor(m, side);
    let alpha = lat.alpha();
    let gap = if alpha > 0.0 {
        // Continuity interval [anchor, k_hi) with offsets (m, j_other).
        let k_hi = (((m + 1) as f64 * PI) / l_self).min(((j_other + 1) as f64 * PI) / l_other);
        let (ja, jb) = match side {
            Side::A => (m, j_other),
            Side::B => (j_other, m),
        };
        let f = |k: f64| secular_bound(k, la, lb, ja, jb, false);
        let k_right = bisect(anchor, k_hi, opts.tol_k, |k| f(k) < alpha);
        GapInterval { m, side, fixed_endpoint: Endpoint::Left, k_left: anchor, k_right, extends_below_zero: false }
    } else {
        let target = -alpha;
        // Continuity interval (k_lo, anchor] with offsets (m - 1, j_other).
        let k_lo = (((m - 1) as f64 * PI) / l_self).max((j_other as f64 * PI) / l_other);
        let (ja, jb) = match side {
            Side::A => (m - 1, j_other),
            Side::B => (j_other, m - 1),
        };
        if k_lo == 0.0 && target >= 4.0 / la + 4.0 / lb {
            GapInterval { m, side, fixed_endpoint: Endpoint::Right, k_left: 0.0, k_right: anchor, extends_below_zero: true }
        } else {
            let g = |k: f64| secular_bound(k, la, lb, ja, jb, true);
            // G decreases in k, so the gap is where G < |alpha|.
            let k_left = bisect(k_lo, anchor, opts.tol_k, |k| g(k) >= target);
            GapInterval { m, side, fixed_endpoint: Endpoint::Right, k_left, k_right: anchor, extends_below_zero: false }
        }
    };
    Ok(Some(gap))
}

/// `F(k)` (tangent form) or `G(k)` (cotangent form) on the continuity
/// interval with offsets `(ja, jb)`; poles are reported as `+inf`.
fn secular_bound(k: f64, a: f64, b: f64, ja: u64, jb: u64, cot: bool) -> f64 {
    let xa = (k * a - ja as f64 * PI) / 2.0;
    let xb = (k * b - jb as f64 * PI) / 2.0;
    let term = |x: f64| {
        if cot {
            if x <= 0.0 {
                f64::INFINITY
            } else {
                1.0 / x.tan()
            }
        } else if x >= FRAC_PI_2 {
            f64::INFINITY
        } else {
            x.tan()
        }
    };
    2.0 * k * (term(xa) + term(xb))
}

/// Bisection on `[lo, hi]` where `below(lo)` holds and `below(hi)` fails;
/// returns the midpoint of the final bracket.
fn bisect(mut lo: f64, mut hi: f64, tol: f64, below: impl Fn(f64) -> bool) -> f64 {
    while hi - lo > tol * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden(alpha: f64) -> DeltaLattice {
        DeltaLattice::from_ratio(1.0, alpha, ExactReal::golden()).unwrap()
    }

    #[test]
    fn zero_alpha_has_no_gaps() {
        let lat = golden(0.0);
        assert!(enumerate_gaps(&lat, 100.0).unwrap().is_empty());
        assert_eq!(gap_condition(&lat, 1, Side::A), Err(LatticeError::InvalidAlpha));
    }

    #[test]
    fn fixed_endpoints_sit_on_anchors() {
        for alpha in [6.0, -4.5] {
            let lat = golden(alpha);
            let list = enumerate_gaps(&lat, 60.0 * PI).unwrap();
            assert!(!list.is_empty());
            for g in &list.gaps {
                assert_eq!(g.fixed_k(), lat.anchor(g.m, g.side));
                assert!(g.k_left < g.k_right);
            }
        }
    }

    #[test]
    fn free_endpoint_solves_secular_bound() {
        let lat = golden(6.0);
        let g = &enumerate_gaps(&lat, 30.0).unwrap().gaps[0];
        let (ja, jb) = match g.side {
            Side::A => (g.m, (g.k_left * lat.b() / PI) as u64),
            Side::B => ((g.k_left * lat.a() / PI) as u64, g.m),
        };
        let f = secular_bound(g.k_right, lat.a(), lat.b(), ja, jb, false);
        assert!((f - 6.0).abs() < 1e-6, "F(k_right) = {f}");
    }

    #[test]
    fn rational_ratio_flags_resonances() {
        let lat = DeltaLattice::from_ratio(1.0, 1.0, ExactReal::integer(1)).unwrap();
        let list = enumerate_gaps(&lat, 10.0).unwrap();
        assert!(list.gaps.is_empty());
        assert_eq!(list.skipped.len(), 6);
    }
}
