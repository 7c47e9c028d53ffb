//! Band/gap classification of momenta by sampling the secular function
//! over the Brillouin torus.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::cell::UnitCellGraph;
use super::secular::SecularFiber;
use super::FloquetError;

pub const SCAN_SCHEMA: &str = "bsgraph.scan.v1";

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanOptions {
    pub k_min: f64,
    pub k_max: f64,
    pub k_step: f64,
    /// Grid points per quasimomentum component.
    pub theta_resolution: usize,
    /// Smallest `min |F|` that counts as a gap.
    pub gap_margin: f64,
    /// `|F|` below this counts as a zero.
    pub band_tol: f64,
    /// Relative width at which edge bisection stops.
    pub refine_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            k_min: 0.01,
            k_max: 10.0,
            k_step: 0.01,
            theta_resolution: 32,
            gap_margin: 1e-12,
            band_tol: 1e-14,
            refine_tol: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Band,
    Gap,
    Unresolved,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Band => "band",
            Label::Gap => "gap",
            Label::Unresolved => "unresolved",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanSample {
    pub k: f64,
    /// Smallest `|F|` seen on the grid; for bands only up to the first zero
    /// or sign change.
    pub min_abs_f: f64,
    pub label: Label,
    /// `min_abs_f` minus the off-grid Lipschitz bound; positive means the
    /// gap holds on the whole torus.
    pub margin: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanInterval {
    pub k_left: f64,
    pub k_right: f64,
    pub label: Label,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SecularScan {
    pub options: ScanOptions,
    /// Bound on `|F(theta) - F(grid point)|` over a grid cell.
    pub lipschitz_bound: f64,
    pub samples: Vec<ScanSample>,
    pub intervals: Vec<ScanInterval>,
}

impl SecularScan {
    pub fn gaps(&self) -> impl Iterator<Item = &ScanInterval> {
        self.intervals.iter().filter(|i| i.label == Label::Gap)
    }

    /// Full scan as a `bsgraph.scan.v1` JSON document.
    pub fn to_json(&self) -> String {
        crate::report::document(SCAN_SCHEMA, self)
    }

    /// Samples as CSV with columns `k,min_abs_F,label,margin`.
    pub fn to_csv(&self) -> Result<String, FloquetError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| FloquetError::Precondition(e.to_string());
        w.write_record(["k", "min_abs_F", "label", "margin"]).map_err(io)?;
        for s in &self.samples {
            w.write_record([
                crate::report::fmt_f64(s.k),
                crate::report::fmt_f64(s.min_abs_f),
                s.label.as_str().to_string(),
                crate::report::fmt_f64(s.margin),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| FloquetError::Precondition(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// Grid `theta_j = -pi + 2 pi (j + 1) / res`, `j = 0..res`, ending at `pi`.
fn grid(res: usize) -> Vec<f64> {
    (0..res).map(|j| -PI + 2.0 * PI * (j + 1) as f64 / res as f64).collect()
}

/// Label and `min |F|` of one momentum.
fn classify_fiber(fiber: &SecularFiber, nu: usize, axis: &[f64], opts: &ScanOptions) -> Result<(Label, f64), FloquetError> {
    let res = axis.len();
    let total = res.checked_pow(nu as u32).ok_or_else(|| FloquetError::Precondition("theta grid too large".into()))?;
    let mut theta = vec![0.0; nu];
    let (mut min_abs, mut pos, mut neg) = (f64::INFINITY, false, false);
    for idx in 0..total {
        let mut rest = idx;
        for t in theta.iter_mut() {
            *t = axis[rest % res];
            rest /= res;
        }
        let f = fiber.real(&theta)?;
        min_abs = min_abs.min(f.abs());
        pos |= f > 0.0;
        neg |= f < 0.0;
        if (pos && neg) || f.abs() < opts.band_tol {
            return Ok((Label::Band, min_abs));
        }
    }
    let label = if min_abs >= opts.gap_margin { Label::Gap } else { Label::Unresolved };
    Ok((label, min_abs))
}

struct Scanner<'a> {
    cell: &'a UnitCellGraph,
    axis: Vec<f64>,
    opts: ScanOptions,
    lipschitz: f64,
}

impl Scanner<'_> {
    fn sample(&self, k: f64) -> Result<ScanSample, FloquetError> {
        let (label, min_abs_f) = match SecularFiber::new(self.cell, k) {
            Ok(fiber) => classify_fiber(&fiber, self.cell.nu(), &self.axis, &self.opts)?,
            Err(FloquetError::SingularResolvent) => (Label::Unresolved, 0.0),
            Err(e) => return Err(e),
        };
        Ok(ScanSample { k, min_abs_f, label, margin: min_abs_f - self.lipschitz })
    }

    /// Boundary between `lo` (labelled `from`) and `hi` (labelled `to`).
    /// A band certificate is definitive, so transitions involving a band
    /// track the band label; others track `from`.
    fn refine(&self, mut lo: f64, mut hi: f64, from: Label, to: Label) -> Result<f64, FloquetError> {
        let tracked = if to == Label::Band { Label::Band } else { from };
        let on_lo_side = |l: Label| (l == tracked) == (from == tracked);
        while hi - lo > self.opts.refine_tol * hi {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if on_lo_side(self.sample(mid)?.label) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// `sum_l c_l 2^(N-1) h/2`, where `c_l` counts the bonds carrying `theta_l`,
/// `N` is the bond count and `h` the grid spacing.
pub fn lipschitz_bound(cell: &UnitCellGraph, theta_resolution: usize) -> f64 {
    let bonds = 2 * cell.edges().len();
    let carrying = 2 * cell.edges().iter().filter(|e| e.phase.is_some()).count();
    let h = 2.0 * PI / theta_resolution as f64;
    carrying as f64 * 2f64.powi(bonds as i32 - 1) * h / 2.0
}

/// Samples `k_min, k_min + k_step, ...` up to `k_max` and merges equal
/// labels into intervals; every transition is refined by bisection.
pub fn band_scan(cell: &UnitCellGraph, opts: &ScanOptions) -> Result<SecularScan, FloquetError> {
    if !(opts.k_min > 0.0 && opts.k_max >= opts.k_min && opts.k_step > 0.0) {
        return Err(FloquetError::Precondition("need 0 < k_min <= k_max and k_step > 0".into()));
    }
    if opts.theta_resolution == 0 {
        return Err(FloquetError::Precondition("theta resolution must be positive".into()));
    }
    let scanner = Scanner {
        cell,
        axis: grid(opts.theta_resolution),
        opts: *opts,
        lipschitz: lipschitz_bound(cell, opts.theta_resolution),
    };
    let steps = ((opts.k_max - opts.k_min) / opts.k_step).floor() as usize;
    let mut ks: Vec<f64> = (0..=steps).map(|i| opts.k_min + i as f64 * opts.k_step).collect();
    if *ks.last().expect("non-empty") < opts.k_max {
        ks.push(opts.k_max);
    }
    let samples = ks.par_iter().map(|&k| scanner.sample(k)).collect::<Result<Vec<_>, _>>()?;

    let changes: Vec<usize> = (1..samples.len()).filter(|&i| samples[i].label != samples[i - 1].label).collect();
    let edges = changes
        .par_iter()
        .map(|&i| {
            let (a, b) = (&samples[i - 1], &samples[i]);
            scanner.refine(a.k, b.k, a.label, b.label)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut intervals = Vec::with_capacity(changes.len() + 1);
    let mut start = (samples[0].k, samples[0].label);
    for (&i, &edge) in changes.iter().zip(&edges) {
        intervals.push(ScanInterval { k_left: start.0, k_right: edge, label: start.1 });
        start = (edge, samples[i].label);
    }
    intervals.push(ScanInterval { k_left: start.0, k_right: samples[samples.len() - 1].k, label: start.1 });

    Ok(SecularScan { options: *opts, lipschitz_bound: scanner.lipschitz, samples, intervals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_half_open_and_ends_at_pi() {
        let g = grid(8);
        assert_eq!(g.len(), 8);
        assert_eq!(*g.last().unwrap(), PI);
        assert!(g[0] > -PI);
    }

    #[test]
    fn kirchhoff_lattice_has_no_gaps() {
        let cell = UnitCellGraph::rectangular_lattice(1.0, 0.618, 0.0).unwrap();
        let opts = ScanOptions { k_min: 0.1, k_max: 3.0, k_step: 0.1, theta_resolution: 16, ..Default::default() };
        let scan = band_scan(&cell, &opts).unwrap();
        assert!(scan.samples.iter().all(|s| s.label == Label::Band));
        assert_eq!(scan.intervals.len(), 1);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let cell = UnitCellGraph::rectangular_lattice(1.0, 0.618, 0.0).unwrap();
        let opts = ScanOptions { k_min: 1.0, k_max: 1.2, k_step: 0.1, theta_resolution: 4, ..Default::default() };
        let csv = band_scan(&cell, &opts).unwrap().to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,min_abs_F,label,margin");
        assert_eq!(lines.len(), 4);
    }
}
