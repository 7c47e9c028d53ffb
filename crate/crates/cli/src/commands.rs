use std::path::PathBuf;

use bsgraph::diophantine::ExactReal;
use bsgraph::floquet::{band_scan, ScanOptions, UnitCellGraph};
use bsgraph::lattice::{
    classify_with, construct_bs_ratio, enumerate_gaps_with, golden_n_gap_window, output, DeltaLattice, GapOptions,
    Scheme, Verdict,
};
use bsgraph::report::fmt_f64;

use crate::config::{Command, Format, Options};
use crate::error::CliError;

const DEFAULT_A: f64 = 1.0;
const DEFAULT_GAPS_KMAX: f64 = 100.0;
const DEFAULT_MHORIZON: u64 = 1000;

/// What a command produced: the document, an optional one-line summary for
/// humans, and an error to report after the document has been written.
pub struct Outcome {
    pub body: String,
    pub summary: Option<String>,
    pub deferred: Option<CliError>,
    pub out: Option<PathBuf>,
}

fn required<T>(v: Option<T>, name: &str, command: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Missing(format!("`{command}` needs --{name}")))
}

fn positive(v: f64, name: &str) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{name} must be positive, got {v}")))
    }
}

fn exact(text: &str, name: &str) -> Result<ExactReal, CliError> {
    text.parse::<ExactReal>().map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

fn gap_options(o: &Options) -> Result<GapOptions, CliError> {
    let mut g = GapOptions::default();
    if let Some(bits) = o.precision {
        if bits < 64 {
            return Err(CliError::Usage(format!("--precision must be at least 64 bits, got {bits}")));
        }
        g.max_bits = bits;
    }
    Ok(g)
}

fn lattice(o: &Options, command: &str) -> Result<DeltaLattice, CliError> {
    let theta = exact(required(o.theta.as_deref(), "theta", command)?, "theta")?;
    let alpha = required(o.alpha, "alpha", command)?;
    let a = positive(o.a.unwrap_or(DEFAULT_A), "a")?;
    Ok(match o.b {
        Some(b) => DeltaLattice::new(a, positive(b, "b")?, alpha, theta)?,
        None => DeltaLattice::from_ratio(a, alpha, theta)?,
    })
}

fn json_only(o: &Options, command: &str) -> Result<(), CliError> {
    match o.format {
        Some(Format::Csv) => Err(CliError::Usage(format!("`{command}` only writes JSON"))),
        _ => Ok(()),
    }
}

pub fn run(command: Command, o: &Options) -> Result<Outcome, CliError> {
    let done = |body: String, summary: Option<String>| Outcome { body, summary, deferred: None, out: o.out.clone() };
    match command {
        Command::Analyze => {
            json_only(o, "analyze")?;
            let lat = lattice(o, "analyze")?;
            let horizon = o.mhorizon.unwrap_or(DEFAULT_MHORIZON);
            let c = classify_with(&lat, horizon, &gap_options(o)?)?;
            let summary = format!(
                "{:?}: alpha = {}, threshold = {}, {} witness(es) up to m = {horizon}",
                c.verdict,
                fmt_f64(c.alpha),
                fmt_f64(c.upper_threshold),
                c.witnesses.len()
            );
            let deferred = (c.verdict == Verdict::Inconclusive && c.budget_exhausted)
                .then(|| CliError::Budget("classification inconclusive: precision budget exhausted".into()));
            Ok(Outcome { deferred, ..done(output::classification_json(&lat, &c), Some(summary)) })
        }
        Command::Gaps => {
            let lat = lattice(o, "gaps")?;
            let k_max = positive(o.kmax.unwrap_or(DEFAULT_GAPS_KMAX), "kmax")?;
            let list = enumerate_gaps_with(&lat, k_max, &gap_options(o)?)?;
            let body = match o.format.unwrap_or(Format::Json) {
                Format::Json => output::gaps_json(&lat, k_max, &list),
                Format::Csv => output::gaps_csv(&list),
            };
            let summary = format!("{} gap(s) with k <= {}", list.len(), fmt_f64(k_max));
            Ok(done(body, Some(summary)))
        }
        Command::Window => {
            json_only(o, "window")?;
            let n = required(o.n, "N", "window")?;
            let w = golden_n_gap_window(n, positive(o.a.unwrap_or(DEFAULT_A), "a")?)?;
            let summary = format!("{n} gap(s) for alpha in [{}, {})", fmt_f64(w.lower), fmt_f64(w.upper));
            Ok(done(output::window_json(&w), Some(summary)))
        }
        Command::Construct => {
            json_only(o, "construct")?;
            let beta = exact(required(o.beta.as_deref(), "beta", "construct")?, "beta")?;
            let t = required(o.t, "t", "construct")?;
            let scheme: Scheme = o.scheme.as_deref().unwrap_or("t").parse()?;
            let c = construct_bs_ratio(&beta, t, scheme)?;
            let summary = format!("theta = {} (repulsive: {}, attractive: {})", c.theta_symbolic, c.repulsive, c.attractive);
            Ok(done(output::construction_json(&c), Some(summary)))
        }
        Command::Scan => {
            let path = required(o.cell.as_ref(), "cell", "scan")?;
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let cell: UnitCellGraph = text.parse()?;
            let d = ScanOptions::default();
            let opts = ScanOptions {
                k_min: o.kmin.unwrap_or(d.k_min),
                k_max: o.kmax.unwrap_or(d.k_max),
                k_step: o.kstep.unwrap_or(d.k_step),
                theta_resolution: o.theta_res.unwrap_or(d.theta_resolution),
                gap_margin: o.gap_margin.unwrap_or(d.gap_margin),
                band_tol: o.band_tol.unwrap_or(d.band_tol),
                refine_tol: d.refine_tol,
            };
            let scan = band_scan(&cell, &opts)?;
            let body = match o.format.unwrap_or(Format::Csv) {
                Format::Json => scan.to_json(),
                Format::Csv => scan.to_csv()?,
            };
            let gaps: Vec<String> =
                scan.gaps().map(|g| format!("[{}, {}]", fmt_f64(g.k_left), fmt_f64(g.k_right))).collect();
            let summary = format!("{} sample(s), gaps: {}", scan.samples.len(), gaps.join(" "));
            Ok(done(body, Some(summary)))
        }
    }
}
