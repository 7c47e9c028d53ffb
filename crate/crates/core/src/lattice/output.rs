//! JSON and CSV forms of lattice results.

use serde::Serialize;

use super::{AlphaWindow, BsConstruction, DeltaLattice, GapClassification, GapList, SignChecks};
use crate::report::{document, fmt_f64};

pub const GAPS_SCHEMA: &str = "bsgraph.gaps.v1";
pub const CLASSIFICATION_SCHEMA: &str = "bsgraph.classification.v1";
pub const WINDOW_SCHEMA: &str = "bsgraph.window.v1";
pub const CONSTRUCTION_SCHEMA: &str = "bsgraph.construction.v1";
pub const SIGN_CHECKS_SCHEMA: &str = "bsgraph.signchecks.v1";

#[derive(Serialize)]
struct LatticeParams<'a> {
    a: f64,
    b: f64,
    alpha: f64,
    theta: String,
    theta_value: f64,
    #[serde(skip)]
    _lat: std::marker::PhantomData<&'a ()>,
}

impl LatticeParams<'_> {
    fn of(lat: &DeltaLattice) -> Self {
        LatticeParams {
            a: lat.a(),
            b: lat.b(),
            alpha: lat.alpha(),
            theta: lat.theta().to_string(),
            theta_value: lat.theta().to_f64(),
            _lat: std::marker::PhantomData,
        }
    }
}

#[derive(Serialize)]
struct GapRow {
    m: u64,
    side: &'static str,
    fixed_endpoint: &'static str,
    k_left: f64,
    k_right: f64,
    energy_left: f64,
    energy_right: f64,
    extends_below_zero: bool,
}

pub fn gaps_json(lat: &DeltaLattice, k_max: f64, list: &GapList) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        lattice: LatticeParams<'a>,
        k_max: f64,
        count: usize,
        gaps: Vec<GapRow>,
        skipped: &'a [super::SkippedCandidate],
    }
    let gaps = list
        .gaps
        .iter()
        .map(|g| GapRow {
            m: g.m,
            side: g.side.label(),
            fixed_endpoint: match g.fixed_endpoint {
                super::Endpoint::Left => "left",
                super::Endpoint::Right => "right",
            },
            k_left: g.k_left,
            k_right: g.k_right,
            energy_left: g.energy_left(),
            energy_right: g.energy_right(),
            extends_below_zero: g.extends_below_zero,
        })
        .collect();
    document(
        GAPS_SCHEMA,
        &Doc { lattice: LatticeParams::of(lat), k_max, count: list.len(), gaps, skipped: &list.skipped },
    )
}

pub fn gaps_csv(list: &GapList) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["m", "side", "k_left", "k_right", "energy_left", "energy_right"]).expect("in-memory write");
    for g in &list.gaps {
        w.write_record([
            g.m.to_string(),
            g.side.label().to_string(),
            fmt_f64(g.k_left),
            fmt_f64(g.k_right),
            fmt_f64(g.energy_left()),
            fmt_f64(g.energy_right()),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn classification_json(lat: &DeltaLattice, c: &GapClassification) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        lattice: LatticeParams<'a>,
        #[serde(flatten)]
        classification: &'a GapClassification,
    }
    document(CLASSIFICATION_SCHEMA, &Doc { lattice: LatticeParams::of(lat), classification: c })
}

pub fn window_json(w: &AlphaWindow) -> String {
    document(WINDOW_SCHEMA, w)
}

pub fn construction_json(c: &BsConstruction) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        #[serde(flatten)]
        construction: &'a BsConstruction,
        windows: Vec<Option<(f64, f64)>>,
    }
    let windows = c.checks.iter().map(|x| x.alpha_b_window()).collect();
    document(CONSTRUCTION_SCHEMA, &Doc { construction: c, windows })
}

pub fn sign_checks_json(s: &SignChecks) -> String {
    document(SIGN_CHECKS_SCHEMA, s)
}
