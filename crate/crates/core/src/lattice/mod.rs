//! Rectangular lattice graph with edge lengths `a`, `b` and a delta coupling
//! of strength `alpha` at every vertex.
//!
//! Gaps are anchored at the points `m*pi/a` (side [`Side::A`]) or `m*pi/b`
//! (side [`Side::B`]): for `alpha > 0` the anchor is the lower end of the gap,
//! for `alpha < 0` the upper end. Whether a gap sits at a given anchor is a
//! tangent inequality in the fractional part of `m*b/a` or `m*a/b`; those
//! fractional parts are computed exactly.

mod certify;
mod classify;
mod construct;
mod gaps;
mod golden;
pub mod output;

use serde::Serialize;
use thiserror::Error;

use crate::diophantine::{DiophantineError, ExactReal};

pub use classify::{certified_gap_count, classify, classify_with, GammaBound, GapClassification, Verdict, Witness};
pub use construct::{both_sign_checks, construct_bs_ratio, BsConstruction, InequalityCheck, Scheme, Sign, SignChecks};
pub use gaps::{enumerate_gaps, enumerate_gaps_with, gap_condition, gap_condition_with, gap_lhs, GapList, SkippedCandidate};
pub use golden::{golden_a_j, golden_n_gap_window, AlphaWindow};

/// Relative tolerance on `a/b` against the exact ratio.
const RATIO_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("m*ratio is an integer at m = {m} on side {side:?}; the gap condition degenerates")]
    DegenerateResonance { m: u64, side: Side },
    #[error("gap condition at m = {m} on side {side:?} could not be certified within {bits} bits")]
    UncertifiedComparison { m: u64, side: Side, bits: usize },
    #[error("alpha = 0 gives the free Laplacian, which has no gaps")]
    InvalidAlpha,
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("condition on t fails for t = {t}; the smallest admissible t is {minimal_t}")]
    ConditionTViolated { t: u32, minimal_t: u32 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Diophantine(#[from] DiophantineError),
}

/// Which family of anchors a gap belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
pub enum Side {
    /// Anchored at `m*pi/a`; the condition involves `m*b/a`.
    A,
    /// Anchored at `m*pi/b`; the condition involves `m*a/b`.
    B,
}

impl Side {
    pub fn label(self) -> &'static str {
        match self {
            Side::A => "a",
            Side::B => "b",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Endpoint {
    Left,
    Right,
}

/// Tolerances shared by the lattice operations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapOptions {
    /// Relative tolerance on the free endpoint in `k`.
    pub tol_k: f64,
    /// Largest binary precision tried by the certification ladder.
    pub max_bits: usize,
}

impl Default for GapOptions {
    fn default() -> Self {
        GapOptions { tol_k: 1e-12, max_bits: 1024 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaLattice {
    a: f64,
    b: f64,
    alpha: f64,
    theta: ExactReal,
    theta_inv: ExactReal,
}

impl DeltaLattice {
    /// Checks `a, b > 0`, an exact positive `theta` and `|a/b - theta| <= 1e-12 theta`.
    pub fn new(a: f64, b: f64, alpha: f64, theta: ExactReal) -> Result<Self, LatticeError> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(LatticeError::InvalidLattice(format!("edge lengths must be positive, got a = {a}, b = {b}")));
        }
        if !alpha.is_finite() {
            return Err(LatticeError::InvalidLattice(format!("alpha must be finite, got {alpha}")));
        }
        if !theta.is_exact() {
            return Err(DiophantineError::FloatNotSupported.into());
        }
        if !theta.is_positive() {
            return Err(LatticeError::InvalidLattice("theta must be positive".into()));
        }
        let t = theta.to_f64();
        if (a / b - t).abs() > RATIO_TOLERANCE * t {
            return Err(LatticeError::InvalidLattice(format!("a/b = {} disagrees with theta = {theta}", a / b)));
        }
        let theta_inv = theta.checked_recip()?;
        Ok(DeltaLattice { a, b, alpha, theta, theta_inv })
    }

    /// Lattice with `b = a/theta`.
    pub fn from_ratio(a: f64, alpha: f64, theta: ExactReal) -> Result<Self, LatticeError> {
        let b = a / theta.to_f64();
        Self::new(a, b, alpha, theta)
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn theta(&self) -> &ExactReal {
        &self.theta
    }

    /// Same geometry with another coupling.
    pub fn with_alpha(&self, alpha: f64) -> Self {
        DeltaLattice { alpha, ..self.clone() }
    }

    /// Exact ratio whose multiples decide the gap condition on `side`.
    pub(crate) fn ratio(&self, side: Side) -> &ExactReal {
        match side {
            Side::A => &self.theta_inv,
            Side::B => &self.theta,
        }
    }

    pub(crate) fn length(&self, side: Side) -> f64 {
        match side {
            Side::A => self.a,
            Side::B => self.b,
        }
    }

    /// Anchor `m*pi/length`.
    pub fn anchor(&self, m: u64, side: Side) -> f64 {
        (m as f64 * std::f64::consts::PI) / self.length(side)
    }
}

/// One spectral gap `(k_left^2, k_right^2)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapInterval {
    pub m: u64,
    pub side: Side,
    /// The endpoint that sits on an anchor.
    pub fixed_endpoint: Endpoint,
    pub k_left: f64,
    pub k_right: f64,
    /// For `alpha < 0` the first gap can extend below zero energy; `k_left`
    /// is then reported as 0.
    pub extends_below_zero: bool,
}

impl GapInterval {
    pub fn energy_left(&self) -> f64 {
        self.k_left * self.k_left
    }
    pub fn energy_right(&self) -> f64 {
        self.k_right * self.k_right
    }
    pub fn fixed_k(&self) -> f64 {
        match self.fixed_endpoint {
            Endpoint::Left => self.k_left,
            Endpoint::Right => self.k_right,
        }
    }
    pub fn width(&self) -> f64 {
        self.k_right - self.k_left
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_must_match_lengths() {
        let phi = ExactReal::golden();
        assert!(DeltaLattice::new(1.0, 1.0, 1.0, phi.clone()).is_err());
        assert!(DeltaLattice::from_ratio(2.0, 1.0, phi.clone()).is_ok());
        assert!(DeltaLattice::new(-1.0, 1.0, 1.0, phi).is_err());
    }

    #[test]
    fn float_theta_is_rejected() {
        let t = ExactReal::float(1.618, 4).unwrap();
        assert!(matches!(
            DeltaLattice::from_ratio(1.0, 1.0, t),
            Err(LatticeError::Diophantine(DiophantineError::FloatNotSupported))
        ));
    }
}
