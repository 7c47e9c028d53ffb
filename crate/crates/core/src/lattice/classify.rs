//! Finite / infinite / no-gap classification.

use std::cmp::Ordering;

use astro_float_num::BigFloat;
use rayon::prelude::*;
use serde::Serialize;

use super::certify::{Coef, TanTerm};
use super::gaps::{condition_fraction, gap_condition_with};
use super::{DeltaLattice, GapOptions, LatticeError, Side};
use crate::diophantine::{ExactReal, FloorProductProfile};
use crate::precision::{certified_cmp, BigCtx};

const THRESHOLD_BITS: usize = 256;
/// Width of the band around the threshold that counts as equality.
const EQUALITY_ULPS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    NoGaps,
    FiniteNonzero,
    /// Finitely many gaps, possibly none; the horizon did not settle which.
    Finite,
    Infinite,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub m: u64,
    pub side: Side,
    pub lhs: f64,
}

/// Bounds on the smallest left-hand side over all `m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaBound {
    /// Minimum over `m <= m_horizon`.
    pub value: f64,
    pub argmin: (u64, Side),
    /// Lower bound on every left-hand side with `m > m_horizon`.
    pub tail: f64,
    /// True when `tail >= value`, so `value` is the exact infimum.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapClassification {
    pub verdict: Verdict,
    pub alpha: f64,
    pub m_horizon: u64,
    /// `pi^2 * min(liminf_b / b, liminf_a / a)`.
    pub upper_threshold: f64,
    /// Exact liminf of the side-B floor product.
    pub liminf_b: String,
    /// Exact liminf of the side-A floor product.
    pub liminf_a: String,
    pub lower_threshold: Option<GammaBound>,
    pub witnesses: Vec<Witness>,
    pub rational: bool,
    pub golden_special_case: bool,
    /// True when the verdict is inconclusive only because the precision
    /// ladder ran out.
    pub budget_exhausted: bool,
    pub notes: Vec<String>,
}

/// Floor-product argument for each side: `m r` for `alpha > 0`, `-m r` for
/// `alpha < 0` so that ceiling parts become floor parts.
fn signed_ratio(lat: &DeltaLattice, side: Side) -> Result<ExactReal, LatticeError> {
    let r = lat.ratio(side).clone();
    Ok(if lat.alpha() < 0.0 { r.checked_neg()? } else { r })
}

/// `pi^2 * x / length`.
fn pi2_over(ctx: &mut BigCtx, x: &ExactReal, length: f64) -> BigFloat {
    let pi = ctx.pi();
    let pi2 = ctx.mul(&pi, &pi);
    let v = ctx.exact(x);
    let num = ctx.mul(&pi2, &v);
    ctx.div(&num, &ctx.f64(length))
}

fn big_min(x: BigFloat, y: BigFloat) -> BigFloat {
    if x.cmp(&y).is_some_and(|c| c <= 0) {
        x
    } else {
        y
    }
}

struct Profiles {
    b: FloorProductProfile,
    a: FloorProductProfile,
}

impl Profiles {
    fn new(lat: &DeltaLattice) -> Result<Self, LatticeError> {
        Ok(Profiles {
            b: FloorProductProfile::new(&signed_ratio(lat, Side::B)?)?,
            a: FloorProductProfile::new(&signed_ratio(lat, Side::A)?)?,
        })
    }

    fn scaled_min(&self, lat: &DeltaLattice, ctx: &mut BigCtx, pick: impl Fn(&FloorProductProfile) -> ExactReal) -> BigFloat {
        let vb = pi2_over(ctx, &pick(&self.b), lat.b());
        let va = pi2_over(ctx, &pick(&self.a), lat.a());
        big_min(vb, va)
    }
}

fn is_golden(theta: &ExactReal) -> bool {
    let phi = ExactReal::golden();
    theta == &phi || phi.checked_recip().is_ok_and(|inv| theta == &inv)
}

/// Smallest left-hand side seen and where it occurred.
type HorizonMin = (f64, u64, Side);

/// Witnesses and left-hand sides for `m <= h` on both sides.
fn scan_horizon(lat: &DeltaLattice, h: u64, opts: &GapOptions) -> Result<(Vec<Witness>, HorizonMin), LatticeError> {
    let cells: Vec<(u64, Side)> = [Side::A, Side::B].into_iter().flat_map(|s| (1..=h).map(move |m| (m, s))).collect();
    let rows: Vec<Result<(u64, Side, f64, bool), LatticeError>> = cells
        .par_iter()
        .map(|&(m, side)| {
            let f = condition_fraction(lat, m, side)?;
            let lhs = TanTerm { m, frac: &f, coef: Coef::TwoPiOver(lat.length(side)) }.value_f64().0;
            Ok((m, side, lhs, gap_condition_with(lat, m, side, opts)?))
        })
        .collect();
    let mut witnesses = Vec::new();
    let mut best = (f64::INFINITY, 1, Side::A);
    for row in rows {
        let (m, side, lhs, holds) = row?;
        if holds {
            witnesses.push(Witness { m, side, lhs });
        }
        if lhs < best.0 {
            best = (lhs, m, side);
        }
    }
    witnesses.sort_by(|x, y| x.side.cmp(&y.side).then(x.m.cmp(&y.m)));
    Ok((witnesses, best))
}

/// Classification with witness search up to `m_horizon`.
pub fn classify(lat: &DeltaLattice, m_horizon: u64) -> Result<GapClassification, LatticeError> {
    classify_with(lat, m_horizon, &GapOptions::default())
}

pub fn classify_with(lat: &DeltaLattice, m_horizon: u64, opts: &GapOptions) -> Result<GapClassification, LatticeError> {
    if m_horizon == 0 {
        return Err(LatticeError::Precondition("m_horizon must be positive".into()));
    }
    let alpha = lat.alpha();
    let target = alpha.abs();
    let mut out = GapClassification {
        verdict: Verdict::Inconclusive,
        alpha,
        m_horizon,
        upper_threshold: 0.0,
        liminf_b: "0/1".into(),
        liminf_a: "0/1".into(),
        lower_threshold: None,
        witnesses: Vec::new(),
        rational: lat.theta().is_rational(),
        golden_special_case: false,
        budget_exhausted: false,
        notes: Vec::new(),
    };
    if alpha == 0.0 {
        out.verdict = Verdict::NoGaps;
        out.notes.push("alpha = 0: the spectrum is [0, inf)".into());
        return Ok(out);
    }
    if out.rational {
        out.verdict = Verdict::Infinite;
        out.notes.push("rational edge ratio: upsilon = 0, so every nonzero alpha gives infinitely many gaps".into());
        return Ok(out);
    }

    let profiles = Profiles::new(lat)?;
    out.liminf_b = profiles.b.liminf().to_string();
    out.liminf_a = profiles.a.liminf().to_string();
    let mut ctx = BigCtx::new(THRESHOLD_BITS);
    let threshold = profiles.scaled_min(lat, &mut ctx, FloorProductProfile::liminf);
    // The threshold is irrational, so "equality" means a band of a few ulps
    // around the certified bracket; ordinary f64 formulas for it land there.
    let bracket_lo = ctx.to_f64_toward_zero(&threshold);
    let t_lo = (0..EQUALITY_ULPS).fold(bracket_lo, |x, _| x.next_down());
    let t_hi = (0..=EQUALITY_ULPS).fold(bracket_lo, |x, _| x.next_up());
    out.upper_threshold = ctx.to_f64(&threshold);

    if target > t_hi {
        out.verdict = Verdict::Infinite;
        return Ok(out);
    }
    if target >= t_lo {
        if is_golden(lat.theta()) {
            out.golden_special_case = true;
            out.verdict = if alpha > 0.0 { Verdict::NoGaps } else { Verdict::Infinite };
            out.notes.push("|alpha| equals the threshold to within four ulps; golden-mean case resolved".into());
        } else {
            out.verdict = Verdict::Inconclusive;
            out.notes.push("|alpha| equals the threshold to within four ulps".into());
        }
        return Ok(out);
    }

    let (witnesses, best) = match scan_horizon(lat, m_horizon, opts) {
        Ok(r) => r,
        Err(LatticeError::UncertifiedComparison { m, side, bits }) => {
            out.notes.push(format!("comparison at m = {m}, side {side:?} unresolved at {bits} bits"));
            out.budget_exhausted = true;
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let tail_big = profiles.scaled_min(lat, &mut ctx, |p| p.tail_lower_bound(m_horizon));
    let tail = ctx.to_f64_toward_zero(&tail_big);
    out.lower_threshold =
        Some(GammaBound { value: best.0, argmin: (best.1, best.2), tail, certified: tail >= best.0 * (1.0 + 1e-12) });
    let tail_covers = certified_cmp(&ctx.f64(target), &tail_big, 4.0 * ctx.eps(), &ctx) == Some(Ordering::Less)
        || target <= tail;
    out.verdict = if !witnesses.is_empty() {
        Verdict::FiniteNonzero
    } else if tail_covers {
        Verdict::NoGaps
    } else {
        Verdict::Finite
    };
    out.witnesses = witnesses;
    Ok(out)
}

/// Exact gap count when `m_horizon` is large enough that the tail bound
/// rules out gaps beyond it; `None` otherwise.
pub fn certified_gap_count(lat: &DeltaLattice, m_horizon: u64) -> Result<Option<usize>, LatticeError> {
    if lat.alpha() == 0.0 {
        return Ok(Some(0));
    }
    if lat.theta().is_rational() {
        return Ok(None);
    }
    let profiles = Profiles::new(lat)?;
    let mut ctx = BigCtx::new(THRESHOLD_BITS);
    let tail = profiles.scaled_min(lat, &mut ctx, |p| p.tail_lower_bound(m_horizon));
    let covered = certified_cmp(&ctx.f64(lat.alpha().abs()), &tail, 4.0 * ctx.eps(), &ctx) == Some(Ordering::Less);
    if !covered {
        return Ok(None);
    }
    let (witnesses, _) = scan_horizon(lat, m_horizon, &GapOptions::default())?;
    Ok(Some(witnesses.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden(alpha: f64) -> DeltaLattice {
        DeltaLattice::from_ratio(1.0, alpha, ExactReal::golden()).unwrap()
    }

    #[test]
    fn golden_threshold_is_pi_squared_over_root_five() {
        let c = classify(&golden(1.0), 50).unwrap();
        let expected = std::f64::consts::PI.powi(2) / 5f64.sqrt();
        assert!((c.upper_threshold - expected).abs() < 1e-14);
        assert_eq!(c.verdict, Verdict::NoGaps);
    }

    #[test]
    fn above_threshold_is_infinite_on_both_signs() {
        assert_eq!(classify(&golden(6.0), 50).unwrap().verdict, Verdict::Infinite);
        assert_eq!(classify(&golden(-4.5), 50).unwrap().verdict, Verdict::Infinite);
    }

    #[test]
    fn attractive_window_is_finite_nonzero() {
        let c = classify(&golden(-4.35), 200).unwrap();
        assert_eq!(c.verdict, Verdict::FiniteNonzero);
        assert!(!c.witnesses.is_empty());
        let gamma = c.lower_threshold.unwrap();
        assert!(gamma.certified);
        assert_eq!(gamma.argmin.0, 1);
    }

    #[test]
    fn rational_ratio_is_infinite() {
        let lat = DeltaLattice::from_ratio(1.0, 0.1, ExactReal::ratio(2, 3).unwrap()).unwrap();
        let c = classify(&lat, 10).unwrap();
        assert_eq!(c.verdict, Verdict::Infinite);
        assert!(c.rational);
    }
}
