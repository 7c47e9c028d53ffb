//! Edge ratios with the Bethe-Sommerfeld property, built by prefixing the
//! continued fraction of a badly approximable `beta`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use serde::Serialize;

use super::certify::{Coef, Rhs, TanTerm};
use super::LatticeError;
use crate::diophantine::{cf_expand, markov_constant, ExactReal, DEFAULT_MAX_TERMS};

const MAX_BITS: usize = 1024;
const MAX_T: u32 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Scheme {
    /// `rho = [0; t, c1, c2, ...]`, repulsive side.
    T,
    /// `varsigma = [0; 1, t, c1, ...]`, attractive side.
    OneT,
    /// `tau = [0; t, t, c1, ...]`, both sides.
    TT,
}

impl std::str::FromStr for Scheme {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "t" => Ok(Scheme::T),
            "1t" | "onet" => Ok(Scheme::OneT),
            "tt" => Ok(Scheme::TT),
            _ => Err(LatticeError::Precondition(format!("unknown scheme {s:?}; expected t, 1t or tt"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Repulsive,
    Attractive,
}

/// One verified inequality `(2m/pi) tan((pi/2) f) < mu`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub sign: Sign,
    pub m: u64,
    /// Fractional part `f`: `{m theta}` (repulsive) or `ceil(m theta) - m theta`.
    pub fraction: String,
    pub value: f64,
    pub mu: f64,
    pub holds: bool,
}

impl InequalityCheck {
    /// Couplings `alpha * b` for which the lattice has finitely many gaps,
    /// at least one: `(pi^2 value, pi^2 mu)` up to sign.
    pub fn alpha_b_window(&self) -> Option<(f64, f64)> {
        let (lo, hi) = (PI * PI * self.value, PI * PI * self.mu);
        match (self.holds, self.sign) {
            (false, _) => None,
            (true, Sign::Repulsive) => Some((lo, hi)),
            (true, Sign::Attractive) => Some((-hi, -lo)),
        }
    }
}

/// Evaluates the inequality for `(m, sign)` with certification; `None` when
/// the fractional part vanishes.
fn check(theta: &ExactReal, mu: &ExactReal, m: u64, sign: Sign) -> Result<Option<InequalityCheck>, LatticeError> {
    let mt = theta.scale(&BigInt::from(m))?;
    let f = match sign {
        Sign::Repulsive => mt.fract_floor()?,
        Sign::Attractive => mt.fract_ceil()?,
    };
    if f.signum().is_eq() {
        return Ok(None);
    }
    let term = TanTerm { m, frac: &f, coef: Coef::TwoOverPi };
    let holds = term.less_than(&Rhs::Exact(mu), MAX_BITS).ok_or(LatticeError::UncertifiedComparison {
        m,
        side: super::Side::B,
        bits: MAX_BITS,
    })?;
    Ok(Some(InequalityCheck { sign, m, fraction: f.to_string(), value: term.value_f64().0, mu: mu.to_f64(), holds }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignChecks {
    pub theta: String,
    pub mu: String,
    pub mu_value: f64,
    pub horizon: u64,
    /// Smallest `m` satisfying the repulsive inequality.
    pub m_plus: Option<InequalityCheck>,
    /// Smallest `m` satisfying the attractive inequality.
    pub m_minus: Option<InequalityCheck>,
}

fn exact_mu(x: &ExactReal) -> Result<ExactReal, LatticeError> {
    let m = markov_constant(x)?;
    m.mu.symbolic.ok_or(LatticeError::Diophantine(crate::diophantine::DiophantineError::FloatNotSupported))
}

/// Smallest witnesses `m <= horizon` of the two sign conditions.
pub fn both_sign_checks(theta: &ExactReal, horizon: u64) -> Result<SignChecks, LatticeError> {
    if !theta.is_exact() || theta.is_rational() {
        return Err(LatticeError::Precondition("theta must be an exact irrational".into()));
    }
    let mu = exact_mu(theta)?;
    let first = |sign| -> Result<Option<InequalityCheck>, LatticeError> {
        for m in 1..=horizon {
            if let Some(c) = check(theta, &mu, m, sign)?.filter(|c| c.holds) {
                return Ok(Some(c));
            }
        }
        Ok(None)
    };
    Ok(SignChecks {
        theta: theta.to_string(),
        mu: mu.to_string(),
        mu_value: mu.to_f64(),
        horizon,
        m_plus: first(Sign::Repulsive)?,
        m_minus: first(Sign::Attractive)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BsConstruction {
    pub scheme: Scheme,
    pub t: u32,
    pub beta: String,
    #[serde(skip)]
    pub theta: ExactReal,
    pub theta_symbolic: String,
    pub theta_value: f64,
    pub continued_fraction: String,
    pub mu: String,
    pub mu_value: f64,
    /// `(2/pi) tan(pi/(2t))`.
    pub condition_t_value: f64,
    pub checks: Vec<InequalityCheck>,
    pub repulsive: bool,
    pub attractive: bool,
}

/// Whether `(2/pi) tan(pi/(2t)) < mu`.
fn condition_t(t: u32, mu: &ExactReal) -> Result<bool, LatticeError> {
    if t <= 1 {
        return Ok(false);
    }
    let f = ExactReal::ratio(1, t)?;
    TanTerm { m: 1, frac: &f, coef: Coef::TwoOverPi }.less_than(&Rhs::Exact(mu), MAX_BITS).ok_or(
        LatticeError::UncertifiedComparison { m: t as u64, side: super::Side::B, bits: MAX_BITS },
    )
}

/// `rho`, `varsigma` or `tau` for the given `beta` and `t`, with the
/// inequalities that give the Bethe-Sommerfeld property.
pub fn construct_bs_ratio(beta: &ExactReal, t: u32, scheme: Scheme) -> Result<BsConstruction, LatticeError> {
    if !beta.is_exact() || beta.is_rational() {
        return Err(LatticeError::Precondition("beta must be an exact irrational".into()));
    }
    let one = ExactReal::integer(1);
    if !beta.is_positive() || beta.exact_cmp(&one)?.is_ge() {
        return Err(LatticeError::Precondition("beta must lie in (0, 1)".into()));
    }
    let mu = exact_mu(beta)?;
    if !condition_t(t, &mu)? {
        let mut minimal_t = 2;
        while !condition_t(minimal_t, &mu)? {
            minimal_t += 1;
            if minimal_t > MAX_T {
                return Err(LatticeError::Precondition("no admissible t below 10^6".into()));
            }
        }
        return Err(LatticeError::ConditionTViolated { t, minimal_t });
    }
    let tt = ExactReal::integer(t);
    let rho = tt.checked_add(beta)?.checked_recip()?;
    let theta = match scheme {
        Scheme::T => rho,
        Scheme::OneT => one.checked_add(&rho)?.checked_recip()?,
        Scheme::TT => tt.checked_add(&rho)?.checked_recip()?,
    };
    let wanted: Vec<(u64, Sign)> = match scheme {
        Scheme::T => vec![(1, Sign::Repulsive)],
        Scheme::OneT => vec![(1, Sign::Attractive)],
        Scheme::TT => vec![(1, Sign::Repulsive), (t as u64, Sign::Attractive)],
    };
    let checks = wanted
        .into_iter()
        .map(|(m, s)| {
            check(&theta, &mu, m, s)?
                .ok_or_else(|| LatticeError::Precondition(format!("fractional part vanishes at m = {m}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let holds = |s: Sign| checks.iter().any(|c| c.sign == s && c.holds);
    Ok(BsConstruction {
        scheme,
        t,
        beta: beta.to_string(),
        theta_symbolic: theta.to_string(),
        theta_value: theta.to_f64(),
        continued_fraction: cf_expand(&theta, DEFAULT_MAX_TERMS)?.to_string(),
        mu: mu.to_string(),
        mu_value: mu.to_f64(),
        condition_t_value: 2.0 / PI * (PI / (2.0 * t as f64)).tan(),
        repulsive: holds(Sign::Repulsive),
        attractive: holds(Sign::Attractive),
        checks,
        theta,
    })
}
