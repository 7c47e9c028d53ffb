//! One-sided Markov constants and best approximations of the third kind.
//!
//! Everything here rests on the products `v(m) = m (m x - floor(m x))`. For a
//! quadratic irrational `x` the convergents split into finitely many residue
//! classes `n mod lcm(L, 2)` (`L` the period length). Along each class
//!
//! ```text
//! q_n (q_n x - p_n) = 1 / (t_{n+1} + q_{n-1}/q_n)
//! ```
//!
//! where the complete quotient `t_{n+1}` is constant and `q_{n-1}/q_n` tends
//! monotonically to a purely periodic limit, so limits, infima and tail bounds
//! are all exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::cf::{cf_expand, purely_periodic, ContinuedFraction, Convergent, ConvergentIter};
use super::exact::ExactReal;
use super::DiophantineError;

/// Period budget used when an expansion is needed internally.
pub const DEFAULT_MAX_TERMS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ApproxSide {
    Below,
    Above,
}

/// A one-sided best approximation `p/q`; `convergent_index` is `None` only for
/// the integer `ceil(x)` when it is not itself a convergent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestApproximation {
    pub p: BigInt,
    pub q: BigInt,
    pub convergent_index: Option<usize>,
}

/// A Markov-type value, exact when the input was.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovValue {
    pub symbolic: Option<ExactReal>,
    pub value: f64,
    pub uncertainty: f64,
}

impl MarkovValue {
    fn exact(x: ExactReal) -> Self {
        MarkovValue { value: x.to_f64(), symbolic: Some(x), uncertainty: 0.0 }
    }

    pub fn is_exact(&self) -> bool {
        self.symbolic.is_some()
    }
}

/// `upsilon(x)`, `upsilon(1/x)` and `mu(x) = min` of the two.
#[derive(Clone, Debug, PartialEq)]
pub struct OneSidedMarkov {
    pub upsilon_theta: MarkovValue,
    pub upsilon_theta_inv: MarkovValue,
    pub mu: MarkovValue,
    pub exact: bool,
    pub rational: bool,
}

/// `q (q x - p)` with `p = floor(q x)` being the convergent numerator.
fn below_product(x: &ExactReal, c: &Convergent) -> ExactReal {
    let q = ExactReal::integer(c.q.clone());
    let err = &(&q * x) - &ExactReal::integer(c.p.clone());
    &q * &err
}

fn min_exact(values: impl IntoIterator<Item = ExactReal>) -> Option<ExactReal> {
    values.into_iter().reduce(|a, b| {
        if b.exact_cmp(&a).expect("same field") == std::cmp::Ordering::Less {
            b
        } else {
            a
        }
    })
}

/// Limit of one residue class of convergents.
#[derive(Clone, Debug)]
struct ClassLimit {
    limit: ExactReal,
    /// Whether the class values decrease to the limit (so it is not attained).
    from_above: bool,
}

/// Exact description of `m -> m (m x - floor(m x))` for an irrational
/// quadratic `x`.
#[derive(Clone, Debug)]
pub struct FloorProductProfile {
    x: ExactReal,
    cf: ContinuedFraction,
    classes: Vec<ClassLimit>,
}

impl FloorProductProfile {
    pub fn new(x: &ExactReal) -> Result<Self, DiophantineError> {
        if !x.is_exact() {
            return Err(DiophantineError::FloatNotSupported);
        }
        if x.is_rational() {
            return Err(DiophantineError::Rational);
        }
        let cf = cf_expand(x, DEFAULT_MAX_TERMS)?;
        let classes = class_limits(&cf, x.field())?;
        Ok(FloorProductProfile { x: x.clone(), cf, classes })
    }

    pub fn continued_fraction(&self) -> &ContinuedFraction {
        &self.cf
    }

    /// `liminf_m v(m)`, the smallest class limit.
    pub fn liminf(&self) -> ExactReal {
        min_exact(self.classes.iter().map(|c| c.limit.clone())).expect("at least one class")
    }

    fn period_block(&self) -> usize {
        self.cf.period().len().lcm(&2)
    }

    /// `inf_{m >= 1} v(m)`, exact; the infimum is not attained when it equals
    /// a class limit approached from above.
    pub fn infimum(&self) -> ExactReal {
        self.tail_convergent_bound(&BigInt::zero())
    }

    /// Smallest `v(q_n)` over even `n` with `q_n > h`, exact.
    fn tail_convergent_bound(&self, h: &BigInt) -> ExactReal {
        let head = self.cf.head().len();
        let block = self.period_block();
        let mut candidates: Vec<ExactReal> =
            self.classes.iter().filter(|c| c.from_above).map(|c| c.limit.clone()).collect();
        let mut first_beyond: Option<usize> = None;
        for c in ConvergentIter::new(&self.cf) {
            if first_beyond.is_none() && &c.q > h {
                first_beyond = Some(c.index);
            }
            if let Some(start) = first_beyond {
                if c.index >= start.max(head) + block {
                    break;
                }
                if c.index % 2 == 0 {
                    candidates.push(below_product(&self.x, &c));
                }
            }
        }
        min_exact(candidates).expect("classes or convergents supply a candidate")
    }

    /// Rigorous lower bound for `inf_{m > h} v(m)`. Convergents contribute
    /// exactly; other `m` are bounded through the intermediate fractions
    /// lying between two convergents.
    pub fn tail_lower_bound(&self, h: u64) -> ExactReal {
        let hb = BigInt::from(h);
        let h1sq = ExactReal::integer((&hb + 1u32).pow(2));
        let conv = self.tail_convergent_bound(&hb);
        let mut candidates = vec![conv, &ExactReal::integer(4) * &self.infimum()];
        // p/m below floor(x): v(m) >= m^2 (x - floor x).
        candidates.push(&h1sq * &self.x.fract_floor().expect("exact"));
        let max_period = self.cf.period().iter().max().expect("irrational").clone();
        let floor_bound = ExactReal::Rational(BigRational::new(BigInt::one(), max_period));
        candidates.push(floor_bound.clone());
        let head = self.cf.head().len();
        // Walk odd n; fractions between p_{n-1}/q_{n-1} and p_{n+1}/q_{n+1}
        // satisfy v > max(1/a_{n+1}, m^2 (x - p_{n+1}/q_{n+1})).
        let mut iter = ConvergentIter::new(&self.cf);
        let mut convs: Vec<Convergent> = Vec::new();
        let mut n = 1;
        loop {
            while convs.len() <= n + 1 {
                convs.push(iter.next().expect("irrational expansions are infinite"));
            }
            let a_next = self.cf.term(n + 1).expect("infinite").clone();
            let next = &convs[n + 1];
            let gap = &self.x - &ExactReal::Rational(next.value());
            let far = &h1sq * &gap;
            let inv_a = ExactReal::Rational(BigRational::new(BigInt::one(), a_next));
            let bigger = if far.exact_cmp(&inv_a).expect("same field").is_gt() { far.clone() } else { inv_a };
            candidates.push(bigger);
            if n >= head && far.exact_cmp(&floor_bound).expect("same field").is_le() {
                break;
            }
            n += 2;
        }
        min_exact(candidates).expect("non-empty")
    }
}

/// Per-class limits of `q_n (q_n x - p_n)` over even `n`.
fn class_limits(cf: &ContinuedFraction, d: Option<&BigInt>) -> Result<Vec<ClassLimit>, DiophantineError> {
    let h = cf.head().len();
    let period = cf.period();
    let l = period.len();
    let block = l.lcm(&2);
    let backward = |start: usize| -> Vec<BigInt> { (0..l).map(|j| period[(start + l - j % l) % l].clone()).collect() };
    // Tail of q_{n-1}/q_n past the shared periodic part.
    let y_tail = purely_periodic(&backward(l - 1), d)?;
    let x_tail = if h >= 2 {
        let rev: Vec<BigInt> = cf.head()[1..].iter().rev().cloned().collect();
        Some(ContinuedFraction::new(rev, Vec::new(), super::cf::CfKind::Exact)?.value()?)
    } else {
        None
    };
    let x_above_y = match &x_tail {
        None => true,
        Some(x) => x.exact_cmp(&y_tail)?.is_gt(),
    };
    let mut out = Vec::new();
    for n in (h..h + block).filter(|n| n % 2 == 0) {
        let mut forward: Vec<BigInt> = period.to_vec();
        forward.rotate_left((n + 1 - h) % l);
        let t = purely_periodic(&forward, d)?;
        let z = purely_periodic(&backward((n - h) % l), d)?;
        let limit = t.checked_add(&z.checked_recip()?)?.checked_recip()?;
        // v_n >= limit iff q_{n-1}/q_n <= its limit; [0; b_1..b_k, W] grows
        // with W exactly when k is odd.
        let k = n - h + 1;
        let from_above = (k % 2 == 1) != x_above_y;
        out.push(ClassLimit { limit, from_above });
    }
    Ok(out)
}

fn require_positive(x: &ExactReal) -> Result<(), DiophantineError> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(DiophantineError::NonPositive)
    }
}

/// `upsilon(x) = liminf_m m (m x - floor(m x))` for `x > 0`. Rationals give 0;
/// float inputs give an estimate from the certified prefix.
pub fn upsilon(x: &ExactReal) -> Result<MarkovValue, DiophantineError> {
    match x {
        ExactReal::Float(_) => estimate_from_prefix(x, 0),
        _ => {
            require_positive(x)?;
            liminf_exact(x)
        }
    }
}

fn liminf_exact(x: &ExactReal) -> Result<MarkovValue, DiophantineError> {
    if x.is_rational() {
        return Ok(MarkovValue::exact(ExactReal::integer(0)));
    }
    Ok(MarkovValue::exact(FloorProductProfile::new(x)?.liminf()))
}

/// Estimate from the later half of the prefix convergents with the given parity.
fn estimate_from_prefix(x: &ExactReal, parity: usize) -> Result<MarkovValue, DiophantineError> {
    let ExactReal::Float(f) = x else { unreachable!() };
    if f.value <= 0.0 {
        return Err(DiophantineError::NonPositive);
    }
    let cf = cf_expand(x, 64)?;
    let convs: Vec<Convergent> = ConvergentIter::new(&cf).collect();
    let picked: Vec<f64> = convs
        .iter()
        .filter(|c| c.index % 2 == parity && c.index >= convs.len() / 2)
        .map(|c| {
            let q = c.q.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
            let p = c.p.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
            q * (q * f.value - p).abs()
        })
        .collect();
    if picked.is_empty() {
        return Ok(MarkovValue { symbolic: None, value: f64::NAN, uncertainty: f64::INFINITY });
    }
    let lo = picked.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = picked.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(MarkovValue { symbolic: None, value: lo, uncertainty: (hi - lo).max(f.relative_uncertainty()) })
}

/// `upsilon(x)`, `upsilon(1/x)` and their minimum `mu(x)`.
pub fn markov_constant(x: &ExactReal) -> Result<OneSidedMarkov, DiophantineError> {
    if let ExactReal::Float(_) = x {
        let up = estimate_from_prefix(x, 0)?;
        let down = estimate_from_prefix(x, 1)?;
        let mu = if up.value <= down.value { up.clone() } else { down.clone() };
        return Ok(OneSidedMarkov { upsilon_theta: up, upsilon_theta_inv: down, mu, exact: false, rational: false });
    }
    require_positive(x)?;
    let up = liminf_exact(x)?;
    // upsilon(1/x) = liminf m (ceil(m x) - m x), the floor product of -x.
    let down = liminf_exact(&x.checked_neg()?)?;
    let mu = if up.symbolic.as_ref().unwrap().exact_cmp(down.symbolic.as_ref().unwrap())?.is_le() {
        up.clone()
    } else {
        down.clone()
    };
    Ok(OneSidedMarkov { upsilon_theta: up, upsilon_theta_inv: down, mu, exact: true, rational: x.is_rational() })
}

/// Best approximations of the third kind from one side with `q <= q_max`.
///
/// Candidates are the convergents on the requested side (plus `ceil(x)` from
/// above); a candidate is kept when its product strictly beats all earlier ones.
pub fn best_approx_third_kind(
    x: &ExactReal,
    side: ApproxSide,
    q_max: &BigInt,
) -> Result<Vec<BestApproximation>, DiophantineError> {
    if !x.is_exact() {
        return Err(DiophantineError::FloatNotSupported);
    }
    let cf = cf_expand(x, DEFAULT_MAX_TERMS)?;
    let parity = match side {
        ApproxSide::Below => 0,
        ApproxSide::Above => 1,
    };
    let product = |p: &BigInt, q: &BigInt| -> ExactReal {
        let qe = ExactReal::integer(q.clone());
        let e = &(&qe * x) - &ExactReal::integer(p.clone());
        let v = &qe * &e;
        if parity == 0 { v } else { -&v }
    };
    let mut candidates: Vec<BestApproximation> = Vec::new();
    if side == ApproxSide::Above {
        candidates.push(BestApproximation { p: x.ceil()?, q: BigInt::one(), convergent_index: None });
    }
    // A rational's last convergent equals x, which lies on both sides.
    let last = cf.is_terminating().then(|| cf.head().len() - 1);
    for c in ConvergentIter::new(&cf) {
        if &c.q > q_max {
            break;
        }
        if c.index % 2 != parity && Some(c.index) != last {
            continue;
        }
        match candidates.iter_mut().find(|b| b.p == c.p && b.q == c.q) {
            Some(b) => b.convergent_index = Some(c.index),
            None => candidates.push(BestApproximation { p: c.p.clone(), q: c.q.clone(), convergent_index: Some(c.index) }),
        }
    }
    candidates.sort_by(|a, b| a.q.cmp(&b.q));
    let mut best: Option<ExactReal> = None;
    let mut out = Vec::new();
    for cand in candidates {
        let v = product(&cand.p, &cand.q);
        if v.signum().is_lt() {
            continue;
        }
        let improves = match &best {
            None => true,
            Some(b) => v.exact_cmp(b)?.is_lt(),
        };
        if improves {
            best = Some(v);
            out.push(cand);
        }
    }
    Ok(out)
}

/// Markov equivalence: the expansions share a tail. Any two rationals are
/// equivalent; a rational is never equivalent to an irrational.
pub fn equivalent(x: &ExactReal, y: &ExactReal) -> Result<bool, DiophantineError> {
    if !x.is_exact() || !y.is_exact() {
        return Err(DiophantineError::FloatNotSupported);
    }
    let cx = cf_expand(x, DEFAULT_MAX_TERMS)?;
    let cy = cf_expand(y, DEFAULT_MAX_TERMS)?;
    let (px, py) = (cx.period(), cy.period());
    if px.is_empty() || py.is_empty() {
        return Ok(px.is_empty() && py.is_empty());
    }
    if px.len() != py.len() {
        return Ok(false);
    }
    Ok((0..px.len()).any(|r| px.iter().cycle().skip(r).take(px.len()).eq(py.iter())))
}

/// Irrational `x` whose upsilon values are needed by callers that already
/// know `x > 0`; returns `(upsilon(x), upsilon(1/x))` exactly.
pub fn upsilon_pair(x: &ExactReal) -> Result<(ExactReal, ExactReal), DiophantineError> {
    let m = markov_constant(x)?;
    Ok((m.upsilon_theta.symbolic.expect("exact"), m.upsilon_theta_inv.symbolic.expect("exact")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> ExactReal {
        s.parse().unwrap()
    }

    #[test]
    fn golden_upsilon_is_one_over_root_five() {
        let m = markov_constant(&ExactReal::golden()).unwrap();
        let inv_root5 = parse("(0+1*sqrt(5))/5");
        assert_eq!(m.upsilon_theta.symbolic.as_ref().unwrap(), &inv_root5);
        assert_eq!(m.upsilon_theta_inv.symbolic.as_ref().unwrap(), &inv_root5);
        assert!(m.exact);
    }

    #[test]
    fn rational_gives_zero() {
        let m = markov_constant(&parse("7/3")).unwrap();
        assert!(m.rational && m.exact);
        assert_eq!(m.mu.value, 0.0);
    }

    #[test]
    fn nonpositive_is_rejected() {
        assert_eq!(upsilon(&parse("-1/2")), Err(DiophantineError::NonPositive));
    }

    #[test]
    fn golden_infimum_is_the_limit_approached_from_above() {
        let p = FloorProductProfile::new(&ExactReal::golden()).unwrap();
        assert_eq!(p.infimum(), parse("(0+1*sqrt(5))/5"));
        // From the other side the products increase towards 1/sqrt5, so the
        // infimum is attained at m = 1: ceil(phi) - phi = 2 - phi.
        let q = FloorProductProfile::new(&-&ExactReal::golden()).unwrap();
        assert_eq!(q.infimum(), parse("(3-1*sqrt(5))/2"));
        assert_eq!(q.liminf(), parse("(0+1*sqrt(5))/5"));
    }

    #[test]
    fn golden_best_approximations() {
        let x = parse("(1+1*sqrt(5))/2");
        let best = best_approx_third_kind(&x, ApproxSide::Below, &BigInt::from(100)).unwrap();
        let qs: Vec<String> = best.iter().map(|b| b.q.to_string()).collect();
        assert_eq!(qs, ["1", "2", "5", "13", "34", "89"]);
        let above = best_approx_third_kind(&x, ApproxSide::Above, &BigInt::from(100)).unwrap();
        assert_eq!(above.len(), 1);
        assert_eq!((above[0].p.to_string(), above[0].q.to_string()), ("2".into(), "1".into()));
    }

    #[test]
    fn equivalence_by_period_rotation() {
        assert!(equivalent(&parse("(1+1*sqrt(5))/2"), &parse("(35+1*sqrt(5))/122")).unwrap());
        assert!(!equivalent(&parse("(0+1*sqrt(2))/1"), &parse("(0+1*sqrt(3))/1")).unwrap());
        assert!(equivalent(&parse("(0+1*sqrt(3))/1"), &parse("(1+1*sqrt(3))/2")).unwrap());
        assert!(equivalent(&parse("7/3"), &parse("1/5")).unwrap());
        assert!(!equivalent(&parse("7/3"), &parse("(0+1*sqrt(3))/1")).unwrap());
    }
}
