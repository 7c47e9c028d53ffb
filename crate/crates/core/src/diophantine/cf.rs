//! Continued fractions: exact expansion of rationals and quadratic
//! irrationals, certified prefixes of float inputs, convergents.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::exact::{square_free_decompose, ExactReal};
use super::DiophantineError;

/// Whether a continued fraction is the full expansion of an exact value or
/// only the prefix certified for a float input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CfKind {
    Exact,
    Prefix,
}

/// `[a0; a1, ..., a_{h-1}, (p1, ..., pL)]`. The head always holds `a0`; an
/// empty period means the value is rational (for exact expansions).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    head: Vec<BigInt>,
    period: Vec<BigInt>,
    kind: CfKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub index: usize,
    pub p: BigInt,
    pub q: BigInt,
}

impl Convergent {
    pub fn value(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }
}

impl ContinuedFraction {
    /// Validates partial quotients: every term after `a0` must be positive.
    pub fn new(head: Vec<BigInt>, period: Vec<BigInt>, kind: CfKind) -> Result<Self, DiophantineError> {
        if head.is_empty() {
            return Err(DiophantineError::Parse("continued fraction needs a0".into()));
        }
        if head[1..].iter().chain(&period).any(|a| !a.is_positive()) {
            return Err(DiophantineError::Parse("partial quotients after a0 must be positive".into()));
        }
        Ok(ContinuedFraction { head, period, kind })
    }

    pub fn head(&self) -> &[BigInt] {
        &self.head
    }

    pub fn period(&self) -> &[BigInt] {
        &self.period
    }

    pub fn kind(&self) -> CfKind {
        self.kind
    }

    pub fn is_terminating(&self) -> bool {
        self.period.is_empty()
    }

    /// All partial quotients; infinite when periodic.
    pub fn terms(&self) -> impl Iterator<Item = &BigInt> + '_ {
        let tail: Box<dyn Iterator<Item = &BigInt>> = if self.period.is_empty() {
            Box::new(std::iter::empty())
        } else {
            Box::new(self.period.iter().cycle())
        };
        self.head.iter().chain(tail)
    }

    /// Partial quotient `a_n`, or `None` past the end of a terminating expansion.
    pub fn term(&self, n: usize) -> Option<&BigInt> {
        let h = self.head.len();
        if n < h {
            Some(&self.head[n])
        } else if self.period.is_empty() {
            None
        } else {
            Some(&self.period[(n - h) % self.period.len()])
        }
    }

    /// Exact value. For a prefix this is the value of the finite expansion.
    pub fn value(&self) -> Result<ExactReal, DiophantineError> {
        self.value_in_field(None)
    }

    /// As [`value`](Self::value), with the quadratic field supplied so the
    /// radicand need not be factored.
    pub fn value_in_field(&self, d: Option<&BigInt>) -> Result<ExactReal, DiophantineError> {
        let mut x = if self.period.is_empty() {
            None
        } else {
            Some(purely_periodic(&self.period, d)?)
        };
        for a in self.head.iter().rev() {
            let a = ExactReal::integer(a.clone());
            x = Some(match x {
                None => a,
                Some(t) => a.checked_add(&t.checked_recip()?)?,
            });
        }
        Ok(x.expect("head is non-empty"))
    }
}

/// Value of the purely periodic `[b0; b1, ..., b_{L-1}, b0, ...]` with all
/// `b_i >= 1`, the larger root of `Q x^2 + (Q' - P) x - P' = 0`.
pub fn purely_periodic(block: &[BigInt], d: Option<&BigInt>) -> Result<ExactReal, DiophantineError> {
    let (mut p0, mut p1) = (BigInt::zero(), BigInt::one());
    let (mut q0, mut q1) = (BigInt::one(), BigInt::zero());
    for b in block {
        let p2 = b * &p1 + &p0;
        let q2 = b * &q1 + &q0;
        (p0, p1, q0, q1) = (p1, p2, q1, q2);
    }
    // p1/q1 is the last block convergent, p0/q0 the one before.
    let disc: BigInt = (&q0 - &p1).pow(2) + 4 * &q1 * &p0;
    let (s, core) = match d {
        Some(d) => {
            let s2: BigInt = &disc / d;
            let s: BigInt = Roots::sqrt(&s2);
            if &s * &s * d != disc {
                return Err(DiophantineError::FieldMismatch(d.clone(), disc));
            }
            (s, d.clone())
        }
        None => square_free_decompose(&disc)?,
    };
    Ok(ExactReal::in_field(&p1 - &q0, s, 2 * q1, &core))
}

/// Expands an exact value, stopping with [`DiophantineError::PeriodNotFound`]
/// once more than `max_terms` quotients are needed. Float inputs yield the
/// prefix shared by every real within their declared precision.
pub fn cf_expand(x: &ExactReal, max_terms: usize) -> Result<ContinuedFraction, DiophantineError> {
    match x {
        ExactReal::Rational(r) => Ok(ContinuedFraction {
            head: euclid(r, usize::MAX),
            period: Vec::new(),
            kind: CfKind::Exact,
        }),
        ExactReal::Quadratic(s) => expand_surd(s.a(), s.b(), s.c(), s.d(), max_terms),
        ExactReal::Float(f) => {
            let v = BigRational::from_float(f.value).expect("finite by construction");
            let half_width = v.abs() * BigRational::new(BigInt::one(), 2 * BigInt::from(10).pow(f.digits - 1));
            let lo = euclid(&(&v - &half_width), max_terms);
            let hi = euclid(&(&v + &half_width), max_terms);
            let mut head: Vec<BigInt> =
                lo.iter().zip(&hi).take_while(|(a, b)| a == b).map(|(a, _)| a.clone()).collect();
            if head.is_empty() {
                head.push(v.floor().to_integer());
            }
            Ok(ContinuedFraction { head, period: Vec::new(), kind: CfKind::Prefix })
        }
    }
}

fn euclid(r: &BigRational, max_terms: usize) -> Vec<BigInt> {
    let (mut p, mut q) = (r.numer().clone(), r.denom().clone());
    let mut out = Vec::new();
    while !q.is_zero() && out.len() < max_terms {
        let (a, rem) = p.div_mod_floor(&q);
        out.push(a);
        p = q;
        q = rem;
    }
    out
}

/// Complete quotients `(P + sqrt(D))/Q` with `Q | D - P^2`; a repeated state
/// marks the start of the period.
fn expand_surd(
    a: &BigInt,
    b: &BigInt,
    c: &BigInt,
    d: &BigInt,
    max_terms: usize,
) -> Result<ContinuedFraction, DiophantineError> {
    let sigma = if b.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut p = &sigma * a;
    let mut q = &sigma * c;
    let mut disc = b * b * d;
    if !((&disc - &p * &p) % &q).is_zero() {
        let qa = q.abs();
        p *= &qa;
        disc *= &q * &q;
        q *= &qa;
    }
    let s: BigInt = Roots::sqrt(&disc);
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut terms: Vec<BigInt> = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
            let mut head = terms[..start].to_vec();
            let mut period = terms[start..].to_vec();
            if head.is_empty() {
                head.push(period[0].clone());
                period.rotate_left(1);
            }
            return Ok(ContinuedFraction { head, period, kind: CfKind::Exact });
        }
        if terms.len() >= max_terms {
            return Err(DiophantineError::PeriodNotFound { max_terms });
        }
        seen.insert((p.clone(), q.clone()), terms.len());
        let t: BigInt = if q.is_positive() {
            (&p + &s).div_floor(&q)
        } else {
            (-&p - &s - BigInt::one()).div_floor(&-&q)
        };
        p = &t * &q - &p;
        q = (&disc - &p * &p) / &q;
        terms.push(t);
    }
}

/// The first `count` convergents (fewer when a terminating expansion runs out).
pub fn convergents(cf: &ContinuedFraction, count: usize) -> Vec<Convergent> {
    ConvergentIter::new(cf).take(count).collect()
}

/// Lazily generated convergents `p_n/q_n`.
pub struct ConvergentIter<'a> {
    terms: Box<dyn Iterator<Item = &'a BigInt> + 'a>,
    index: usize,
    p: (BigInt, BigInt),
    q: (BigInt, BigInt),
}

impl<'a> ConvergentIter<'a> {
    pub fn new(cf: &'a ContinuedFraction) -> Self {
        ConvergentIter {
            terms: Box::new(cf.terms()),
            index: 0,
            p: (BigInt::zero(), BigInt::one()),
            q: (BigInt::one(), BigInt::zero()),
        }
    }
}

impl Iterator for ConvergentIter<'_> {
    type Item = Convergent;

    fn next(&mut self) -> Option<Convergent> {
        let a = self.terms.next()?;
        let p = a * &self.p.1 + &self.p.0;
        let q = a * &self.q.1 + &self.q.0;
        self.p = (std::mem::replace(&mut self.p.1, p.clone()), p.clone());
        self.q = (std::mem::replace(&mut self.q.1, q.clone()), q.clone());
        let c = Convergent { index: self.index, p, q };
        self.index += 1;
        Some(c)
    }
}
