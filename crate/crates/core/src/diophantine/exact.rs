//! Exact reals: rationals, real quadratic irrationals `(a + b*sqrt(d))/c`, and
//! tagged float approximations that only estimate-mode operations accept.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::DiophantineError;

/// Largest trial divisor used when reducing a radicand to square-free form.
const TRIAL_DIVISION_LIMIT: u64 = 2_000_000;

/// `(a + b*sqrt(d))/c` in canonical form: `c > 0`, `d > 1` square-free,
/// `b != 0` and `gcd(a, b, c) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl QuadraticSurd {
    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// Algebraic conjugate `(a - b*sqrt(d))/c`.
    pub fn conjugate(&self) -> QuadraticSurd {
        QuadraticSurd { b: -&self.b, ..self.clone() }
    }

    /// Exact sign of `a + b*sqrt(d)`; never zero since `b != 0`.
    fn numerator_sign(&self) -> Ordering {
        sign_of_sum(&self.a, &self.b, &self.d)
    }
}

/// Float input with the number of significant decimal digits it is trusted to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloatApprox {
    pub value: f64,
    pub digits: u32,
}

impl FloatApprox {
    /// Half a unit in the last declared decimal place, relative to `|value|`.
    pub fn relative_uncertainty(&self) -> f64 {
        0.5 * 10f64.powi(1 - self.digits as i32)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExactReal {
    Rational(BigRational),
    Quadratic(QuadraticSurd),
    Float(FloatApprox),
}

/// Sign of `a + b*sqrt(d)` for `d > 0` not a perfect square.
fn sign_of_sum(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let sa = a.sign_cmp();
    let sb = b.sign_cmp();
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // Opposite signs: the larger magnitude wins.
    match (a * a).cmp(&(b * b * d)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

/// Writes `n = s^2 * core` with `core` square-free; returns `(s, core)`.
pub(crate) fn square_free_decompose(n: &BigInt) -> Result<(BigInt, BigInt), DiophantineError> {
    if !n.is_positive() {
        return Err(DiophantineError::NegativeRadicand(n.clone()));
    }
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut core = BigInt::one();
    let mut p: u64 = 2;
    loop {
        let pb = BigInt::from(p);
        if &pb * &pb * &pb > rest {
            break;
        }
        if p > TRIAL_DIVISION_LIMIT {
            return Err(DiophantineError::RadicandTooLarge(n.clone()));
        }
        let p2 = &pb * &pb;
        while (&rest % &p2).is_zero() {
            rest /= &p2;
            square *= &pb;
        }
        if (&rest % &pb).is_zero() {
            rest /= &pb;
            core *= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // What remains has at most two prime factors, all above the cube root.
    let r: BigInt = Roots::sqrt(&rest);
    if &r * &r == rest {
        square *= r;
    } else {
        core *= rest;
    }
    Ok((square, core))
}

fn rational(n: BigInt, d: BigInt) -> Result<ExactReal, DiophantineError> {
    if d.is_zero() {
        return Err(DiophantineError::DivisionByZero);
    }
    Ok(ExactReal::Rational(BigRational::new(n, d)))
}

impl ExactReal {
    pub fn integer(n: impl Into<BigInt>) -> Self {
        ExactReal::Rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, DiophantineError> {
        rational(p.into(), q.into())
    }

    /// `(a + b*sqrt(d))/c` with arbitrary integer parts; reduces to canonical form.
    pub fn quadratic(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self, DiophantineError> {
        let (a, mut b, c, d) = (a.into(), b.into(), c.into(), d.into());
        if c.is_zero() {
            return Err(DiophantineError::DivisionByZero);
        }
        if b.is_zero() || d.is_zero() {
            return rational(a, c);
        }
        let (s, core) = square_free_decompose(&d)?;
        b *= s;
        Ok(Self::in_field(a, b, c, &core))
    }

    /// Builds `(a + b*sqrt(d))/c` where `d` is already known to be square-free.
    pub(crate) fn in_field(mut a: BigInt, mut b: BigInt, mut c: BigInt, d: &BigInt) -> Self {
        debug_assert!(!c.is_zero());
        if d.is_one() {
            return ExactReal::Rational(BigRational::new(a + b, c));
        }
        if b.is_zero() {
            return ExactReal::Rational(BigRational::new(a, c));
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        ExactReal::Quadratic(QuadraticSurd { a, b, c, d: d.clone() })
    }

    /// `sqrt(n)` for a non-negative integer `n`.
    pub fn sqrt_of(n: impl Into<BigInt>) -> Result<Self, DiophantineError> {
        let n = n.into();
        if n.is_zero() {
            return Ok(Self::integer(0));
        }
        Self::quadratic(0, 1, 1, n)
    }

    pub fn float(value: f64, digits: u32) -> Result<Self, DiophantineError> {
        if !value.is_finite() {
            return Err(DiophantineError::Parse(format!("non-finite float {value}")));
        }
        Ok(ExactReal::Float(FloatApprox { value, digits: digits.clamp(1, 17) }))
    }

    /// The golden mean `(1 + sqrt(5))/2`.
    pub fn golden() -> Self {
        Self::in_field(BigInt::one(), BigInt::one(), BigInt::from(2), &BigInt::from(5))
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ExactReal::Float(_))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, ExactReal::Rational(_))
    }

    /// Radicand of the quadratic field, if any.
    pub fn field(&self) -> Option<&BigInt> {
        match self {
            ExactReal::Quadratic(q) => Some(&q.d),
            _ => None,
        }
    }

    fn require_exact(&self) -> Result<(), DiophantineError> {
        if self.is_exact() {
            Ok(())
        } else {
            Err(DiophantineError::FloatNotSupported)
        }
    }

    /// Parts `(a, b, c)` of `(a + b*sqrt(d))/c`; `b = 0` for rationals.
    fn parts(&self) -> (BigInt, BigInt, BigInt) {
        match self {
            ExactReal::Rational(r) => (r.numer().clone(), BigInt::zero(), r.denom().clone()),
            ExactReal::Quadratic(q) => (q.a.clone(), q.b.clone(), q.c.clone()),
            ExactReal::Float(_) => unreachable!("float operands are rejected earlier"),
        }
    }

    fn common_field(&self, other: &Self) -> Result<Option<BigInt>, DiophantineError> {
        self.require_exact()?;
        other.require_exact()?;
        match (self.field(), other.field()) {
            (Some(x), Some(y)) if x != y => Err(DiophantineError::FieldMismatch(x.clone(), y.clone())),
            (Some(x), _) | (_, Some(x)) => Ok(Some(x.clone())),
            (None, None) => Ok(None),
        }
    }

    fn assemble(a: BigInt, b: BigInt, c: BigInt, d: Option<BigInt>) -> Self {
        match d {
            Some(d) => Self::in_field(a, b, c, &d),
            None => ExactReal::Rational(BigRational::new(a, c)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, DiophantineError> {
        let d = self.common_field(other)?;
        let (a1, b1, c1) = self.parts();
        let (a2, b2, c2) = other.parts();
        Ok(Self::assemble(&a1 * &c2 + &a2 * &c1, &b1 * &c2 + &b2 * &c1, c1 * c2, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, DiophantineError> {
        self.checked_add(&other.checked_neg()?)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, DiophantineError> {
        let d = self.common_field(other)?;
        let (a1, b1, c1) = self.parts();
        let (a2, b2, c2) = other.parts();
        let dd = d.clone().unwrap_or_else(BigInt::zero);
        let a = &a1 * &a2 + &b1 * &b2 * dd;
        let b = &a1 * &b2 + &a2 * &b1;
        Ok(Self::assemble(a, b, c1 * c2, d))
    }

    pub fn checked_recip(&self) -> Result<Self, DiophantineError> {
        self.require_exact()?;
        match self {
            ExactReal::Rational(r) => {
                if r.is_zero() {
                    Err(DiophantineError::DivisionByZero)
                } else {
                    Ok(ExactReal::Rational(r.recip()))
                }
            }
            ExactReal::Quadratic(q) => {
                // c/(a + b*sqrt(d)) = c*(a - b*sqrt(d))/(a^2 - b^2 d)
                let norm = &q.a * &q.a - &q.b * &q.b * &q.d;
                Ok(Self::in_field(&q.c * &q.a, -(&q.c * &q.b), norm, &q.d))
            }
            ExactReal::Float(_) => unreachable!(),
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, DiophantineError> {
        self.checked_mul(&other.checked_recip()?)
    }

    pub fn checked_neg(&self) -> Result<Self, DiophantineError> {
        Ok(match self {
            ExactReal::Rational(r) => ExactReal::Rational(-r),
            ExactReal::Quadratic(q) => ExactReal::Quadratic(QuadraticSurd {
                a: -&q.a,
                b: -&q.b,
                ..q.clone()
            }),
            ExactReal::Float(f) => ExactReal::Float(FloatApprox { value: -f.value, ..*f }),
        })
    }

    /// Exact sign; floats report the sign of their value.
    pub fn signum(&self) -> Ordering {
        match self {
            ExactReal::Rational(r) => r.numer().sign_cmp(),
            ExactReal::Quadratic(q) => q.numerator_sign(),
            ExactReal::Float(f) => f.value.partial_cmp(&0.0).unwrap_or(Ordering::Equal),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    /// Exact comparison of two exact values.
    pub fn exact_cmp(&self, other: &Self) -> Result<Ordering, DiophantineError> {
        Ok(self.checked_sub(other)?.signum())
    }

    /// Exact comparison with the real number a double represents.
    pub fn cmp_f64(&self, x: f64) -> Result<Ordering, DiophantineError> {
        self.require_exact()?;
        let r = BigRational::from_float(x)
            .ok_or_else(|| DiophantineError::Parse(format!("non-finite float {x}")))?;
        match self {
            ExactReal::Rational(s) => Ok(s.cmp(&r)),
            ExactReal::Quadratic(q) => {
                // (a + b sqrt d)/c - n/m has numerator (a m - n c) + b m sqrt d.
                let (n, m) = (r.numer(), r.denom());
                Ok(sign_of_sum(&(&q.a * m - n * &q.c), &(&q.b * m), &q.d))
            }
            ExactReal::Float(_) => unreachable!(),
        }
    }

    pub fn floor(&self) -> Result<BigInt, DiophantineError> {
        match self {
            ExactReal::Rational(r) => Ok(r.floor().to_integer()),
            ExactReal::Quadratic(q) => {
                // b sqrt d lies strictly between consecutive integers lo and lo + 1.
                let s: BigInt = Roots::sqrt(&(&q.b * &q.b * &q.d));
                let lo = if q.b.is_positive() { s } else { -s - 1 };
                Ok((&q.a + lo).div_floor(&q.c))
            }
            ExactReal::Float(_) => Err(DiophantineError::FloatNotSupported),
        }
    }

    pub fn ceil(&self) -> Result<BigInt, DiophantineError> {
        Ok(-self.checked_neg()?.floor()?)
    }

    /// `x - floor(x)`, in `[0, 1)`.
    pub fn fract_floor(&self) -> Result<Self, DiophantineError> {
        self.checked_sub(&Self::integer(self.floor()?))
    }

    /// `ceil(x) - x`, in `[0, 1)`.
    pub fn fract_ceil(&self) -> Result<Self, DiophantineError> {
        Self::integer(self.ceil()?).checked_sub(self)
    }

    /// Multiplies by an integer.
    pub fn scale(&self, m: &BigInt) -> Result<Self, DiophantineError> {
        self.checked_mul(&Self::integer(m.clone()))
    }

    /// Nearest double, accurate to a few ulps even when `a` and `b*sqrt(d)`
    /// nearly cancel.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExactReal::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            ExactReal::Quadratic(q) => quadratic_to_f64(q),
            ExactReal::Float(f) => f.value,
        }
    }
}

/// `b*sqrt(d)/c` and `a/c` as doubles when they share a sign.
fn same_sign_sum(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> f64 {
    let rational_part = BigRational::new(a.clone(), c.clone()).to_f64().unwrap_or(f64::NAN);
    let sq = BigRational::new(b * b * d, c * c).to_f64().unwrap_or(f64::NAN).sqrt();
    let surd_part = if b.is_negative() { -sq } else { sq };
    rational_part + surd_part
}

fn quadratic_to_f64(q: &QuadraticSurd) -> f64 {
    if q.a.is_zero() || q.a.is_negative() == q.b.is_negative() {
        return same_sign_sum(&q.a, &q.b, &q.c, &q.d);
    }
    // Multiply through by the conjugate, whose two terms share a sign.
    let norm = BigRational::new(&q.a * &q.a - &q.b * &q.b * &q.d, &q.c * &q.c);
    let conj = same_sign_sum(&q.a, &-&q.b, &q.c, &q.d);
    norm.to_f64().unwrap_or(f64::NAN) / conj
}

impl Neg for &ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        self.checked_neg().expect("negation is total")
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &ExactReal {
            type Output = ExactReal;
            /// Panics on float operands or mixed quadratic fields; use the
            /// `checked_` form when either can occur.
            fn $method(self, rhs: &ExactReal) -> ExactReal {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{}: {e}", stringify!($method)))
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl From<i64> for ExactReal {
    fn from(n: i64) -> Self {
        ExactReal::integer(n)
    }
}

impl From<BigRational> for ExactReal {
    fn from(r: BigRational) -> Self {
        ExactReal::Rational(r)
    }
}
