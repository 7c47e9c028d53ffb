//! Extended-precision evaluation used when a double-precision comparison
//! cannot be certified.

use astro_float_num::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::diophantine::ExactReal;

const RM: RoundingMode = RoundingMode::ToEven;

/// Binary precisions tried in turn before giving up.
pub fn ladder(max_bits: usize) -> impl Iterator<Item = usize> {
    std::iter::successors(Some(128usize), |p| Some(p * 2)).take_while(move |&p| p <= max_bits.max(128))
}

/// Working context at a fixed binary precision.
pub struct BigCtx {
    pub p: usize,
    cc: Consts,
}

impl BigCtx {
    pub fn new(p: usize) -> Self {
        BigCtx { p, cc: Consts::new().expect("constant cache allocation") }
    }

    /// Unit roundoff at this precision.
    pub fn eps(&self) -> f64 {
        2f64.powi(-(self.p as i32))
    }

    pub fn int(&mut self, n: &BigInt) -> BigFloat {
        let p = self.p.max(n.bits() as usize + 64);
        BigFloat::parse(&n.to_string(), Radix::Dec, p, RM, &mut self.cc)
    }

    pub fn f64(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p.max(64))
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.p, RM)
    }

    pub fn add(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.add(y, self.p, RM)
    }
    pub fn sub(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.sub(y, self.p, RM)
    }
    pub fn mul(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.mul(y, self.p, RM)
    }
    pub fn div(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.div(y, self.p, RM)
    }
    pub fn sqrt(&self, x: &BigFloat) -> BigFloat {
        x.sqrt(self.p, RM)
    }
    pub fn tan(&mut self, x: &BigFloat) -> BigFloat {
        x.tan(self.p, RM, &mut self.cc)
    }

    /// An exact real, with the conjugate form used when `a` and `b*sqrt(d)`
    /// nearly cancel. Relative error is a small multiple of [`eps`](Self::eps).
    pub fn exact(&mut self, x: &ExactReal) -> BigFloat {
        match x {
            ExactReal::Rational(r) => {
                let n = self.int(r.numer());
                let d = self.int(r.denom());
                self.div(&n, &d)
            }
            ExactReal::Quadratic(q) => {
                let (a, b, c, d) = (q.a(), q.b(), q.c(), q.d());
                if a.is_zero() || a.is_negative() == b.is_negative() {
                    let s = self.surd_sum(a, b, d);
                    let c = self.int(c);
                    self.div(&s, &c)
                } else {
                    let norm = a * a - b * b * d;
                    let conj = self.surd_sum(a, &-b, d);
                    let n = self.int(&norm);
                    let c = self.int(c);
                    let den = self.mul(&c, &conj);
                    self.div(&n, &den)
                }
            }
            ExactReal::Float(f) => self.f64(f.value),
        }
    }

    /// Nearest double, up to one ulp.
    pub fn to_f64(&mut self, x: &BigFloat) -> f64 {
        x.format(Radix::Dec, RM, &mut self.cc)
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
            .unwrap_or(f64::NAN)
    }

    /// Largest double not exceeding `x` in magnitude.
    pub fn to_f64_toward_zero(&mut self, x: &BigFloat) -> f64 {
        let mut y = self.to_f64(x);
        let x_abs = x.abs();
        while BigFloat::from_f64(y.abs(), 64).cmp(&x_abs).is_some_and(|c| c > 0) {
            y = if y > 0.0 { y.next_down() } else { y.next_up() };
        }
        loop {
            let next = if x.is_negative() { y.next_down() } else { y.next_up() };
            if BigFloat::from_f64(next.abs(), 64).cmp(&x_abs).is_some_and(|c| c <= 0) {
                y = next;
            } else {
                return y;
            }
        }
    }

    fn surd_sum(&mut self, a: &BigInt, b: &BigInt, d: &BigInt) -> BigFloat {
        let bb = self.int(b);
        let dd = self.int(d);
        let root = self.sqrt(&dd);
        let t = self.mul(&bb, &root);
        let aa = self.int(a);
        self.add(&aa, &t)
    }
}

/// Sign of `x - y` when it exceeds `rel_tol * |y|`; `None` if unresolved.
pub fn certified_cmp(x: &BigFloat, y: &BigFloat, rel_tol: f64, ctx: &BigCtx) -> Option<std::cmp::Ordering> {
    let diff = ctx.sub(x, y);
    let tol = ctx.mul(&y.abs(), &ctx.f64(rel_tol));
    if diff.abs().cmp(&tol)? <= 0 {
        return None;
    }
    Some(if diff.is_negative() { std::cmp::Ordering::Less } else { std::cmp::Ordering::Greater })
}
