//! Certified comparison of `m * K * tan(pi f / 2)` against a threshold.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI};

use astro_float_num::BigFloat;

use crate::diophantine::ExactReal;
use crate::precision::{certified_cmp, ladder, BigCtx};

/// The constant factor `K`.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Coef {
    /// `2 pi / length`.
    TwoPiOver(f64),
    /// `2 / pi`.
    TwoOverPi,
}

/// The right-hand side of the comparison.
#[derive(Clone, Debug)]
pub(crate) enum Rhs<'a> {
    Double(f64),
    Exact(&'a ExactReal),
}

/// `m * K * tan(pi f / 2)` with `f` in `(0, 1)` exact.
#[derive(Clone, Debug)]
pub(crate) struct TanTerm<'a> {
    pub m: u64,
    pub frac: &'a ExactReal,
    pub coef: Coef,
}

impl TanTerm<'_> {
    /// Condition number of `tan` at `x = pi f / 2`, i.e. `2x / sin 2x`.
    fn kappa(&self) -> f64 {
        let x = FRAC_PI_2 * self.frac.to_f64();
        let s = (2.0 * x).sin();
        if s <= 0.0 {
            f64::INFINITY
        } else {
            2.0 * x / s
        }
    }

    /// Double-precision value with a bound on its relative error.
    pub fn value_f64(&self) -> (f64, f64) {
        let k = match self.coef {
            Coef::TwoPiOver(len) => 2.0 * PI / len,
            Coef::TwoOverPi => 2.0 / PI,
        };
        let v = self.m as f64 * k * (FRAC_PI_2 * self.frac.to_f64()).tan();
        (v, 16.0 * f64::EPSILON * (1.0 + self.kappa()))
    }

    fn value_big(&self, ctx: &mut BigCtx) -> BigFloat {
        let pi = ctx.pi();
        let two = ctx.f64(2.0);
        let k = match self.coef {
            Coef::TwoPiOver(len) => {
                let num = ctx.mul(&two, &pi);
                ctx.div(&num, &ctx.f64(len))
            }
            Coef::TwoOverPi => ctx.div(&two, &pi),
        };
        let f = ctx.exact(self.frac);
        let half_pi = ctx.div(&pi, &two);
        let x = ctx.mul(&half_pi, &f);
        let t = ctx.tan(&x);
        let mk = ctx.mul(&ctx.f64(self.m as f64), &k);
        ctx.mul(&mk, &t)
    }

    /// `Some(self < rhs)` once some precision up to `max_bits` separates the
    /// two sides; `None` otherwise.
    pub fn less_than(&self, rhs: &Rhs<'_>, max_bits: usize) -> Option<bool> {
        self.compare(rhs, max_bits).map(|o| o == Ordering::Less)
    }

    pub fn compare(&self, rhs: &Rhs<'_>, max_bits: usize) -> Option<Ordering> {
        let (v, rel) = self.value_f64();
        let (r, r_rel) = match rhs {
            Rhs::Double(x) => (*x, 0.0),
            Rhs::Exact(x) => (x.to_f64(), 4.0 * f64::EPSILON),
        };
        if v.is_finite() {
            let slack = v.abs() * rel + r.abs() * r_rel;
            if v + slack < r {
                return Some(Ordering::Less);
            }
            if v - slack > r {
                return Some(Ordering::Greater);
            }
        }
        let kappa = self.kappa();
        for p in ladder(max_bits) {
            let mut ctx = BigCtx::new(p);
            let lhs = self.value_big(&mut ctx);
            let rhs = match rhs {
                Rhs::Double(x) => ctx.f64(*x),
                Rhs::Exact(x) => ctx.exact(x),
            };
            let tol = 64.0 * ctx.eps() * (1.0 + kappa);
            if let Some(o) = certified_cmp(&lhs, &rhs, tol, &ctx) {
                return Some(o);
            }
        }
        None
    }
}
