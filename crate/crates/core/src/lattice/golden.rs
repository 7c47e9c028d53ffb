//! Golden-mean lattice (`a/b = phi`): the increasing sequence
//! `A_j = 2 pi F_{2j} tan((pi/2)(F_{2j+1} - F_{2j} phi))` and the coupling
//! windows giving exactly `N` gaps.

use astro_float_num::BigFloat;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::LatticeError;
use crate::diophantine::ExactReal;
use crate::precision::BigCtx;

const BITS: usize = 256;

/// `(F_n, F_{n+1})`.
fn fibonacci_pair(n: u64) -> (BigInt, BigInt) {
    let (mut x, mut y) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let next = &x + &y;
        x = std::mem::replace(&mut y, next);
    }
    (x, y)
}

/// `F_{2j+1} - F_{2j} phi`, exact and in `(0, 1)`.
fn golden_fraction(j: u64) -> ExactReal {
    let (f, g) = fibonacci_pair(2 * j);
    let phi = ExactReal::golden();
    &ExactReal::integer(g) - &phi.scale(&f).expect("exact scaling")
}

fn a_j_big(j: u64, ctx: &mut BigCtx) -> BigFloat {
    let (f, _) = fibonacci_pair(2 * j);
    let frac = golden_fraction(j);
    let pi = ctx.pi();
    let x = ctx.exact(&frac);
    let half_pi = ctx.div(&pi, &ctx.f64(2.0));
    let arg = ctx.mul(&half_pi, &x);
    let t = ctx.tan(&arg);
    let two_pi = ctx.mul(&ctx.f64(2.0), &pi);
    let fb = ctx.int(&f);
    let c = ctx.mul(&two_pi, &fb);
    ctx.mul(&c, &t)
}

/// `A_j` rounded to nearest, `j >= 1`.
pub fn golden_a_j(j: u64) -> f64 {
    let mut ctx = BigCtx::new(BITS);
    let v = a_j_big(j, &mut ctx);
    ctx.to_f64(&v)
}

/// Half-open window `[lower, upper)` of couplings with exactly `n` gaps.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaWindow {
    pub n: u64,
    pub a: f64,
    /// `-A_{n+1}/a`, rounded toward zero so the bound stays inside.
    pub lower: f64,
    /// `-A_n/a`, rounded toward zero; excluded.
    pub upper: f64,
    pub lower_symbolic: String,
    pub upper_symbolic: String,
}

impl AlphaWindow {
    pub fn contains(&self, alpha: f64) -> bool {
        self.lower <= alpha && alpha < self.upper
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

fn symbolic(j: u64) -> String {
    let (f, _) = fibonacci_pair(2 * j);
    format!("-2*pi*{f}*tan(pi*({})/2)/a", golden_fraction(j))
}

/// Couplings for which the lattice with `a/b = phi` has exactly `n` gaps.
pub fn golden_n_gap_window(n: u64, a: f64) -> Result<AlphaWindow, LatticeError> {
    if n == 0 {
        return Err(LatticeError::Precondition("N must be at least 1".into()));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(LatticeError::InvalidLattice(format!("a must be positive, got {a}")));
    }
    let mut ctx = BigCtx::new(BITS);
    let mut bound = |j: u64| {
        let v = a_j_big(j, &mut ctx);
        let scaled = ctx.div(&v, &ctx.f64(a));
        -ctx.to_f64_toward_zero(&scaled)
    };
    let lower = bound(n + 1);
    let upper = bound(n);
    Ok(AlphaWindow { n, a, lower, upper, lower_symbolic: symbolic(n + 1), upper_symbolic: symbolic(n) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn first_term_matches_closed_form() {
        let a1 = 2.0 * PI * ((3.0 - 5f64.sqrt()) * PI / 4.0).tan();
        assert!((golden_a_j(1) - a1).abs() < 1e-14);
    }

    #[test]
    fn sequence_increases_below_limit() {
        let limit = PI * PI / 5f64.sqrt();
        let values: Vec<f64> = (1..=12).map(golden_a_j).collect();
        assert!(values.windows(2).all(|w| w[0] < w[1]));
        assert!(values.iter().all(|&v| v < limit));
    }

    #[test]
    fn windows_are_adjacent() {
        let w1 = golden_n_gap_window(1, 1.0).unwrap();
        let w2 = golden_n_gap_window(2, 1.0).unwrap();
        assert_eq!(w2.upper, w1.lower);
        assert!(w1.contains(w1.midpoint()));
        assert!(!w1.contains(w1.upper));
    }
}
