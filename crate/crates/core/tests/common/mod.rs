//! Independent oracles shared by the integration tests. They work directly
//! on `(a + b*sqrt(d))/c` with `i128` arithmetic and share no code with the
//! library's continued-fraction machinery.
#![allow(dead_code)]

use std::cmp::Ordering;

use bsgraph::diophantine::ExactReal;
use num_traits::ToPrimitive;

/// `(a + b*sqrt(d))/c` with `c > 0`; `b = 0` for rationals.
#[derive(Clone, Copy, Debug)]
pub struct Quad {
    pub a: i128,
    pub b: i128,
    pub d: i128,
    pub c: i128,
}

fn isqrt(n: i128) -> i128 {
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Sign of `x + y*sqrt(d)`.
pub fn sign(x: i128, y: i128, d: i128) -> Ordering {
    let (sx, sy) = (x.cmp(&0), y.cmp(&0));
    if sy == Ordering::Equal || d == 0 {
        return sx;
    }
    if sx == Ordering::Equal || sx == sy {
        return sy;
    }
    match (x * x).cmp(&(y * y * d)) {
        Ordering::Greater => sx,
        Ordering::Less => sy,
        Ordering::Equal => Ordering::Equal,
    }
}

impl Quad {
    pub fn from_exact(x: &ExactReal) -> Quad {
        match x {
            ExactReal::Rational(r) => {
                let (n, d) = (r.numer().to_i128().unwrap(), r.denom().to_i128().unwrap());
                Quad { a: n, b: 0, d: 0, c: d }
            }
            ExactReal::Quadratic(q) => Quad {
                a: q.a().to_i128().unwrap(),
                b: q.b().to_i128().unwrap(),
                d: q.d().to_i128().unwrap(),
                c: q.c().to_i128().unwrap(),
            },
            ExactReal::Float(_) => panic!("oracle needs an exact value"),
        }
    }

    /// `floor(m x)`.
    pub fn floor_mul(&self, m: i128) -> i128 {
        let (x, y) = (m * self.a, m * self.b);
        // floor((x + y sqrt d)/c): find p with c p <= x + y sqrt d < c (p + 1).
        let approx = if self.b == 0 {
            x.div_euclid(self.c)
        } else {
            let s = isqrt(y * y * self.d) * y.signum();
            (x + s).div_euclid(self.c)
        };
        let mut p = approx - 2;
        while sign(x - self.c * (p + 1), y, self.d) != Ordering::Less {
            p += 1;
        }
        p
    }

    /// `m x - floor(m x)` to full double accuracy.
    pub fn frac_floor(&self, m: i128) -> f64 {
        let p = self.floor_mul(m);
        self.diff(m, p)
    }

    /// `ceil(m x) - m x`.
    pub fn frac_ceil(&self, m: i128) -> f64 {
        let p = self.floor_mul(m);
        let f = self.diff(m, p);
        if f == 0.0 {
            0.0
        } else {
            -self.diff(m, p + 1)
        }
    }

    /// `m x - p`, rationalised so that there is no cancellation.
    pub fn diff(&self, m: i128, p: i128) -> f64 {
        let x = m * self.a - p * self.c;
        let y = m * self.b;
        if y == 0 {
            return x as f64 / self.c as f64;
        }
        let r = (self.d as f64).sqrt();
        if x.signum() == y.signum() {
            return (x as f64 + y as f64 * r) / self.c as f64;
        }
        // Opposite signs cancel; x + y r = (x^2 - y^2 d) / (x - y r) does not.
        let num = (x * x - y * y * self.d) as f64;
        num / (x as f64 - y as f64 * r) / self.c as f64
    }

    /// `q (q x - p)` as `(X + Y sqrt d)/c`.
    pub fn below_product(&self, p: i128, q: i128) -> (i128, i128) {
        (q * (q * self.a - p * self.c), q * q * self.b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleSide {
    Below,
    Above,
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Best approximations of the third kind found by exhaustive search.
/// Competitors are taken on the same side of `x` as the candidate. For each
/// `q` only the two nearest numerators on the requested side are kept: any
/// further one has a strictly larger product than a same-`q` neighbour, so
/// it can neither win nor be the unique minimum.
pub fn brute_third_kind(x: &Quad, side: OracleSide, q_max: i128) -> Vec<(i128, i128)> {
    // product (X, Y) meaning (X + Y sqrt d)/c, and the reduced fraction.
    let mut all: Vec<(i128, i128, i128, i128)> = Vec::new();
    for q in 1..=q_max {
        let f = x.floor_mul(q);
        let exact = sign(q * x.a - f * x.c, q * x.b, x.d) == Ordering::Equal;
        let ps: Vec<i128> = match side {
            OracleSide::Below => vec![f, f - 1],
            OracleSide::Above if exact => vec![f, f + 1],
            OracleSide::Above => vec![f + 1, f + 2],
        };
        for p in ps {
            if gcd(p, q) != 1 {
                continue;
            }
            let (bx, by) = x.below_product(p, q);
            let (px, py) = match side {
                OracleSide::Below => (bx, by),
                OracleSide::Above => (-bx, -by),
            };
            all.push((p, q, px, py));
        }
    }
    let mut out = Vec::new();
    for &(p, q, px, py) in &all {
        if sign(px, py, x.d) == Ordering::Less {
            continue;
        }
        let beaten = all.iter().any(|&(p2, q2, x2, y2)| {
            q2 <= q && (p2, q2) != (p, q) && sign(x2 - px, y2 - py, x.d) != Ordering::Greater
        });
        if !beaten {
            out.push((p, q));
        }
    }
    out
}

/// Convergents `p_n/q_n` with `q_n <= q_max`, from the Gauss map run on the
/// exact complete quotients.
pub fn convergents_up_to(x: &Quad, q_max: i128) -> Vec<(i128, i128)> {
    let mut out = Vec::new();
    let (mut p0, mut q0, mut p1, mut q1) = (1i128, 0i128, 0i128, 1i128);
    let mut t = *x;
    loop {
        let a = t.floor_mul(1);
        let (p, q) = (a * p0 + p1, a * q0 + q1);
        if q > q_max {
            break;
        }
        out.push((p, q));
        (p1, q1, p0, q0) = (p0, q0, p, q);
        // t <- 1 / (t - a).
        let num_a = t.a - a * t.c;
        if num_a == 0 && t.b == 0 {
            break;
        }
        // c / (num_a + b r) = c (num_a - b r) / (num_a^2 - b^2 d)
        let den = num_a * num_a - t.b * t.b * t.d;
        let (mut na, mut nb, mut nc) = (t.c * num_a, -t.c * t.b, den);
        if nc < 0 {
            (na, nb, nc) = (-na, -nb, -nc);
        }
        let g = gcd(gcd(na, nb), nc);
        t = Quad { a: na / g, b: nb / g, d: t.d, c: nc / g };
    }
    out
}

/// `min_{m <= n} m * frac(m x)` for every `n` up to `m_max`.
pub fn windowed_min_below(x: &Quad, m_max: i128) -> Vec<f64> {
    let mut best = f64::INFINITY;
    (1..=m_max)
        .map(|m| {
            best = best.min(m as f64 * x.frac_floor(m));
            best
        })
        .collect()
}

pub fn windowed_min_above(x: &Quad, m_max: i128) -> Vec<f64> {
    let mut best = f64::INFINITY;
    (1..=m_max)
        .map(|m| {
            best = best.min(m as f64 * x.frac_ceil(m));
            best
        })
        .collect()
}

pub fn parse(s: &str) -> ExactReal {
    s.parse().unwrap()
}

pub fn golden() -> ExactReal {
    ExactReal::golden()
}

/// The ratio built from `beta = (sqrt 5 - 1)/2` with two prefixed `t = 3` terms.
pub fn theta_t3() -> ExactReal {
    parse("(35+1*sqrt(5))/122")
}
