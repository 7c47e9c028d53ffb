mod common;

use std::f64::consts::PI;

use bsgraph::lattice::{
    certified_gap_count, classify, enumerate_gaps, golden_n_gap_window, DeltaLattice, Endpoint, GapInterval, Verdict,
};
use common::{golden, parse};
use proptest::prelude::*;

/// Range of `(cos t - cos x)/sin x` over `t`: between `tan(x/2)` and `-cot(x/2)`.
fn term_range(x: f64) -> (f64, f64) {
    let (u, v) = ((x / 2.0).tan(), -1.0 / (x / 2.0).tan());
    (u.min(v), u.max(v))
}

/// `k^2` lies in the spectrum iff `alpha/(2k)` is a sum of one value from
/// each edge direction's range. Written from the Floquet dispersion relation
/// of the lattice, independently of the anchor-based enumeration.
fn in_spectrum(a: f64, b: f64, alpha: f64, k: f64) -> bool {
    let (la, ha) = term_range(k * a);
    let (lb, hb) = term_range(k * b);
    let target = alpha / (2.0 * k);
    la + lb <= target && target <= ha + hb
}

fn lattice(a: f64, alpha: f64, theta: &str) -> DeltaLattice {
    DeltaLattice::from_ratio(a, alpha, parse(theta)).unwrap()
}

fn gaps(lat: &DeltaLattice, k_max: f64) -> Vec<GapInterval> {
    enumerate_gaps(lat, k_max).unwrap().gaps
}

const THETAS: [&str; 4] = ["(1+1*sqrt(5))/2", "(0+1*sqrt(2))/1", "(35+1*sqrt(5))/122", "(1+1*sqrt(3))/2"];

#[test]
fn dispersion_oracle_confirms_gaps_and_edges() {
    for theta in THETAS {
        for alpha in [-8.0, -3.0, 2.5, 9.0] {
            let lat = lattice(1.0, alpha, theta);
            let list = gaps(&lat, 60.0);
            for g in &list {
                let lo = g.k_left.max(1e-3);
                for t in [0.1, 0.5, 0.9] {
                    let k = lo + t * (g.k_right - lo);
                    assert!(!in_spectrum(lat.a(), lat.b(), alpha, k), "{theta} alpha={alpha}: k={k} inside {g:?}");
                }
                let eps = 1e-7 * g.k_right;
                assert!(in_spectrum(lat.a(), lat.b(), alpha, g.k_right + eps), "{theta} alpha={alpha}: above {g:?}");
                if !g.extends_below_zero {
                    assert!(in_spectrum(lat.a(), lat.b(), alpha, g.k_left - eps), "{theta} alpha={alpha}: below {g:?}");
                }
            }
        }
    }
}

#[test]
fn dispersion_oracle_finds_no_unlisted_gaps() {
    for theta in THETAS {
        for alpha in [-5.0, 4.0] {
            let lat = lattice(1.0, alpha, theta);
            let list = gaps(&lat, 40.0);
            // Stay clear of gaps whose fixed endpoint lies past the cut-off.
            let k_top = 39.0;
            let n = 200_000;
            // For alpha > 0 the spectrum starts above zero; that stretch is not a gap.
            let mut entered = alpha < 0.0;
            for i in 1..n {
                let k = k_top * i as f64 / n as f64;
                let inside = in_spectrum(lat.a(), lat.b(), alpha, k);
                entered |= inside;
                if k < 0.05 || !entered {
                    continue;
                }
                if !inside {
                    let listed = list.iter().any(|g| g.k_left - 1e-9 <= k && k <= g.k_right + 1e-9);
                    assert!(listed, "{theta} alpha={alpha}: k = {k} is in an unlisted gap");
                }
            }
        }
    }
}

#[test]
fn fixed_endpoint_sits_on_anchor() {
    for theta in THETAS {
        for alpha in [-6.0, 3.0] {
            let lat = lattice(1.3, alpha, theta);
            for g in gaps(&lat, 80.0) {
                let expected = if alpha > 0.0 { Endpoint::Left } else { Endpoint::Right };
                assert_eq!(g.fixed_endpoint, expected);
                let anchor = lat.anchor(g.m, g.side);
                assert!((g.fixed_k() - anchor).abs() <= 1e-14 * anchor, "{g:?} vs {anchor}");
                assert!(g.k_left < g.k_right);
            }
        }
    }
}

#[test]
fn enumeration_is_sorted_disjoint_and_monotone_in_k_max() {
    for theta in THETAS {
        let lat = lattice(1.0, -4.0, theta);
        let small = gaps(&lat, 50.0);
        let large = gaps(&lat, 150.0);
        assert!(large.windows(2).all(|w| w[0].k_right <= w[1].k_left));
        assert!(small.len() <= large.len());
        assert!(small.iter().all(|g| large.contains(g)));
        assert!(small.iter().all(|g| g.fixed_k() <= 50.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Lengths times `s`, coupling over `s`: momenta scale by `1/s`.
    #[test]
    fn scaling_covariance(s in 0.2f64..5.0, alpha in prop_oneof![-9.0f64..-0.5, 0.5f64..9.0], idx in 0usize..4) {
        let base = lattice(1.0, alpha, THETAS[idx]);
        let scaled = lattice(s, alpha / s, THETAS[idx]);
        let g0 = gaps(&base, 40.0);
        let g1 = gaps(&scaled, 40.0 / s);
        // Gaps sitting exactly at the cut-off may drop out through rounding.
        let n = g0.len().min(g1.len());
        prop_assert!(g0.len().abs_diff(g1.len()) <= 1);
        for (x, y) in g0.iter().zip(&g1).take(n) {
            prop_assert_eq!((x.m, x.side), (y.m, y.side));
            prop_assert!((x.k_left - s * y.k_left).abs() <= 1e-9 * x.k_right);
            prop_assert!((x.k_right - s * y.k_right).abs() <= 1e-9 * x.k_right);
        }
    }

    #[test]
    fn classification_agrees_with_enumeration(alpha in prop_oneof![-20.0f64..-0.1, 0.1f64..20.0], idx in 0usize..4) {
        let lat = lattice(1.0, alpha, THETAS[idx]);
        let verdict = classify(&lat, 2000).unwrap().verdict;
        let near = gaps(&lat, 200.0).len();
        let far = gaps(&lat, 3000.0).len();
        match verdict {
            Verdict::NoGaps => prop_assert_eq!(far, 0),
            Verdict::Infinite => prop_assert!(far > near),
            Verdict::FiniteNonzero => prop_assert!(far > 0),
            Verdict::Finite | Verdict::Inconclusive => {}
        }
        if let Some(n) = certified_gap_count(&lat, 2000).unwrap() {
            prop_assert_eq!(n, far);
        }
    }
}

#[test]
fn golden_windows_partition_the_negative_axis() {
    let windows: Vec<_> = (1..=10).map(|n| golden_n_gap_window(n, 1.0).unwrap()).collect();
    for w in windows.windows(2) {
        assert_eq!(w[0].lower, w[1].upper, "windows {} and {} must share an endpoint", w[0].n, w[1].n);
    }
    let limit = -PI * PI / 5f64.sqrt();
    assert!(windows.iter().all(|w| w.lower < w.upper && w.lower > limit));
    for w in &windows[..6] {
        let lat = DeltaLattice::from_ratio(1.0, w.midpoint(), golden()).unwrap();
        let mut h = 16u64;
        let n = loop {
            if let Some(n) = certified_gap_count(&lat, h).unwrap() {
                break n;
            }
            h *= 2;
            assert!(h < 1 << 18, "window {} never certified", w.n);
        };
        assert_eq!(n as u64, w.n);
    }
}

#[test]
fn window_scales_inversely_with_a() {
    for n in 1..=5 {
        let w1 = golden_n_gap_window(n, 1.0).unwrap();
        let w2 = golden_n_gap_window(n, 2.0).unwrap();
        assert!((w1.lower - 2.0 * w2.lower).abs() <= 1e-14 * w1.lower.abs());
        assert!((w1.upper - 2.0 * w2.upper).abs() <= 1e-14 * w1.upper.abs());
    }
}
