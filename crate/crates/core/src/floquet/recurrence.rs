//! Recurrence of gaps for scale-invariant cells: the secular function
//! depends on `k` only through the phases `k l_j mod 2 pi`, so a momentum
//! whose phases nearly repeat those at `k0` carries a gap like the one at `k0`.

use std::f64::consts::PI;

use serde::Serialize;

use super::cell::UnitCellGraph;
use super::secular::wrap_2pi;
use super::FloquetError;

pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Recurrence {
    pub k0: f64,
    pub k_prime: f64,
    /// Multiplier making the shift exceed the requested distance.
    pub m: u64,
    /// Dirichlet denominator.
    pub q: u64,
    /// Pigeonhole bound on `q`.
    pub q_bound: u64,
    /// Allowed phase error.
    pub delta: f64,
    /// Largest `|{k' l_j - k0 l_j}|` over the distinct lengths.
    pub phase_error: f64,
}

/// Finds `k' >= k0 + c` whose phase vector lies within `epsilon l_min / 4`
/// of the one at `k0`. `s` is the width of the gap around `k0` and must
/// exceed `epsilon`.
pub fn gap_recurrence_search(
    cell: &UnitCellGraph,
    k0: f64,
    s: f64,
    epsilon: f64,
    c: f64,
    budget: u64,
) -> Result<Recurrence, FloquetError> {
    if !cell.is_scale_invariant() {
        return Err(FloquetError::Precondition("gap recurrence needs scale-invariant couplings".into()));
    }
    if !(k0 > 0.0 && epsilon > 0.0 && s > epsilon && c > 0.0) {
        return Err(FloquetError::Precondition("need k0 > 0, c > 0 and s > epsilon > 0".into()));
    }
    let lengths = cell.distinct_lengths();
    let l0 = lengths[0];
    let l_min = lengths.iter().copied().fold(f64::INFINITY, f64::min);
    let ratios: Vec<f64> = lengths[1..].iter().map(|l| l / l0).collect();
    let m = ((l0 * c / (2.0 * PI)).ceil() as u64).max(1);
    let delta = epsilon * l_min / 4.0;
    let tol = delta / (2.0 * PI * m as f64);

    let q_bound_f = (1.0 / tol).powi(ratios.len() as i32).floor() + 1.0;
    if q_bound_f > budget as f64 {
        return Err(FloquetError::SearchBudgetExceeded { required: q_bound_f, budget });
    }
    let q_bound = q_bound_f as u64;
    let dist = |x: f64| (x - x.round()).abs();
    let q = (1..=q_bound)
        .find(|&q| ratios.iter().all(|r| dist(q as f64 * r) < tol))
        .ok_or_else(|| FloquetError::Precondition("no recurrence found within the pigeonhole bound".into()))?;

    let k_prime = k0 + 2.0 * PI * (m * q) as f64 / l0;
    let phase_error = lengths.iter().map(|l| wrap_2pi(k_prime * l - k0 * l).abs()).fold(0.0, f64::max);
    Ok(Recurrence { k0, k_prime, m, q, q_bound, delta, phase_error })
}

#[cfg(test)]
mod tests {
    use super::super::coupling::VertexCouplingST;
    use super::*;

    fn chain(l1: f64) -> UnitCellGraph {
        let v = VertexCouplingST::kirchhoff(2);
        UnitCellGraph::chain(1.0, l1, v.clone(), v).unwrap()
    }

    #[test]
    fn rational_lengths_recur_exactly() {
        let r = gap_recurrence_search(&chain(2.0), 1.0, 0.2, 0.1, 5.0, 1000).unwrap();
        assert_eq!(r.q, 1);
        assert!(r.k_prime >= 6.0);
        assert!(r.phase_error < 1e-12);
    }

    #[test]
    fn irrational_lengths_hit_the_tolerance() {
        let r = gap_recurrence_search(&chain(2f64.sqrt()), 1.0, 0.2, 0.1, 5.0, 1_000_000).unwrap();
        assert!(r.k_prime - 1.0 >= 5.0);
        assert!(r.phase_error < r.delta);
    }

    #[test]
    fn budget_is_enforced() {
        let err = gap_recurrence_search(&chain(2f64.sqrt()), 1.0, 0.2, 1e-9, 5.0, 10).unwrap_err();
        assert!(matches!(err, FloquetError::SearchBudgetExceeded { .. }));
    }

    #[test]
    fn non_scale_invariant_cell_is_rejected() {
        let v = VertexCouplingST::delta(2, 1.0);
        let cell = UnitCellGraph::chain(1.0, 2.0, v.clone(), v).unwrap();
        assert!(matches!(gap_recurrence_search(&cell, 1.0, 0.2, 0.1, 5.0, 10), Err(FloquetError::Precondition(_))));
    }
}
