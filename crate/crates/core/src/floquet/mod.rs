//! Floquet-Bloch secular engine for periodic quantum graphs given by a
//! unit cell with ST-form vertex couplings.

mod cell;
mod coupling;
mod recurrence;
mod scan;
mod secular;

use thiserror::Error;

pub use cell::{Edge, Port, UnitCellGraph, CELL_FORMAT};
pub use coupling::{CMatrix, VertexCouplingST};
pub use recurrence::{gap_recurrence_search, Recurrence, DEFAULT_SEARCH_BUDGET};
pub use scan::{band_scan, lipschitz_bound, Label, ScanInterval, ScanOptions, ScanSample, SecularScan, SCAN_SCHEMA};
pub use secular::{
    bond_scattering, bond_scattering_at_inverse_k, phase_vector, secular, secular_complex, wrap_2pi, SecularFiber,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FloquetError {
    #[error("invalid vertex coupling: {0}")]
    InvalidCoupling(String),
    #[error("invalid unit cell: {0}")]
    InvalidCell(String),
    #[error("cannot parse cell: {0}")]
    Parse(String),
    #[error("momentum must be positive, got {0}")]
    InvalidMomentum(f64),
    #[error("resolvent is singular at this momentum; perturb k")]
    SingularResolvent,
    #[error("lost track of the square-root branch of det S at k = {k}")]
    BranchTrackingLost { k: f64 },
    #[error("realified secular function has imaginary part {residual:e} at k = {k}")]
    NotReal { k: f64, residual: f64 },
    #[error("search needs {required:e} candidates, budget is {budget}")]
    SearchBudgetExceeded { required: f64, budget: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
}
