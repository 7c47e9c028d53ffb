//! Spectral gaps of periodic quantum graphs.
//!
//! * [`diophantine`]: exact quadratic irrationals, continued fractions and
//!   one-sided Markov constants.
//! * [`lattice`]: gap theory of the rectangular delta-coupled lattice.
//! * [`floquet`]: a numerical Floquet-Bloch secular engine for general
//!   periodic graphs.

pub mod diophantine;
pub mod floquet;

pub mod lattice;
pub mod precision;
pub mod report;
