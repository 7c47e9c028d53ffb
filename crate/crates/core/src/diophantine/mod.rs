//! Exact Diophantine machinery: quadratic irrationals, continued fractions,
//! one-sided Markov constants and best approximations of the third kind.

mod cf;
mod exact;
mod markov;
mod text;

use num_bigint::BigInt;
use thiserror::Error;

pub use cf::{cf_expand, convergents, purely_periodic, CfKind, ContinuedFraction, Convergent, ConvergentIter};
pub use exact::{ExactReal, FloatApprox, QuadraticSurd};
pub use markov::{
    best_approx_third_kind, equivalent, markov_constant, upsilon, upsilon_pair, ApproxSide, BestApproximation,
    FloorProductProfile, MarkovValue, OneSidedMarkov, DEFAULT_MAX_TERMS,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiophantineError {
    #[error("continued fraction period not found within {max_terms} terms")]
    PeriodNotFound { max_terms: usize },
    #[error("operation needs an exact value, got a float approximation")]
    FloatNotSupported,
    #[error("value must be positive")]
    NonPositive,
    #[error("value must be irrational")]
    Rational,
    #[error("division by zero")]
    DivisionByZero,
    #[error("values lie in different quadratic fields (d = {0} and d = {1})")]
    FieldMismatch(BigInt, BigInt),
    #[error("negative radicand {0}")]
    NegativeRadicand(BigInt),
    #[error("radicand {0} is too large to reduce to square-free form")]
    RadicandTooLarge(BigInt),
    #[error("parse error: {0}")]
    Parse(String),
}
