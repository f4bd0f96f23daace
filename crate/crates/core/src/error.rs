//! Error type shared by the library.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grade mismatch in graded sum: {left} vs {right}")]
    GradeMismatch { left: u8, right: u8 },
    #[error("division by the zero function")]
    DivisionByZero,
    #[error("evaluation lost {lost} bits to cancellation at {prec}-bit precision")]
    PrecisionLoss { lost: u32, prec: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parity mismatch: {0}")]
    Parity(String),
    #[error("root bracket failure for {0}")]
    Bracket(String),
    #[error("excluded depth h = {h}: {reason}")]
    ExcludedDepth { h: f64, reason: String },
    #[error("linearization order {needed} requested but only {available} available")]
    MissingOrder { needed: usize, available: usize },
    #[error("denominator {value:e} below threshold in {context}")]
    SmallDenominator { value: f64, context: String },
    #[error("imaginary residual {residual:e} exceeds tolerance")]
    ImaginaryResidual { residual: f64 },
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("isola not resolved: {0}")]
    Unresolved(String),
}

pub type Result<T> = std::result::Result<T, Error>;
