//! Finite-depth Stokes waves and their high-frequency instabilities.
//!
//! The crate expands Stokes waves to arbitrary order, either exactly in the
//! field of rational functions of `tanh h` or numerically at a fixed depth,
//! builds the coefficients of the linearized operator, and evaluates the
//! coefficient `β₁` whose sign decides whether the `p`-th isola of unstable
//! eigenvalues opens. A truncated Bloch–Floquet eigensolver checks the
//! predictions directly.

pub mod beta1;
pub mod collision;
pub mod combinatorics;
pub mod error;
pub mod exactfield;
pub mod linearization;
pub mod real;
pub mod scalar;
pub mod spectrum;
pub mod stokes;
pub mod trigseries;
pub mod verify;

pub use error::{Error, Result};
pub use real::Real;
