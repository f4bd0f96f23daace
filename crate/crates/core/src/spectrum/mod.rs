//! Direct check of the isola predictions: the linearized operator at a Stokes
//! wave is truncated in Fourier space and its eigenvalues are followed across
//! the Floquet exponent `μ`.

mod isola;
mod operator;

pub use isola::{
    fit_ellipse, loglog_slope, predict, trace_isola, Ellipse, IsolaParams, IsolaPrediction, IsolaTrace, PairSample,
    PairTracker, RE_TOL,
};
pub use operator::{build_truncated, eigenvalues, OperatorSymbols, TruncatedOperator, EIG_TOL};
