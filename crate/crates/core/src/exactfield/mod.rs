//! Exact arithmetic in `Q(c_h²)`, the field of rational functions of `t = tanh h`
//! extended by the half power `c_h = √t`.

mod graded;
mod hyperbolic;
mod poly;
mod ratfun;

pub use graded::{eval_scalar, GradedScalar};
pub use hyperbolic::{coth_derivative, coth_derivative_poly, tanh_multiple};
pub use poly::ZPoly;
pub use ratfun::RatFun;
