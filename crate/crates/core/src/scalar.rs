//! The coefficient fields the series algebra runs over.
//!
//! [`Symbolic`] keeps every coefficient as an exact [`GradedScalar`] in `t`;
//! [`Numeric`] fixes the depth and works with extended precision reals. The
//! Stokes and linearization recursions are written once against
//! [`ScalarField`] and run in either mode.

use crate::exactfield::{coth_derivative, tanh_multiple, GradedScalar, RatFun};
use crate::error::{Error, Result};
use crate::real::Real;
use std::collections::HashMap;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

/// Arithmetic needed from a series coefficient.
pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + Sub<Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + Mul<Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn is_zero(&self) -> bool;
}

impl Scalar for GradedScalar {
    fn is_zero(&self) -> bool {
        GradedScalar::is_zero(self)
    }
}

impl Scalar for Real {
    fn is_zero(&self) -> bool {
        Real::is_zero(self)
    }
}

/// A coefficient field together with the depth dependent constants.
pub trait ScalarField: Clone + Send + Sync {
    type Elem: Scalar;

    fn zero(&self) -> Self::Elem;
    fn ratio(&self, n: i64, d: i64) -> Self::Elem;
    fn int(&self, n: i64) -> Self::Elem {
        self.ratio(n, 1)
    }
    /// `c_h = √tanh h`.
    fn ch(&self) -> Self::Elem;
    /// `c_h^{-1}`.
    fn ch_inv(&self) -> Self::Elem;
    /// `t = tanh h`.
    fn t(&self) -> Self::Elem;
    /// `tanh(κh)`.
    fn tanh_mult(&self, kappa: usize) -> Self::Elem;
    /// `coth^{(m)}(κh)`.
    fn coth_deriv(&self, kappa: usize, m: usize) -> Self::Elem;

    /// Reject a divisor that is zero, or numerically negligible.
    fn check_denominator(&self, d: &Self::Elem, context: &str) -> Result<()> {
        if d.is_zero() {
            Err(Error::SmallDenominator { value: 0.0, context: context.to_string() })
        } else {
            Ok(())
        }
    }
}

type Cache<T> = Arc<Mutex<HashMap<(usize, usize), T>>>;

fn cached<T: Clone>(cache: &Cache<T>, key: (usize, usize), make: impl FnOnce() -> T) -> T {
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return v.clone();
    }
    let v = make();
    cache.lock().unwrap().insert(key, v.clone());
    v
}

/// Exact coefficients in the graded field.
#[derive(Clone, Default)]
pub struct Symbolic {
    cache: Cache<GradedScalar>,
}

impl Symbolic {
    pub fn new() -> Self {
        Self::default()
    }
}

impl ScalarField for Symbolic {
    type Elem = GradedScalar;

    fn zero(&self) -> GradedScalar {
        GradedScalar::zero()
    }
    fn ratio(&self, n: i64, d: i64) -> GradedScalar {
        GradedScalar::from_ratio(n, d)
    }
    fn ch(&self) -> GradedScalar {
        GradedScalar::ch()
    }
    fn ch_inv(&self) -> GradedScalar {
        GradedScalar::ch_inv()
    }
    fn t(&self) -> GradedScalar {
        GradedScalar::new(0, RatFun::t())
    }
    fn tanh_mult(&self, kappa: usize) -> GradedScalar {
        cached(&self.cache, (kappa, usize::MAX), || GradedScalar::new(0, tanh_multiple(kappa)))
    }
    fn coth_deriv(&self, kappa: usize, m: usize) -> GradedScalar {
        cached(&self.cache, (kappa, m), || GradedScalar::new(0, coth_derivative(kappa, m)))
    }
}

/// Extended precision coefficients at a fixed depth.
#[derive(Clone)]
pub struct Numeric {
    h: Real,
    t: Real,
    ch: Real,
    cache: Cache<Real>,
}

impl Numeric {
    pub fn new(h: f64, prec: u32) -> Self {
        Self::from_real(Real::from_f64(h, prec))
    }

    pub fn from_real(h: Real) -> Self {
        let t = h.tanh();
        let ch = t.sqrt();
        Numeric { h, t, ch, cache: Arc::default() }
    }

    pub fn h(&self) -> &Real {
        &self.h
    }

    pub fn prec(&self) -> u32 {
        self.h.prec()
    }
}

impl ScalarField for Numeric {
    type Elem = Real;

    fn zero(&self) -> Real {
        self.h.zero_like()
    }
    fn ratio(&self, n: i64, d: i64) -> Real {
        self.h.ratio_like(n, d)
    }
    fn ch(&self) -> Real {
        self.ch.clone()
    }
    fn ch_inv(&self) -> Real {
        self.ch.recip()
    }
    fn t(&self) -> Real {
        self.t.clone()
    }
    fn tanh_mult(&self, kappa: usize) -> Real {
        cached(&self.cache, (kappa, usize::MAX), || (self.h.int_like(kappa as i64) * &self.h).tanh())
    }
    fn coth_deriv(&self, kappa: usize, m: usize) -> Real {
        cached(&self.cache, (kappa, m), || {
            // P_m(coth z) with the same polynomial recursion as the exact path
            let c = self.tanh_mult(kappa).recip();
            let p = crate::exactfield::coth_derivative_poly(m);
            let mut acc = self.zero();
            for coef in p.coeffs().iter().rev() {
                acc = acc * &c + self.h.from_bigint(coef);
            }
            acc
        })
    }

    fn check_denominator(&self, d: &Real, context: &str) -> Result<()> {
        let v = d.to_f64();
        if v.abs() < 1e-30 {
            Err(Error::SmallDenominator { value: v, context: context.to_string() })
        } else {
            Ok(())
        }
    }
}
