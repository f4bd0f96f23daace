//! Elements `c_h^g · r(t)` of the graded field, with `t = c_h² = tanh h`.

use super::ratfun::RatFun;
use crate::error::{Error, Result};
use crate::real::Real;
use num_rational::BigRational;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Exact scalar `c_h^g · rat(t)` with `g ∈ {0, 1}`.
///
/// Negative powers of `c_h` never appear: `c_h^{-1} = c_h / t` moves the
/// factor into the rational part. Zero is compatible with either grade.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedScalar {
    g: u8,
    rat: RatFun,
}

impl GradedScalar {
    pub fn new(g: u8, rat: RatFun) -> Self {
        assert!(g <= 1, "grade must be 0 or 1");
        if rat.is_zero() {
            return Self::zero();
        }
        GradedScalar { g, rat }
    }

    pub fn zero() -> Self {
        GradedScalar { g: 0, rat: RatFun::zero() }
    }

    pub fn one() -> Self {
        GradedScalar { g: 0, rat: RatFun::one() }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::new(0, RatFun::from_ratio(n, d))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::new(0, RatFun::from_rational(q))
    }

    /// `c_h = √t`.
    pub fn ch() -> Self {
        GradedScalar { g: 1, rat: RatFun::one() }
    }

    /// `c_h^{-1} = c_h / t`.
    pub fn ch_inv() -> Self {
        GradedScalar { g: 1, rat: RatFun::t().inv().unwrap() }
    }

    pub fn grade(&self) -> u8 {
        self.g
    }

    pub fn rat(&self) -> &RatFun {
        &self.rat
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.g != other.g {
            return Err(Error::GradeMismatch { left: self.g, right: other.g });
        }
        Ok(Self::new(self.g, self.rat.add(&other.rat)))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        GradedScalar { g: self.g, rat: self.rat.neg() }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let rat = self.rat.mul(&other.rat);
        if self.g + other.g == 2 {
            Self::new(0, rat.mul(&RatFun::t()))
        } else {
            Self::new(self.g + other.g, rat)
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        let inv = other.rat.inv().ok_or(Error::DivisionByZero)?;
        let q = self.rat.mul(&inv);
        Ok(match (self.g, other.g) {
            (a, 0) => Self::new(a, q),
            (1, 1) => Self::new(0, q),
            // c_h^{-1} = c_h / t
            _ => Self::new(1, q.mul(&RatFun::t().inv().unwrap())),
        })
    }

    /// Numeric value at depth `h`, given `t = tanh h` and `c_h = √t`.
    ///
    /// Fails when numerator or denominator evaluation cancels more than half
    /// the working precision.
    pub fn eval_at(&self, t: &Real, ch: &Real) -> Result<Real> {
        let (v, lost) = self.rat.eval_real(t);
        if lost > t.prec() / 2 {
            return Err(Error::PrecisionLoss { lost, prec: t.prec() });
        }
        Ok(if self.g == 1 { v * ch } else { v })
    }

    /// Value at `t = 1`, the infinite depth limit. Only grade-free
    /// information survives since `c_h → 1`.
    pub fn eval_deep(&self) -> Option<BigRational> {
        self.rat.eval_rational(&BigRational::from_integer(1.into()))
    }
}

/// Evaluate `s` at depth `h` with `prec` bits.
pub fn eval_scalar(s: &GradedScalar, h: f64, prec: u32) -> Result<Real> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("depth must be positive, got {h}")));
    }
    if prec < 53 {
        return Err(Error::InvalidArgument(format!("precision must be at least 53 bits, got {prec}")));
    }
    let t = Real::from_f64(h, prec).tanh();
    let ch = t.sqrt();
    s.eval_at(&t, &ch)
}

impl Add for GradedScalar {
    type Output = GradedScalar;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("graded addition")
    }
}

impl<'a> Add<&'a GradedScalar> for GradedScalar {
    type Output = GradedScalar;
    fn add(self, rhs: &'a GradedScalar) -> Self {
        self.checked_add(rhs).expect("graded addition")
    }
}

impl Sub for GradedScalar {
    type Output = GradedScalar;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs).expect("graded subtraction")
    }
}

impl<'a> Sub<&'a GradedScalar> for GradedScalar {
    type Output = GradedScalar;
    fn sub(self, rhs: &'a GradedScalar) -> Self {
        self.checked_sub(rhs).expect("graded subtraction")
    }
}

impl Mul for GradedScalar {
    type Output = GradedScalar;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<'a> Mul<&'a GradedScalar> for GradedScalar {
    type Output = GradedScalar;
    fn mul(self, rhs: &'a GradedScalar) -> Self {
        self.mul_ref(rhs)
    }
}

impl Div for GradedScalar {
    type Output = GradedScalar;
    fn div(self, rhs: Self) -> Self {
        self.checked_div(&rhs).expect("graded division")
    }
}

impl Neg for GradedScalar {
    type Output = GradedScalar;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl fmt::Debug for GradedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GradedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.g == 1 {
            write!(f, "c_h·[{}]", self.rat)
        } else {
            write!(f, "{}", self.rat)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::ZPoly;

    #[test]
    fn half_grades_fold_into_t() {
        let a = GradedScalar::new(1, RatFun::t());
        let b = GradedScalar::ch();
        let p = a * b;
        assert_eq!(p.grade(), 0);
        assert_eq!(p.rat(), &RatFun::from_poly(ZPoly::from_i64(&[0, 0, 1])));
    }

    #[test]
    fn mixed_grade_sum_is_an_error() {
        let e = GradedScalar::ch().checked_add(&GradedScalar::one());
        assert!(matches!(e, Err(Error::GradeMismatch { .. })));
        // zero adapts to either grade
        assert_eq!(GradedScalar::zero() + GradedScalar::ch(), GradedScalar::ch());
    }

    #[test]
    fn inverse_of_ch() {
        let x = GradedScalar::ch() * GradedScalar::ch_inv();
        assert_eq!(x, GradedScalar::one());
        let y = GradedScalar::one().checked_div(&GradedScalar::ch()).unwrap();
        assert_eq!(y, GradedScalar::ch_inv());
    }
}
