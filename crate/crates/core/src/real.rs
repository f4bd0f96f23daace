//! Extended precision reals, a thin value wrapper over MPFR floats.

use num_bigint::BigInt;
use num_rational::BigRational;
use rug::float::Round;
use rug::ops::Pow;
use rug::Float;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// An MPFR float carrying its own precision.
///
/// Binary operations round to the larger of the two operand precisions.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Real(Float);

impl Real {
    pub fn from_f64(x: f64, prec: u32) -> Self {
        Real(Float::with_val(prec, x))
    }

    pub fn from_i64(x: i64, prec: u32) -> Self {
        Real(Float::with_val(prec, x))
    }

    pub fn ratio(n: i64, d: i64, prec: u32) -> Self {
        Real(Float::with_val(prec, n) / d)
    }

    /// Parse a decimal string at the given precision.
    pub fn parse(s: &str, prec: u32) -> Option<Self> {
        Float::parse(s).ok().map(|v| Real(Float::with_val(prec, v)))
    }

    pub fn from_bigint_prec(n: &BigInt, prec: u32) -> Self {
        let s = n.to_str_radix(16);
        let v = Float::parse_radix(&s, 16).expect("integer literal");
        Real(Float::with_val(prec, v))
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        (Self::from_bigint_prec(q.numer(), prec + 8) / Self::from_bigint_prec(q.denom(), prec + 8)).with_prec(prec)
    }

    /// Same precision as `self`, value zero.
    pub fn zero_like(&self) -> Self {
        Real(Float::new(self.prec()))
    }

    pub fn one_like(&self) -> Self {
        Real(Float::with_val(self.prec(), 1))
    }

    /// An integer at the precision of `self`.
    pub fn int_like(&self, n: i64) -> Self {
        Real(Float::with_val(self.prec(), n))
    }

    pub fn ratio_like(&self, n: i64, d: i64) -> Self {
        Self::ratio(n, d, self.prec())
    }

    pub fn from_bigint(&self, n: &BigInt) -> Self {
        Self::from_bigint_prec(n, self.prec())
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Real(Float::with_val(prec, &self.0))
    }

    pub fn inner(&self) -> &Float {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn signum_i(&self) -> i32 {
        match self.0.cmp0() {
            Some(Ordering::Greater) => 1,
            Some(Ordering::Less) => -1,
            _ => 0,
        }
    }

    pub fn abs(&self) -> Self {
        Real(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> Self {
        Real(self.0.clone().sqrt())
    }

    pub fn exp(&self) -> Self {
        Real(self.0.clone().exp())
    }

    pub fn ln(&self) -> Self {
        Real(self.0.clone().ln())
    }

    pub fn tanh(&self) -> Self {
        Real(self.0.clone().tanh())
    }

    pub fn cos(&self) -> Self {
        Real(self.0.clone().cos())
    }

    pub fn sin(&self) -> Self {
        Real(self.0.clone().sin())
    }

    pub fn pi(prec: u32) -> Self {
        Real(Float::with_val(prec, rug::float::Constant::Pi))
    }

    pub fn coth(&self) -> Self {
        Real(self.0.clone().coth())
    }

    pub fn recip(&self) -> Self {
        Real(self.0.clone().recip())
    }

    pub fn square(&self) -> Self {
        Real(self.0.clone().square())
    }

    pub fn powi(&self, e: i32) -> Self {
        Real(self.0.clone().pow(e))
    }

    pub fn powf(&self, e: &Real) -> Self {
        Real(self.0.clone().pow(&e.0))
    }

    pub fn max(self, other: Self) -> Self {
        if other > self { other } else { self }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self { other } else { self }
    }

    /// Decimal string with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        self.0.to_string_radix_round(10, Some(digits), Round::Nearest)
    }

    /// Decimal string carrying the full working precision.
    pub fn to_decimal_full(&self) -> String {
        let digits = (self.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1;
        self.to_decimal(digits)
    }
}

fn out_prec(a: &Float, b: &Float) -> u32 {
    a.prec().max(b.prec())
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                let p = out_prec(&self.0, &rhs.0);
                Real(Float::with_val(p, (&self.0).$m(&rhs.0)))
            }
        }
        impl<'a> $tr<&'a Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &'a Real) -> Real {
                let p = out_prec(&self.0, &rhs.0);
                Real(Float::with_val(p, (&self.0).$m(&rhs.0)))
            }
        }
        impl<'a, 'b> $tr<&'b Real> for &'a Real {
            type Output = Real;
            fn $m(self, rhs: &'b Real) -> Real {
                let p = out_prec(&self.0, &rhs.0);
                Real(Float::with_val(p, (&self.0).$m(&rhs.0)))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Mul<i64> for Real {
    type Output = Real;
    fn mul(self, rhs: i64) -> Real {
        Real(self.0 * rhs)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0.clone())
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(d) => write!(f, "{}", self.to_decimal(d.max(1))),
            None => write!(f, "{}", self.to_decimal(20)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_follows_widest_operand() {
        let a = Real::from_f64(1.0, 64);
        let b = Real::from_f64(3.0, 256);
        assert_eq!((a / b).prec(), 256);
    }

    #[test]
    fn bigint_conversion_is_exact() {
        let n: BigInt = "123456789012345678901234567890123456789".parse().unwrap();
        let r = Real::from_bigint_prec(&n, 256);
        assert_eq!(r.to_decimal(39), "123456789012345678901234567890123456789");
    }
}
