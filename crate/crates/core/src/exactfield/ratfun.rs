//! Reduced rational functions `num(t)/den(t)` over the rationals.

use super::poly::ZPoly;
use crate::real::Real;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A rational function in `t`, kept in canonical form.
///
/// Both polynomials carry integer coefficients; a rational coefficient field
/// is recovered by the scalar factor hidden in the ratio. Canonical form means
/// `gcd(num, den) = 1` over the rationals, `gcd(content(num), content(den)) = 1`
/// and a positive leading coefficient of `den`. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: ZPoly,
    den: ZPoly,
}

impl RatFun {
    pub fn zero() -> Self {
        RatFun { num: ZPoly::zero(), den: ZPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        RatFun { num: ZPoly::constant(BigInt::from(n)), den: ZPoly::one() }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::new(ZPoly::constant(BigInt::from(n)), ZPoly::constant(BigInt::from(d)))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::new(ZPoly::constant(q.numer().clone()), ZPoly::constant(q.denom().clone()))
    }

    /// The variable `t` itself.
    pub fn t() -> Self {
        RatFun { num: ZPoly::from_i64(&[0, 1]), den: ZPoly::one() }
    }

    pub fn from_poly(p: ZPoly) -> Self {
        Self::new(p, ZPoly::one())
    }

    /// Build and reduce `num/den`. Panics on a zero denominator.
    pub fn new(num: ZPoly, den: ZPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        Self::fix_content(num, den)
    }

    fn fix_content(num: ZPoly, den: ZPoly) -> Self {
        let mut c = num.content().gcd(&den.content());
        if den.lead().unwrap().is_negative() {
            c = -c;
        }
        if c.is_one() {
            RatFun { num, den }
        } else {
            RatFun { num: num.div_exact_scalar(&c), den: den.div_exact_scalar(&c) }
        }
    }

    pub fn num(&self) -> &ZPoly {
        &self.num
    }

    pub fn den(&self) -> &ZPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn neg(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone());
        }
        let g = self.den.gcd(&other.den);
        if g.degree() == Some(0) {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            if num.is_zero() {
                return Self::zero();
            }
            // denominators are coprime, so only the common factor with the
            // new numerator can cancel, which `new` handles.
            return Self::new(num, self.den.mul(&other.den));
        }
        let b1 = self.den.div_exact(&g);
        let d1 = other.den.div_exact(&g);
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        if num.is_zero() {
            return Self::zero();
        }
        let den = b1.mul(&other.den);
        Self::new(num, den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let (a, d) = if g1.degree() == Some(0) {
            (self.num.clone(), other.den.clone())
        } else {
            (self.num.div_exact(&g1), other.den.div_exact(&g1))
        };
        let (c, b) = if g2.degree() == Some(0) {
            (other.num.clone(), self.den.clone())
        } else {
            (other.num.div_exact(&g2), self.den.div_exact(&g2))
        };
        Self::fix_content(a.mul(&c), b.mul(&d))
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::fix_content(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.mul(&other.inv()?))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.mul(&Self::from_int(k))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Value at a rational point; `None` when the denominator vanishes there.
    pub fn eval_rational(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval_rational(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_rational(x) / d)
    }

    /// Value at an extended precision point.
    ///
    /// Also returns the number of bits lost to cancellation in the worse of
    /// numerator and denominator, measured against the sum of absolute terms.
    pub fn eval_real(&self, x: &Real) -> (Real, u32) {
        let (n, ln) = horner_with_loss(&self.num, x);
        let (d, ld) = horner_with_loss(&self.den, x);
        (n / d, ln.max(ld))
    }

    /// Sign changes of the denominator on a uniform grid of `(0, 1]`.
    ///
    /// A zero return does not prove absence of roots; it is the cheap check
    /// used on the construction path. [`RatFun::den_root_in_unit_interval`]
    /// is the exact test.
    pub fn den_sign_changes_on_grid(&self, n: usize) -> usize {
        let mut prev = self.den.eval_f64(1.0 / n as f64).signum();
        let mut changes = 0;
        for k in 2..=n {
            let s = self.den.eval_f64(k as f64 / n as f64).signum();
            if s != prev && s != 0.0 {
                changes += 1;
                prev = s;
            }
        }
        changes
    }

    /// Exact test whether the denominator has a root in `(0, 1]`, by a
    /// Sturm sequence count.
    pub fn den_root_in_unit_interval(&self) -> bool {
        let zero = BigRational::zero();
        let one = BigRational::one();
        if self.den.eval_rational(&one).is_zero() {
            return true;
        }
        sturm_count(&self.den, &zero, &one) > 0
    }
}

fn horner_with_loss(p: &ZPoly, x: &Real) -> (Real, u32) {
    let mut acc = x.zero_like();
    let mut mag = x.zero_like();
    let ax = x.abs();
    for c in p.coeffs().iter().rev() {
        let cr = x.from_bigint(c);
        mag = mag * &ax + cr.abs();
        acc = acc * x + cr;
    }
    let lost = if acc.is_zero() || mag.is_zero() {
        if mag.is_zero() { 0 } else { x.prec() }
    } else {
        let r = (mag / acc.abs()).to_f64();
        if r > 1.0 { r.log2().ceil() as u32 } else { 0 }
    };
    (acc, lost)
}

/// Number of distinct real roots of `p` in the half-open interval `(a, b]`.
fn sturm_count(p: &ZPoly, a: &BigRational, b: &BigRational) -> usize {
    let mut seq = vec![p.primitive(), p.derivative().primitive()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        // pseudo-division by a divisor with positive leading coefficient
        // only scales the true remainder by a positive factor
        let d = if seq[n - 1].lead().unwrap().is_negative() { seq[n - 1].neg() } else { seq[n - 1].clone() };
        let r = seq[n - 2].pseudo_rem(&d);
        if r.is_zero() {
            break;
        }
        let c = r.content();
        seq.push(r.neg().div_exact_scalar(&c));
    }
    let changes = |x: &BigRational| {
        let mut last = 0i8;
        let mut count = 0usize;
        for q in &seq {
            let v = q.eval_rational(x);
            let s = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    };
    changes(a).saturating_sub(changes(b))
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> ZPoly {
        ZPoly::from_i64(c)
    }

    #[test]
    fn sum_reduces_common_factor() {
        // t/(1+t) + t^2/(1+t) = t
        let a = RatFun::new(poly(&[0, 1]), poly(&[1, 1]));
        let b = RatFun::new(poly(&[0, 0, 1]), poly(&[1, 1]));
        assert_eq!(a.add(&b), RatFun::t());
    }

    #[test]
    fn division_by_hand() {
        // (2t/(1+t^2)) / t = 2/(1+t^2)
        let a = RatFun::new(poly(&[0, 2]), poly(&[1, 0, 1]));
        let q = a.div(&RatFun::t()).unwrap();
        assert_eq!(q, RatFun::new(poly(&[2]), poly(&[1, 0, 1])));
    }

    #[test]
    fn canonical_content_and_sign() {
        let a = RatFun::new(poly(&[4, 6]), poly(&[-2, -8]));
        assert_eq!(a.num(), &poly(&[-2, -3]));
        assert_eq!(a.den(), &poly(&[1, 4]));
    }

    #[test]
    fn sturm_finds_interior_root() {
        let has = RatFun::new(poly(&[1]), poly(&[-1, 3]));
        let hasnt = RatFun::new(poly(&[1]), poly(&[1, 3, 1]));
        assert!(has.den_root_in_unit_interval());
        assert!(!hasnt.den_root_in_unit_interval());
        let at_one = RatFun::new(poly(&[1]), poly(&[1, -1]));
        assert!(at_one.den_root_in_unit_interval());
    }
}
