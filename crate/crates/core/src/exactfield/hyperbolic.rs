//! `tanh(κh)` and derivatives of `coth` at `κh` as rational functions of `t = tanh h`.

use super::poly::ZPoly;
use super::ratfun::RatFun;
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn binomial(n: usize, k: usize) -> BigInt {
    let mut b = BigInt::one();
    for i in 0..k {
        b = b * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    b
}

/// `tanh(κh)` as the ratio of odd and even binomial sums in `t`.
pub fn tanh_multiple(kappa: usize) -> RatFun {
    assert!(kappa >= 1, "tanh_multiple needs κ ≥ 1");
    let mut num = vec![BigInt::zero(); kappa + 1];
    let mut den = vec![BigInt::zero(); kappa + 1];
    for j in 0..=kappa {
        if j % 2 == 1 {
            num[j] = binomial(kappa, j);
        } else {
            den[j] = binomial(kappa, j);
        }
    }
    RatFun::new(ZPoly::from_coeffs(num), ZPoly::from_coeffs(den))
}

/// Polynomial `P_m` with `coth^{(m)}(z) = P_m(coth z)`.
///
/// Built from `P_0(c) = c` and `P_{m+1} = P_m'(c)·(1 − c²)`.
pub fn coth_derivative_poly(m: usize) -> ZPoly {
    let one_minus_c2 = ZPoly::from_i64(&[1, 0, -1]);
    let mut p = ZPoly::from_i64(&[0, 1]);
    for _ in 0..m {
        p = p.derivative().mul(&one_minus_c2);
    }
    p
}

/// `(d/dz)^m coth(z)` at `z = κh`, as a rational function of `t`.
pub fn coth_derivative(kappa: usize, m: usize) -> RatFun {
    let tk = tanh_multiple(kappa);
    // coth = den/num of tanh(κh)
    let (n, d) = (tk.num().clone(), tk.den().clone());
    let p = coth_derivative_poly(m);
    let deg = p.degree().unwrap_or(0);
    let mut num = ZPoly::zero();
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        num = num.add(&d.pow(i).mul(&n.pow(deg - i)).scale(c));
    }
    RatFun::new(num, n.pow(deg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_multiples() {
        assert_eq!(tanh_multiple(1), RatFun::t());
        assert_eq!(tanh_multiple(2), RatFun::new(ZPoly::from_i64(&[0, 2]), ZPoly::from_i64(&[1, 0, 1])));
        assert_eq!(tanh_multiple(3), RatFun::new(ZPoly::from_i64(&[0, 3, 0, 1]), ZPoly::from_i64(&[1, 0, 3])));
    }

    #[test]
    fn first_coth_derivatives() {
        assert_eq!(coth_derivative(1, 0), RatFun::t().inv().unwrap());
        assert_eq!(
            coth_derivative(1, 1),
            RatFun::new(ZPoly::from_i64(&[-1, 0, 1]), ZPoly::from_i64(&[0, 0, 1]))
        );
    }
}
