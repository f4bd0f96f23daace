//! Parity graded trigonometric polynomials and truncated `ε`-series of them.
//!
//! A term of order `ℓ` only carries harmonics `κ ≤ ℓ` of the parity of `ℓ`.
//! Every operation here (products, Fourier multipliers, composition with a
//! near-identity shift, geometric reciprocals) preserves that structure.

mod poly;
mod series;

pub use poly::{first_harmonic, mul_poly, Parity, TrigPoly};
pub use series::EpsSeries;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{GradedScalar, RatFun, ZPoly};
    use crate::scalar::{ScalarField, Symbolic};

    fn q(n: i64, d: i64) -> GradedScalar {
        GradedScalar::from_ratio(n, d)
    }

    fn single(parity: Parity, order: usize, kappa: usize, c: GradedScalar, n: usize) -> EpsSeries<GradedScalar> {
        let fld = Symbolic::new();
        let mut s = EpsSeries::zero(n, parity, &fld);
        s.term_mut(order).set(kappa, c);
        s
    }

    #[test]
    fn cos_times_cos() {
        let fld = Symbolic::new();
        let c = single(Parity::Evn, 1, 1, q(1, 1), 2);
        let p = c.mul(&c, 2, &fld);
        assert_eq!(p.term(2).coeffs(), &[q(1, 2), q(1, 2)]);
    }

    #[test]
    fn sin_times_sin_has_negative_leading_half() {
        let fld = Symbolic::new();
        let s = single(Parity::Odd, 1, 1, q(1, 1), 2);
        let p = s.mul(&s, 2, &fld);
        assert_eq!(p.parity(), Parity::Evn);
        assert_eq!(p.term(2).coeffs(), &[q(1, 2), q(-1, 2)]);
    }

    #[test]
    fn cos_times_sin() {
        let fld = Symbolic::new();
        let c = single(Parity::Evn, 1, 1, q(1, 1), 2);
        let s = single(Parity::Odd, 1, 1, q(1, 1), 2);
        let p = c.mul(&s, 2, &fld);
        assert_eq!(p.parity(), Parity::Odd);
        assert_eq!(p.term(2).get(2), Some(&q(1, 2)));
    }

    #[test]
    fn multipliers() {
        let fld = Symbolic::new();
        let c = single(Parity::Evn, 1, 1, q(1, 1), 1);
        assert_eq!(c.dx(&fld).term(1).get(1), Some(&q(-1, 1)));

        let s2 = single(Parity::Odd, 2, 2, q(1, 1), 2);
        let g = s2.g0(&fld);
        let expect = RatFun::new(ZPoly::from_i64(&[0, 4]), ZPoly::from_i64(&[1, 0, 1]));
        assert_eq!(g.term(2).get(2).unwrap().rat(), &expect);

        let one = EpsSeries::one(2, &fld);
        assert!(one.hilbert(&fld).terms().iter().all(TrigPoly::is_zero));
    }

    #[test]
    fn composition_matches_taylor() {
        // f = ε cos x, g = ε t⁻¹ sin x: [f(x+g)]₂ = −t⁻¹ sin²x
        let fld = Symbolic::new();
        let tinv = GradedScalar::new(0, RatFun::t().inv().unwrap());
        let f = single(Parity::Evn, 1, 1, q(1, 1), 3);
        let g = single(Parity::Odd, 1, 1, tinv.clone(), 3);
        let fg = f.compose(&g, 3, &fld).unwrap();
        let half = fld.ratio(1, 2);
        assert_eq!(fg.term(2).get(0), Some(&(-(tinv.clone() * &half))));
        assert_eq!(fg.term(2).get(2), Some(&(tinv * &half)));
        let zero = EpsSeries::zero(3, Parity::Odd, &fld);
        assert_eq!(f.compose(&zero, 3, &fld).unwrap(), f);
    }

    #[test]
    fn reciprocal_of_cosine() {
        let fld = Symbolic::new();
        let f = single(Parity::Evn, 1, 1, q(1, 1), 4);
        let r = f.reciprocal(4, &fld).unwrap();
        assert_eq!(r.term(1).get(1), Some(&q(-1, 1)));
        assert_eq!(r.term(2).coeffs(), &[q(1, 2), q(1, 2)]);
        let back = EpsSeries::one(4, &fld).add(&f).mul(&r, 4, &fld);
        assert_eq!(back, EpsSeries::one(4, &fld));
    }
}
