//! Taylor–Fourier expansion of the finite-depth Stokes wave.
//!
//! The wave `η = Σ ε^ℓ η_ℓ(x)`, `ψ = Σ ε^ℓ ψ_ℓ(x)` travelling at speed
//! `c = Σ ε^ℓ c_ℓ` solves
//! `c η_x + G(η)ψ = 0`,
//! `c ψ_x − η − ψ_x²/2 + (G(η)ψ + η_x ψ_x)² / (2(1+η_x²)) = 0`,
//! normalised by `η₁ = cos x` and by the first harmonic of `η_ℓ` being tied to
//! that of `ψ_ℓ` (see [`StokesExpansion::compute`]).

mod dn;
mod limits;
mod residual;

pub use dn::{dn_apply, dn_full, dn_jets};
pub use limits::{richardson3, verify_stokes_limits, LimitReport, ShallowFit};
pub use residual::{sup_residual, traveling_residual};

use crate::error::{Error, Result};
use crate::exactfield::GradedScalar;
use crate::scalar::{Numeric, ScalarField, Symbolic};
use crate::trigseries::{EpsSeries, Parity};

/// Stokes wave coefficients up to order `N`.
#[derive(Clone, Debug)]
pub struct StokesExpansion<F: ScalarField> {
    fld: F,
    eta: EpsSeries<F::Elem>,
    psi: EpsSeries<F::Elem>,
    c: Vec<F::Elem>,
}

impl StokesExpansion<Symbolic> {
    /// Exact expansion with coefficients in `Q(c_h²)`.
    pub fn exact(n: usize) -> Result<Self> {
        Self::compute(n, Symbolic::new())
    }

    /// Evaluate every coefficient at depth `h`.
    pub fn at_depth(&self, h: f64, prec: u32) -> Result<StokesExpansion<Numeric>> {
        let fld = Numeric::new(h, prec);
        let (t, ch) = (fld.t(), fld.ch());
        let ev = |s: &GradedScalar| s.eval_at(&t, &ch);
        Ok(StokesExpansion {
            eta: self.eta.try_map_into(ev)?,
            psi: self.psi.try_map_into(ev)?,
            c: self.c.iter().map(ev).collect::<Result<_>>()?,
            fld,
        })
    }
}

impl StokesExpansion<Numeric> {
    /// Numeric expansion at depth `h` with `prec` bits.
    pub fn numeric(n: usize, h: f64, prec: u32) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidArgument(format!("depth must be positive, got {h}")));
        }
        if prec < 53 {
            return Err(Error::InvalidArgument(format!("precision must be at least 53 bits, got {prec}")));
        }
        Self::compute(n, Numeric::new(h, prec))
    }
}

impl<F: ScalarField> StokesExpansion<F> {
    /// Run the order by order recursion up to `n`.
    ///
    /// At order `ℓ` the residual of the lower orders gives a cosine part `F`
    /// and a sine part `G`. The speed correction `c_{ℓ−1} = −½(c_h F^{[1]} +
    /// G^{[1]})` makes the first harmonic solvable, and its kernel direction
    /// is fixed by taking the particular solution orthogonal to the kernel.
    /// Harmonics `j ≥ 2` solve a 2×2 system with determinant
    /// `j tanh(jh) − j² tanh h`, which is positive for `h > 0`.
    pub fn compute(n: usize, fld: F) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("order must be at least 1".into()));
        }
        let mut eta = EpsSeries::zero(n, Parity::Evn, &fld);
        let mut psi = EpsSeries::zero(n, Parity::Odd, &fld);
        let mut c = vec![fld.zero(); n + 1];
        c[0] = fld.ch();
        eta.term_mut(1).set(1, fld.int(1));
        psi.term_mut(1).set(1, fld.ch_inv());

        let ch = fld.ch();
        let t = fld.t();
        for l in 2..=n {
            let et = eta.resized(l, &fld);
            let ps = psi.resized(l, &fld);
            let cs = EpsSeries::constants(&c[..=l], &fld)?;
            let (r1, r2) = traveling_residual(&et, &ps, &cs, l, &fld)?;
            let f_l = r2.term(l);
            let g_l = r1.term(l).neg();
            let fj = |k: usize| f_l.get(k).cloned().unwrap_or_else(|| fld.zero());
            let gj = |k: usize| g_l.get(k).cloned().unwrap_or_else(|| fld.zero());

            let mut et_l = eta.term(l).clone();
            let mut ps_l = psi.term(l).clone();
            if l % 2 == 1 {
                let (f1, g1) = (fj(1), gj(1));
                let cl = (ch.clone() * &f1 + g1) * fld.ratio(-1, 2);
                let a = f1 + cl.clone() * fld.ch_inv();
                let one_t = fld.int(1) + t.clone();
                fld.check_denominator(&one_t, "first harmonic")?;
                et_l.set(1, a.clone() / one_t.clone());
                ps_l.set(1, -(ch.clone() * a) / one_t);
                c[l - 1] = cl;
            } else {
                et_l.set(0, fj(0));
            }
            for k in (2..=l).filter(|k| k % 2 == l % 2) {
                let kk = fld.int(k as i64);
                let tk = fld.tanh_mult(k);
                let det = kk.clone() * tk.clone() - kk.clone() * kk.clone() * t.clone();
                fld.check_denominator(&det, &format!("harmonic {k} at order {l}"))?;
                let (fk, gk) = (fj(k), gj(k));
                let e = (kk.clone() * tk * fk.clone() + ch.clone() * kk.clone() * gk.clone()) / det.clone();
                let p = (ch.clone() * kk * fk + gk) / det;
                et_l.set(k, e);
                ps_l.set(k, p);
            }
            eta.set_term(l, et_l);
            psi.set_term(l, ps_l);
        }
        Ok(StokesExpansion { fld, eta, psi, c })
    }

    pub fn order(&self) -> usize {
        self.eta.order()
    }

    pub fn field(&self) -> &F {
        &self.fld
    }

    pub fn eta(&self) -> &EpsSeries<F::Elem> {
        &self.eta
    }

    pub fn psi(&self) -> &EpsSeries<F::Elem> {
        &self.psi
    }

    /// Speed coefficients `c_0 … c_N`; `c_N` is left at zero since it is
    /// only fixed at order `N + 1`.
    pub fn speed(&self) -> &[F::Elem] {
        &self.c
    }

    /// The speed as a constant series.
    pub fn speed_series(&self) -> EpsSeries<F::Elem> {
        EpsSeries::constants(&self.c, &self.fld).expect("odd speed coefficients vanish")
    }

    /// `η_ℓ^{[ℓ]}`.
    pub fn eta_max(&self, l: usize) -> F::Elem {
        self.eta.term(l).leading().cloned().unwrap_or_else(|| self.fld.zero())
    }

    /// `ψ_ℓ^{[ℓ]}`.
    pub fn psi_max(&self, l: usize) -> F::Elem {
        self.psi.term(l).leading().cloned().unwrap_or_else(|| self.fld.zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{RatFun, ZPoly};
    use num_rational::BigRational;

    #[test]
    fn first_order_is_linear_wave() {
        let st = StokesExpansion::exact(1).unwrap();
        assert_eq!(st.eta_max(1), GradedScalar::one());
        assert_eq!(st.psi_max(1), GradedScalar::ch_inv());
        assert_eq!(st.speed()[0], GradedScalar::ch());
    }

    #[test]
    fn second_order_matches_classical_coefficient() {
        let st = StokesExpansion::exact(3).unwrap();
        // (3 − t²) / (4 t³)
        let expect = RatFun::new(ZPoly::from_i64(&[3, 0, -1]), ZPoly::from_i64(&[0, 0, 0, 4]));
        assert_eq!(st.eta_max(2).rat(), &expect);
        assert_eq!(st.eta_max(2).eval_deep(), Some(BigRational::new(1.into(), 2.into())));
        assert!(st.speed()[1].is_zero());
        assert_eq!(st.speed()[2].eval_deep(), Some(BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn exact_and_numeric_agree() {
        let st = StokesExpansion::exact(4).unwrap().at_depth(0.8, 256).unwrap();
        let nu = StokesExpansion::numeric(4, 0.8, 256).unwrap();
        for l in 1..=4 {
            for (a, b) in st.eta().term(l).coeffs().iter().zip(nu.eta().term(l).coeffs()) {
                assert!((a.clone() - b).abs().to_f64() < 1e-60);
            }
        }
    }
}
