//! Coefficients of the operator obtained by linearizing the water-wave system
//! at a Stokes wave:
//!
//! ```text
//! L_ε = [ ∂_x∘(c_h + p_ε)          |D| tanh((h + f_ε)|D|) ]
//!       [ −(1 + a_ε)               (c_h + p_ε)∂_x          ]
//! ```
//!
//! `p_ε`, `a_ε` come from the velocity at the free surface after the change
//! of variable `x ↦ x + 𝔭_ε(x)` that flattens the fluid domain.

use crate::error::Result;
use crate::real::Real;
use crate::exactfield::GradedScalar;
use crate::scalar::{Numeric, ScalarField, Symbolic};
use crate::stokes::{richardson3, LimitReport, ShallowFit, StokesExpansion};
use crate::trigseries::{EpsSeries, Parity};

/// Linearized operator data up to order `N`.
#[derive(Clone, Debug)]
pub struct LinearizationCoeffs<F: ScalarField> {
    fld: F,
    /// `p_ε`, a cosine series with no order zero term.
    pub p: EpsSeries<F::Elem>,
    /// `a_ε`, a cosine series with no order zero term.
    pub a: EpsSeries<F::Elem>,
    /// `f_ℓ`, zero at odd orders.
    pub f: Vec<F::Elem>,
    /// The straightening shift `𝔭_ε`, a sine series.
    pub pgoth: EpsSeries<F::Elem>,
    /// Horizontal surface velocity.
    pub v: EpsSeries<F::Elem>,
    /// Vertical surface velocity.
    pub b: EpsSeries<F::Elem>,
}

/// `V = (ψ_x + c η_x²)/(1 + η_x²)` and `B = (ψ_x − c) η_x/(1 + η_x²)`.
pub fn velocity_field<F: ScalarField>(st: &StokesExpansion<F>) -> Result<(EpsSeries<F::Elem>, EpsSeries<F::Elem>)> {
    let fld = st.field();
    let n = st.order();
    let eta_x = st.eta().dx(fld);
    let psi_x = st.psi().dx(fld);
    let c = st.speed_series();
    let inv = eta_x.mul(&eta_x, n, fld).reciprocal(n, fld)?;
    let v = psi_x.add(&c.mul(&eta_x, n, fld).mul(&eta_x, n, fld)).mul(&inv, n, fld);
    let b = psi_x.sub(&c).mul(&eta_x, n, fld).mul(&inv, n, fld);
    Ok((v, b))
}

/// Order by order solution of
/// `𝔭 = H coth((h + f)|D|)[η(x + 𝔭)]`, `f = mean of η(x + 𝔭)`.
///
/// Term `ℓ` of both only involves `𝔭_{<ℓ}` and `f_{<ℓ}`.
pub fn straightening<F: ScalarField>(st: &StokesExpansion<F>) -> Result<(EpsSeries<F::Elem>, Vec<F::Elem>)> {
    let fld = st.field();
    let n = st.order();
    let mut pg = EpsSeries::zero(n, Parity::Odd, fld);
    let mut f = vec![fld.zero(); n + 1];
    for l in 1..=n {
        let eta = st.eta().resized(l, fld);
        let u = eta.compose(&pg.resized(l, fld), l, fld)?;
        let shift = EpsSeries::constants(&f[..l], fld)?;
        let q = u.hilbert_coth(&shift, l, fld)?;
        pg.set_term(l, q.term(l).clone());
        f[l] = u.term(l).get(0).cloned().unwrap_or_else(|| fld.zero());
    }
    Ok((pg, f))
}

/// `c_h + p = (c − V(x+𝔭))/(1 + 𝔭_x)` and
/// `1 + a = (1 + (V(x+𝔭) − c) B_x(x+𝔭))/(1 + 𝔭_x)`.
pub fn linearization_coeffs<F: ScalarField>(st: &StokesExpansion<F>) -> Result<LinearizationCoeffs<F>> {
    let fld = st.field();
    let n = st.order();
    let (v, b) = velocity_field(st)?;
    let (pg, f) = straightening(st)?;
    let c = st.speed_series();
    let inv = pg.dx(fld).reciprocal(n, fld)?;
    let v_c = v.compose(&pg, n, fld)?;
    let bx_c = b.dx(fld).compose(&pg, n, fld)?;

    let mut p = c.sub(&v_c).mul(&inv, n, fld);
    let p0 = p.term(0).get(0).unwrap().clone() - fld.ch();
    p.term_mut(0).set(0, p0);

    let one = EpsSeries::one(n, fld);
    let mut a = one.add(&v_c.sub(&c).mul(&bx_c, n, fld)).mul(&inv, n, fld);
    let a0 = a.term(0).get(0).unwrap().clone() - fld.int(1);
    a.term_mut(0).set(0, a0);

    Ok(LinearizationCoeffs { fld: fld.clone(), p, a, f, pgoth: pg, v, b })
}

impl<F: ScalarField> LinearizationCoeffs<F> {
    pub fn order(&self) -> usize {
        self.p.order()
    }

    pub fn field(&self) -> &F {
        &self.fld
    }

    /// `p_ℓ^{[ℓ]}`.
    pub fn p_max(&self, l: usize) -> F::Elem {
        self.p.term(l).leading().cloned().unwrap_or_else(|| self.fld.zero())
    }

    /// `a_ℓ^{[ℓ]}`.
    pub fn a_max(&self, l: usize) -> F::Elem {
        self.a.term(l).leading().cloned().unwrap_or_else(|| self.fld.zero())
    }
}

impl LinearizationCoeffs<Symbolic> {
    /// Evaluate every coefficient at depth `h`.
    pub fn at_depth(&self, h: f64, prec: u32) -> Result<LinearizationCoeffs<Numeric>> {
        let fld = Numeric::new(h, prec);
        let (t, ch) = (fld.t(), fld.ch());
        let ev = |s: &GradedScalar| s.eval_at(&t, &ch);
        Ok(LinearizationCoeffs {
            p: self.p.try_map_into(ev)?,
            a: self.a.try_map_into(ev)?,
            f: self.f.iter().map(ev).collect::<Result<_>>()?,
            pgoth: self.pgoth.try_map_into(ev)?,
            v: self.v.try_map_into(ev)?,
            b: self.b.try_map_into(ev)?,
            fld,
        })
    }
}

/// Stokes expansion and linearization at depth `h`, numerically.
pub fn numeric_coeffs(n: usize, h: f64, prec: u32) -> Result<LinearizationCoeffs<Numeric>> {
    linearization_coeffs(&StokesExpansion::numeric(n, h, prec)?)
}

/// Fit `p_ℓ^{[ℓ]} h^{3ℓ−5/2}` and `a_ℓ^{[ℓ]} h^{3ℓ−2}` on three shallow depths
/// against `−2ℓx_ℓ`, `−ℓx_ℓ(11ℓ²−9ℓ+1)/9` and `−ℓx_ℓ`,
/// `−ℓx_ℓ(31ℓ²−9ℓ+2)/18`; the deep entries hold `|p_ℓ^{[ℓ]} − a_ℓ^{[ℓ]}|`
/// at `deep_h`.
pub fn linearization_limits(l_max: usize, depths: [f64; 3], deep_h: f64, prec: u32) -> Result<LimitReport> {
    let runs = depths.iter().map(|&h| numeric_coeffs(l_max, h, prec)).collect::<Result<Vec<_>>>()?;
    let mut shallow = Vec::new();
    for l in 2..=l_max {
        let lf = l as f64;
        let x = (3.0f64 / 8.0).powi(l as i32 - 1);
        let scaled = |k: usize, is_p: bool| {
            let hr = Real::from_f64(depths[k], prec);
            if is_p {
                runs[k].p_max(l) * hr.powf(&Real::from_f64(3.0 * lf - 2.5, prec))
            } else {
                runs[k].a_max(l) * hr.powi(3 * l as i32 - 2)
            }
        };
        let (pa, pb) = richardson3(depths, [scaled(0, true), scaled(1, true), scaled(2, true)]);
        shallow.push(ShallowFit {
            name: "p".into(),
            l,
            lead: pa.to_f64(),
            lead_expected: -2.0 * lf * x,
            next: pb.to_f64(),
            next_expected: -lf * x * (11.0 * lf * lf - 9.0 * lf + 1.0) / 9.0,
        });
        let (aa, ab) = richardson3(depths, [scaled(0, false), scaled(1, false), scaled(2, false)]);
        shallow.push(ShallowFit {
            name: "a".into(),
            l,
            lead: aa.to_f64(),
            lead_expected: -lf * x,
            next: ab.to_f64(),
            next_expected: -lf * x * (31.0 * lf * lf - 9.0 * lf + 2.0) / 18.0,
        });
    }
    let deep_lin = numeric_coeffs(l_max, deep_h, prec)?;
    let deep = (2..=l_max).map(|l| (l, (deep_lin.p_max(l) - deep_lin.a_max(l)).abs().to_f64())).collect();
    Ok(LimitReport { shallow, deep })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::RatFun;

    #[test]
    fn first_order_shift_and_depth() {
        let st = StokesExpansion::exact(3).unwrap();
        let (pg, f) = straightening(&st).unwrap();
        let tinv = GradedScalar::new(0, RatFun::t().inv().unwrap());
        assert_eq!(pg.term(1).get(1), Some(&tinv));
        assert!(f[1].is_zero());
        assert!(f[3].is_zero());
    }

    #[test]
    fn first_order_coefficients() {
        let st = StokesExpansion::exact(2).unwrap();
        let lin = linearization_coeffs(&st).unwrap();
        // p₁ = −V₁ − c_h 𝔭₁' = −2 c_h⁻¹ cos x
        assert_eq!(lin.p_max(1), GradedScalar::ch_inv() * GradedScalar::from_ratio(-2, 1));
        assert_eq!(lin.v.term(1).get(1), Some(&GradedScalar::ch_inv()));
        assert!(lin.p.term(0).is_zero() && lin.a.term(0).is_zero());
    }

    #[test]
    fn deep_velocity_matches_profile() {
        let st = StokesExpansion::exact(4).unwrap();
        let (v, b) = velocity_field(&st).unwrap();
        for l in 2..=4 {
            let e = st.eta_max(l).eval_deep();
            assert_eq!(v.term(l).leading().unwrap().eval_deep(), e);
            assert_eq!(b.term(l).leading().unwrap().eval_deep(), e);
        }
    }
}
