//! The travelling wave system evaluated on truncated series.

use super::StokesExpansion;
use crate::error::Result;
use crate::real::Real;
use crate::scalar::{Numeric, ScalarField};
use crate::trigseries::EpsSeries;

/// Residuals `(R₁, R₂)` of the travelling system, truncated at `n`.
///
/// `R₁ = c η_x + G(η)ψ` is a sine series and
/// `R₂ = c ψ_x − η − ψ_x²/2 + (G(η)ψ + η_x ψ_x)² / (2(1+η_x²))` a cosine series.
pub fn traveling_residual<F: ScalarField>(
    eta: &EpsSeries<F::Elem>,
    psi: &EpsSeries<F::Elem>,
    c: &EpsSeries<F::Elem>,
    n: usize,
    fld: &F,
) -> Result<(EpsSeries<F::Elem>, EpsSeries<F::Elem>)> {
    let eta = eta.resized(n, fld);
    let psi = psi.resized(n, fld);
    let c = c.resized(n, fld);
    let eta_x = eta.dx(fld);
    let psi_x = psi.dx(fld);
    let gpsi = super::dn_full(&eta, &psi, n, fld);
    let r1 = c.mul(&eta_x, n, fld).add(&gpsi);

    let half = fld.ratio(1, 2);
    let num = gpsi.add(&eta_x.mul(&psi_x, n, fld));
    let inv = eta_x.mul(&eta_x, n, fld).reciprocal(n, fld)?;
    let r2 = c
        .mul(&psi_x, n, fld)
        .sub(&eta)
        .sub(&psi_x.mul(&psi_x, n, fld).scale(&half))
        .add(&num.mul(&num, n, fld).mul(&inv, n, fld).scale(&half));
    Ok((r1, r2))
}

/// Sup-norm over an `m`-point grid of `|R₁| + |R₂|` at amplitude `eps`.
///
/// The residual series is carried `extra` orders past the expansion so the
/// first neglected orders are represented.
pub fn sup_residual(st: &StokesExpansion<Numeric>, eps: f64, extra: usize, m: usize) -> Result<f64> {
    let fld = st.field();
    let n = st.order() + extra;
    let (r1, r2) = traveling_residual(st.eta(), st.psi(), &st.speed_series(), n, fld)?;
    let prec = fld.prec();
    let e = Real::from_f64(eps, prec);
    let two_pi = Real::pi(prec) * Real::from_i64(2, prec);
    let mut sup = 0.0f64;
    for i in 0..m {
        let x = two_pi.clone() * Real::ratio(i as i64, m as i64, prec);
        let v = r1.eval(&e, &x).abs() + r2.eval(&e, &x).abs();
        sup = sup.max(v.to_f64());
    }
    Ok(sup)
}
