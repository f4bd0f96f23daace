//! Shallow and deep water behaviour of the maximal Stokes coefficients.

use super::StokesExpansion;
use crate::error::Result;
use crate::real::Real;

/// Leading and subleading constants of `g(h) = A + B h² + C h⁴ + …`
/// recovered from three samples, against their predicted values.
#[derive(Clone, Debug, PartialEq)]
pub struct ShallowFit {
    pub name: String,
    pub l: usize,
    pub lead: f64,
    pub lead_expected: f64,
    pub next: f64,
    pub next_expected: f64,
}

impl ShallowFit {
    pub fn lead_rel_err(&self) -> f64 {
        ((self.lead - self.lead_expected) / self.lead_expected).abs()
    }

    pub fn next_rel_err(&self) -> f64 {
        ((self.next - self.next_expected) / self.next_expected).abs()
    }
}

/// Per-order shallow fits and deep-water gaps.
#[derive(Clone, Debug)]
pub struct LimitReport {
    pub shallow: Vec<ShallowFit>,
    /// `(ℓ, |η_ℓ^{[ℓ]} − ψ_ℓ^{[ℓ]}|)` at the deep sample depth.
    pub deep: Vec<(usize, f64)>,
}

/// Solve `A + B hᵢ² + C hᵢ⁴ = gᵢ` for three depths, returning `(A, B)`.
pub fn richardson3(h: [f64; 3], g: [Real; 3]) -> (Real, Real) {
    let prec = g[0].prec();
    let x: Vec<Real> = h.iter().map(|&v| Real::from_f64(v, prec).square()).collect();
    // Newton divided differences in x = h²
    let d01 = (g[1].clone() - &g[0]) / (x[1].clone() - &x[0]);
    let d12 = (g[2].clone() - &g[1]) / (x[2].clone() - &x[1]);
    let d012 = (d12.clone() - &d01) / (x[2].clone() - &x[0]);
    // g(x) = g0 + d01 (x − x0) + d012 (x − x0)(x − x1)
    let a = g[0].clone() - d01.clone() * &x[0] + d012.clone() * &x[0] * &x[1];
    let b = d01 - d012 * (x[0].clone() + &x[1]);
    (a, b)
}

/// Fit `η_ℓ^{[ℓ]} h^{3ℓ−3}` and `ψ_ℓ^{[ℓ]} h^{3ℓ−5/2}` on the given depths and
/// compare with `ℓx_ℓ, z_ℓ` and `x_ℓ, y_ℓ`, `x_ℓ = (3/8)^{ℓ−1}`; also report
/// `|η_ℓ^{[ℓ]} − ψ_ℓ^{[ℓ]}|` at `deep_h`.
pub fn verify_stokes_limits(l_max: usize, depths: [f64; 3], deep_h: f64, prec: u32) -> Result<LimitReport> {
    let shallow_runs = depths
        .iter()
        .map(|&h| StokesExpansion::numeric(l_max, h, prec))
        .collect::<Result<Vec<_>>>()?;
    let mut shallow = Vec::new();
    for l in 2..=l_max {
        let lf = l as f64;
        let x = (3.0f64 / 8.0).powi(l as i32 - 1);
        let scaled = |k: usize, psi: bool| {
            let st = &shallow_runs[k];
            let hr = Real::from_f64(depths[k], prec);
            if psi {
                st.psi_max(l) * hr.powf(&Real::from_f64(3.0 * lf - 2.5, prec))
            } else {
                st.eta_max(l) * hr.powi(3 * l as i32 - 3)
            }
        };
        let (ea, eb) = richardson3(depths, [scaled(0, false), scaled(1, false), scaled(2, false)]);
        shallow.push(ShallowFit {
            name: "eta".into(),
            l,
            lead: ea.to_f64(),
            lead_expected: lf * x,
            next: eb.to_f64(),
            next_expected: lf * (lf - 1.0) * (lf + 2.0) / 6.0 * x,
        });
        let (pa, pb) = richardson3(depths, [scaled(0, true), scaled(1, true), scaled(2, true)]);
        shallow.push(ShallowFit {
            name: "psi".into(),
            l,
            lead: pa.to_f64(),
            lead_expected: x,
            next: pb.to_f64(),
            next_expected: (5.0 * lf * lf + 3.0 * lf - 5.0) / 18.0 * x,
        });
    }
    let deep_st = StokesExpansion::numeric(l_max, deep_h, prec)?;
    let deep = (2..=l_max)
        .map(|l| (l, (deep_st.eta_max(l) - deep_st.psi_max(l)).abs().to_f64()))
        .collect();
    Ok(LimitReport { shallow, deep })
}
