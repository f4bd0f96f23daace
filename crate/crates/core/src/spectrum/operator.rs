//! Truncated Bloch–Floquet operator in the basis `e^{ijx}`, `|j| ≤ M`.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linearization::LinearizationCoeffs;
use crate::scalar::{Numeric, ScalarField};

/// Fourier data of `c_h + p_ε`, `a_ε` and `f_ε` summed to order `K` at a
/// fixed `ε`.
#[derive(Clone, Debug)]
pub struct OperatorSymbols {
    pub h: f64,
    pub eps: f64,
    pub order: usize,
    /// `P̂_n` for `n ≥ 0`; `P̂_{−n} = P̂_n`.
    pub p_hat: Vec<f64>,
    /// `Â_n` for `n ≥ 0`.
    pub a_hat: Vec<f64>,
    pub f: f64,
}

impl OperatorSymbols {
    pub fn new(lin: &LinearizationCoeffs<Numeric>, eps: f64, order: usize) -> Result<Self> {
        if order > lin.order() {
            return Err(Error::MissingOrder { needed: order, available: lin.order() });
        }
        let fld = lin.field();
        let prec = fld.prec();
        let e = crate::Real::from_f64(eps, prec);
        let mut p_hat = vec![crate::Real::from_i64(0, prec); order + 1];
        let mut a_hat = p_hat.clone();
        let mut f = crate::Real::from_i64(0, prec);
        let mut ep = e.one_like();
        for l in 1..=order {
            ep = ep * &e;
            for n in 0..=l {
                let half = if n == 0 { e.one_like() } else { e.ratio_like(1, 2) };
                if let Some(c) = lin.p.term(l).get(n) {
                    p_hat[n] = p_hat[n].clone() + c.clone() * &ep * &half;
                }
                if let Some(c) = lin.a.term(l).get(n) {
                    a_hat[n] = a_hat[n].clone() + c.clone() * &ep * &half;
                }
            }
            f = f + lin.f[l].clone() * &ep;
        }
        p_hat[0] = p_hat[0].clone() + fld.ch();
        Ok(OperatorSymbols {
            h: fld.h().to_f64(),
            eps,
            order,
            p_hat: p_hat.iter().map(|x| x.to_f64()).collect(),
            a_hat: a_hat.iter().map(|x| x.to_f64()).collect(),
            f: f.to_f64(),
        })
    }

    fn p(&self, n: i64) -> f64 {
        self.p_hat.get(n.unsigned_abs() as usize).copied().unwrap_or(0.0)
    }

    fn a(&self, n: i64) -> f64 {
        self.a_hat.get(n.unsigned_abs() as usize).copied().unwrap_or(0.0)
    }
}

/// `L_{μ,ε}` truncated to modes `−M…M`, dimension `2(2M+1)`.
#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    pub h: f64,
    pub mu: f64,
    pub eps: f64,
    pub modes: usize,
    pub order: usize,
    pub matrix: DMatrix<Complex64>,
}

/// Assemble
/// `[(∂x+iμ)∘(c_h+p)   |D+μ| tanh((h+f)|D+μ|)]`
/// `[−(1+a)            (c_h+p)(∂x+iμ)        ]`.
pub fn build_truncated(sym: &OperatorSymbols, mu: f64, modes: usize) -> TruncatedOperator {
    let n = 2 * modes + 1;
    let m = modes as i64;
    let i = Complex64::i();
    let mut mat = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
    for r in 0..n {
        let j = r as i64 - m;
        let kj = j as f64 + mu;
        for c in 0..n {
            let k = c as i64 - m;
            let d = j - k;
            let p = sym.p(d);
            if p != 0.0 {
                mat[(r, c)] = i * kj * p;
                mat[(n + r, n + c)] = i * (k as f64 + mu) * p;
            }
            let a = sym.a(d) + if d == 0 { 1.0 } else { 0.0 };
            if a != 0.0 {
                mat[(n + r, c)] = Complex64::new(-a, 0.0);
            }
        }
        let ak = kj.abs();
        mat[(r, n + r)] = Complex64::new(ak * ((sym.h + sym.f) * ak).tanh(), 0.0);
    }
    TruncatedOperator { h: sym.h, mu, eps: sym.eps, modes, order: sym.order, matrix: mat }
}

/// Eigensolver convergence tolerance.
pub const EIG_TOL: f64 = 1e-15;

const MAX_SWEEPS: usize = 10_000;

/// All eigenvalues of a dense complex matrix.
pub fn eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidArgument("matrix must be square".into()));
    }
    for eps in [EIG_TOL, 1e3 * EIG_TOL] {
        if let Some(s) = Schur::try_new(m.clone(), eps, MAX_SWEEPS) {
            if let Some(ev) = s.eigenvalues() {
                return Ok(ev.iter().copied().collect());
            }
        }
    }
    Err(Error::NoConvergence)
}

impl TruncatedOperator {
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        eigenvalues(&self.matrix)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collision::{dispersion, Sign};
    use crate::linearization::numeric_coeffs;
    use crate::Real;

    #[test]
    fn small_matrices() {
        let id = DMatrix::<Complex64>::identity(4, 4);
        assert!(eigenvalues(&id).unwrap().iter().all(|z| (z - 1.0).norm() < 1e-14));
        let mut jb = DMatrix::<Complex64>::zeros(2, 2);
        jb[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(eigenvalues(&jb).unwrap().iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn flat_operator_gives_dispersion() {
        let lin = numeric_coeffs(2, 1.3, 128).unwrap();
        let sym = OperatorSymbols::new(&lin, 0.0, 2).unwrap();
        let mu = 0.27;
        let op = build_truncated(&sym, mu, 6);
        let mut ev: Vec<f64> = op.eigenvalues().unwrap().iter().map(|z| {
            assert!(z.re.abs() < 1e-12);
            z.im
        }).collect();
        let h = Real::from_f64(1.3, 128);
        let mut want = Vec::new();
        for j in -6i64..=6 {
            for s in Sign::BOTH {
                want.push(dispersion(&Real::from_f64(j as f64 + mu, 128), &h, s).to_f64());
            }
        }
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in ev.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }
}
