//! Linear dispersion relation and the collisions of opposite Krein signature
//! that seed the high-frequency isolas.
//!
//! `ω^σ(φ, h) = c_h φ − σ Ω(φ, h)` with `Ω = √(φ tanh(hφ))`. For `p ≥ 2` the
//! branches `ω^−(φ)` and `ω^+(φ + p)` meet at a single `φ = φ(p, h) > 0`.

use crate::error::{Error, Result};
use crate::real::Real;

/// Distance to an integer below which `φ(p, h)` is treated as degenerate.
pub const EXCLUSION_TOL: f64 = 1e-8;

/// Minimum separation of non-colliding frequencies from `ω*`.
pub const RESONANCE_TOL: f64 = 1e-10;

/// Krein signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

/// `Ω(φ, h) = √(φ tanh(hφ))`, defined for every real `φ`.
pub fn omega_cap(phi: &Real, h: &Real) -> Real {
    (phi.clone() * (h.clone() * phi).tanh()).sqrt()
}

/// `ω^σ(φ, h)`.
pub fn dispersion(phi: &Real, h: &Real, sigma: Sign) -> Real {
    let ch = h.tanh().sqrt();
    let om = omega_cap(phi, h);
    match sigma {
        Sign::Plus => ch * phi - om,
        Sign::Minus => ch * phi + om,
    }
}

/// `∂_φ Ω(φ, h)` for `φ > 0`.
pub fn d_omega(phi: &Real, h: &Real) -> Real {
    let hp = h.clone() * phi;
    let th = hp.tanh();
    let num = th.clone() + hp * (th.one_like() - th.square());
    num / (omega_cap(phi, h) * Real::from_i64(2, phi.prec()))
}

/// `F_p(φ) = Ω(φ) + Ω(φ + p) − c_h p`, zero exactly at a collision.
pub fn collision_fn(p: u32, phi: &Real, h: &Real) -> Real {
    let ch = h.tanh().sqrt();
    let pr = phi.int_like(p as i64);
    omega_cap(phi, h) + omega_cap(&(phi.clone() + &pr), h) - ch * pr
}

fn collision_fn_deriv(p: u32, phi: &Real, h: &Real) -> Real {
    d_omega(phi, h) + d_omega(&(phi.clone() + phi.int_like(p as i64)), h)
}

/// A collision root with its degeneracy flag.
#[derive(Clone, Debug)]
pub struct PhiRoot {
    pub p: u32,
    pub phi: Real,
    /// `φ` lies within [`EXCLUSION_TOL`] of an integer.
    pub excluded: bool,
}

/// Solve `F_p(φ, h) = 0`.
///
/// The bracket is `(0, 1)` for `p = 2` and `(φ(p−1, h), (p−1)²/4]` for
/// `p ≥ 3`. Bisection runs to double accuracy, then safeguarded Newton steps
/// bring the root to the working precision.
pub fn solve_phi(p: u32, h: f64, prec: u32) -> Result<PhiRoot> {
    if p < 2 {
        return Err(Error::InvalidArgument(format!("collision index must be ≥ 2, got {p}")));
    }
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("depth must be positive, got {h}")));
    }
    let hr = Real::from_f64(h, prec);
    let mut lo = Real::from_i64(0, prec);
    let mut hi = Real::from_i64(1, prec);
    for q in 2..=p {
        let (a, b) = if q == 2 {
            (Real::from_i64(0, prec), Real::from_i64(1, prec))
        } else {
            let upper = Real::ratio(((q - 1) * (q - 1)) as i64, 4, prec);
            (lo.clone(), upper)
        };
        let root = bracketed_root(q, &a, &b, &hr)?;
        lo = root.clone();
        hi = root;
    }
    let phi = hi;
    let f = phi.to_f64();
    let excluded = (f - f.round()).abs() < EXCLUSION_TOL;
    Ok(PhiRoot { p, phi, excluded })
}

fn bracketed_root(p: u32, a: &Real, b: &Real, h: &Real) -> Result<Real> {
    let prec = a.prec();
    let fa = collision_fn(p, a, h);
    let fb = collision_fn(p, b, h);
    // F_p(0) may vanish to rounding only when p = 2 and h is tiny; the sign
    // pattern is F(a) < 0 < F(b).
    if fa.signum_i() > 0 || fb.signum_i() < 0 {
        return Err(Error::Bracket(format!(
            "p = {p}: F({:.6}) = {:.3e}, F({:.6}) = {:.3e}",
            a.to_f64(),
            fa.to_f64(),
            b.to_f64(),
            fb.to_f64()
        )));
    }
    let (mut lo, mut hi) = (a.clone(), b.clone());
    let half = Real::ratio(1, 2, prec);
    for _ in 0..60 {
        let mid = (lo.clone() + &hi) * &half;
        if collision_fn(p, &mid, h).signum_i() < 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = (lo.clone() + &hi) * &half;
    let tol = Real::from_i64(2, prec).powi(-(prec as i32) + 8) * x.abs().max(x.one_like());
    for _ in 0..40 {
        let fx = collision_fn(p, &x, h);
        if fx.is_zero() {
            break;
        }
        if fx.signum_i() < 0 {
            lo = x.clone();
        } else {
            hi = x.clone();
        }
        let step = fx / collision_fn_deriv(p, &x, h);
        let mut next = x.clone() - &step;
        if next <= lo || next >= hi {
            next = (lo.clone() + &hi) * &half;
        }
        let done = (next.clone() - &x).abs() <= tol;
        x = next;
        if done {
            break;
        }
    }
    Ok(x)
}

/// Frequencies and weights around the `p`-th collision.
#[derive(Clone, Debug)]
pub struct CollisionData {
    pub p: u32,
    pub h: Real,
    pub ch: Real,
    pub phi: Real,
    pub omega_star: Real,
    /// `Ω_j = Ω(j + φ, h)`, `j = 0…p`.
    pub omega: Vec<Real>,
    /// `t_j = √((j + φ)/tanh(h(j + φ)))`.
    pub t: Vec<Real>,
    pub omega_plus: Vec<Real>,
    pub omega_minus: Vec<Real>,
}

impl CollisionData {
    /// `ω_j^σ`.
    pub fn omega_sigma(&self, j: usize, s: Sign) -> &Real {
        match s {
            Sign::Plus => &self.omega_plus[j],
            Sign::Minus => &self.omega_minus[j],
        }
    }

    /// `α₁ = −c_h + ∂_φΩ(φ + p)`.
    pub fn alpha1(&self) -> Real {
        -self.ch.clone() + d_omega(&(self.phi.clone() + self.phi.int_like(self.p as i64)), &self.h)
    }

    /// `γ₁ = c_h + ∂_φΩ(φ)`.
    pub fn gamma1(&self) -> Real {
        self.ch.clone() + d_omega(&self.phi, &self.h)
    }

    /// Trace slope `T₁ = α₁ + γ₁`.
    pub fn trace1(&self) -> Real {
        self.alpha1() + self.gamma1()
    }

    /// Aspect ratio `E = (γ₁ − α₁)/(γ₁ + α₁)`.
    pub fn aspect(&self) -> Real {
        (self.gamma1() - self.alpha1()) / self.trace1()
    }
}

/// Fill [`CollisionData`] at a non-excluded depth.
pub fn collision_tables(p: u32, h: f64, prec: u32) -> Result<CollisionData> {
    let root = solve_phi(p, h, prec)?;
    if root.excluded {
        return Err(Error::ExcludedDepth { h, reason: format!("φ({p}, h) = {} is an integer", root.phi.to_decimal(20)) });
    }
    tables_from_root(p, h, root.phi)
}

/// Fill [`CollisionData`] without the exclusion test, for continuation
/// arguments that stay away from the degenerate depth themselves.
pub fn tables_from_root(p: u32, h: f64, phi: Real) -> Result<CollisionData> {
    let prec = phi.prec();
    let hr = Real::from_f64(h, prec);
    let ch = hr.tanh().sqrt();
    let omega_star = ch.clone() * &phi + omega_cap(&phi, &hr);
    let mut omega = Vec::new();
    let mut t = Vec::new();
    let mut omega_plus = Vec::new();
    let mut omega_minus = Vec::new();
    for j in 0..=p as i64 {
        let x = phi.clone() + phi.int_like(j);
        let om = omega_cap(&x, &hr);
        t.push(x.clone() / &om);
        omega_plus.push(ch.clone() * &x - &om);
        omega_minus.push(ch.clone() * &x + &om);
        omega.push(om);
    }
    let cd = CollisionData { p, h: hr, ch, phi, omega_star, omega, t, omega_plus, omega_minus };
    for j in 0..=p as usize {
        for s in Sign::BOTH {
            if (j == 0 && s == Sign::Minus) || (j == p as usize && s == Sign::Plus) {
                continue;
            }
            let gap = (cd.omega_sigma(j, s).clone() - &cd.omega_star).abs().to_f64();
            if gap < RESONANCE_TOL {
                return Err(Error::ExcludedDepth { h, reason: format!("ω_{j}^{s:?} resonates with ω*") });
            }
        }
    }
    Ok(cd)
}

/// Smallest depth in `[lo, hi]` where `φ(2, h)` crosses `¼`, if it does.
pub fn quarter_crossover(lo: f64, hi: f64, prec: u32) -> Result<Option<f64>> {
    let g = |h: f64| -> Result<f64> { Ok(solve_phi(2, h, prec)?.phi.to_f64() - 0.25) };
    let n = 200;
    let mut a = lo;
    let mut ga = g(a)?;
    for i in 1..=n {
        let b = lo + (hi - lo) * i as f64 / n as f64;
        let gb = g(b)?;
        if ga.signum() != gb.signum() {
            let (mut x0, mut x1) = (a, b);
            for _ in 0..60 {
                let m = 0.5 * (x0 + x1);
                if g(m)?.signum() == ga.signum() {
                    x0 = m;
                } else {
                    x1 = m;
                }
            }
            return Ok(Some(0.5 * (x0 + x1)));
        }
        a = b;
        ga = gb;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Real {
        Real::from_f64(x, 256)
    }

    #[test]
    fn dispersion_identities() {
        let h = r(1.3);
        assert!(dispersion(&r(0.0), &h, Sign::Plus).is_zero());
        let a = dispersion(&r(0.7), &h, Sign::Minus);
        let b = dispersion(&r(-0.7), &h, Sign::Plus);
        assert!((a + b).abs().to_f64() < 1e-70);
        assert!((omega_cap(&r(1.0), &h) - h.tanh().sqrt()).abs().to_f64() < 1e-70);
    }

    #[test]
    fn collision_is_a_root_and_tables_are_consistent() {
        for p in 2..=5 {
            let cd = collision_tables(p, 1.0, 256).unwrap();
            assert!(collision_fn(p, &cd.phi, &cd.h).abs().to_f64() < 1e-60);
            assert!((cd.omega_minus[0].clone() - &cd.omega_star).abs().to_f64() < 1e-60);
            assert!((cd.omega_plus[p as usize].clone() - &cd.omega_star).abs().to_f64() < 1e-60);
            for j in 0..=p as usize {
                let x = cd.phi.clone() + cd.phi.int_like(j as i64);
                assert!((cd.omega[j].clone() * &cd.t[j] - &x).abs().to_f64() < 1e-60);
            }
        }
    }

    #[test]
    fn deep_collision_frequency() {
        // odd p collide at an integer φ in the deep limit
        for p in [2u32, 4, 6] {
            let cd = collision_tables(p, 40.0, 256).unwrap();
            let lim = (p * p - 1) as f64 / 4.0;
            assert!((cd.omega_star.to_f64() - lim).abs() < 1e-6);
        }
    }
}
