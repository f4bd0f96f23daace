//! Tracing the `p`-th isola of the truncated operator.

use num_complex::Complex64;
use rayon::prelude::*;

use super::operator::{build_truncated, OperatorSymbols};
use crate::beta1::beta1_eval;
use crate::collision::{collision_tables, dispersion, CollisionData, Sign};
use crate::error::{Error, Result};
use crate::linearization::numeric_coeffs;
use crate::Real;

/// Real parts below this are treated as zero.
pub const RE_TOL: f64 = 1e-9;

/// Working precision for the coefficients fed to the matrix.
const COEFF_PREC: u32 = 128;

/// Inputs of [`trace_isola`].
#[derive(Clone, Debug)]
pub struct IsolaParams {
    pub p: u32,
    pub h: f64,
    pub eps: f64,
    /// Fourier cutoff `M`.
    pub modes: usize,
    /// Order `K` of the coefficient series. `K = p` leaves an `O(1)`
    /// relative error in the isola size; `p + 2` is the default.
    pub order: usize,
    /// Half-width of the initial `μ` search window around `φ(p, h)`;
    /// defaults to `3ε²`.
    pub mu_window: Option<f64>,
    /// Number of `μ` samples inside the unstable interval.
    pub samples: usize,
}

impl IsolaParams {
    pub fn new(p: u32, h: f64, eps: f64) -> Self {
        IsolaParams { p, h, eps, modes: 16, order: p as usize + 2, mu_window: None, samples: 64 }
    }
}

/// One `μ` sample of the tracked pair, `Re λ⁺ ≥ Re λ⁻`.
#[derive(Clone, Copy, Debug)]
pub struct PairSample {
    pub mu: f64,
    pub plus: Complex64,
    pub minus: Complex64,
}

/// Least-squares ellipse `x²/a² + (y − y₀)²/b² = 1`.
#[derive(Clone, Copy, Debug)]
pub struct Ellipse {
    pub semi_x: f64,
    pub semi_y: f64,
    pub center_y: f64,
    /// Root mean square of `x² + E(y − y₀)² − a²`, relative to `a²`.
    pub rms: f64,
}

/// Values predicted from `β₁` and the collision data.
#[derive(Clone, Copy, Debug)]
pub struct IsolaPrediction {
    pub beta1: f64,
    /// `|β₁| ε^p`.
    pub max_re: f64,
    /// `4|β₁|/T₁ · ε^p`.
    pub width: f64,
    /// `E = (γ₁ − α₁)/(γ₁ + α₁)`.
    pub aspect: f64,
    pub omega_star: f64,
    /// `E |β₁| ε^p`, from `x² + (y − y₀)²/E² = β₁² ε^{2p}`.
    pub semi_y: f64,
}

/// The traced isola with its predictions.
#[derive(Clone, Debug)]
pub struct IsolaTrace {
    pub p: u32,
    pub h: f64,
    pub eps: f64,
    pub samples: Vec<PairSample>,
    /// Samples just outside the unstable interval.
    pub outside: Vec<PairSample>,
    pub mu_wedge: f64,
    pub mu_vee: f64,
    /// `μ` where the real part peaks.
    pub mu_center: f64,
    pub max_re: f64,
    pub center_im: f64,
    pub ellipse: Ellipse,
    pub predictions: IsolaPrediction,
}

impl IsolaTrace {
    pub fn width(&self) -> f64 {
        self.mu_vee - self.mu_wedge
    }

    /// `|max Re λ⁺ + min Re λ⁻|` over the samples.
    pub fn symmetry_defect(&self) -> f64 {
        let hi = self.samples.iter().map(|s| s.plus.re).fold(f64::MIN, f64::max);
        let lo = self.samples.iter().map(|s| s.minus.re).fold(f64::MAX, f64::min);
        (hi + lo).abs()
    }

    /// Largest `|λ⁻ + conj(λ⁺)|` over the samples.
    pub fn pairing_defect(&self) -> f64 {
        self.samples.iter().map(|s| (s.minus + s.plus.conj()).norm()).fold(0.0, f64::max)
    }

    /// Largest `|Re λ|` of the pair outside the unstable interval.
    pub fn outside_re(&self) -> f64 {
        self.outside.iter().map(|s| s.plus.re.abs().max(s.minus.re.abs())).fold(0.0, f64::max)
    }
}

/// Evaluates the tracked pair at a given `μ`.
pub struct PairTracker {
    pub sym: OperatorSymbols,
    pub modes: usize,
    pub p: u32,
    h: Real,
}

impl PairTracker {
    pub fn new(p: u32, h: f64, eps: f64, modes: usize, order: usize) -> Result<Self> {
        if modes < 2 * p as usize + 4 {
            return Err(Error::InvalidArgument(format!("need at least {} modes for p = {p}, got {modes}", 2 * p + 4)));
        }
        if order < p as usize {
            return Err(Error::InvalidArgument(format!("order {order} below p = {p}")));
        }
        let lin = numeric_coeffs(order, h, COEFF_PREC)?;
        let sym = OperatorSymbols::new(&lin, eps, order)?;
        Ok(PairTracker { sym, modes, p, h: Real::from_f64(h, COEFF_PREC) })
    }

    /// Midpoint of the unperturbed frequencies `ω^−(μ)` and `ω^+(μ + p)`.
    fn anchor(&self, mu: f64) -> f64 {
        let a = dispersion(&Real::from_f64(mu, COEFF_PREC), &self.h, Sign::Minus);
        let b = dispersion(&Real::from_f64(mu + self.p as f64, COEFF_PREC), &self.h, Sign::Plus);
        0.5 * (a + b).to_f64()
    }

    /// The two eigenvalues closest to the anchor.
    pub fn pair(&self, mu: f64) -> Result<PairSample> {
        let ev = build_truncated(&self.sym, mu, self.modes).eigenvalues()?;
        let target = Complex64::new(0.0, self.anchor(mu));
        let mut ev: Vec<Complex64> = ev;
        ev.sort_by(|a, b| (a - target).norm().partial_cmp(&(b - target).norm()).unwrap());
        let (mut x, mut y) = (ev[0], ev[1]);
        if (x.re, x.im) < (y.re, y.im) {
            std::mem::swap(&mut x, &mut y);
        }
        Ok(PairSample { mu, plus: x, minus: y })
    }

    /// Negative real gap inside the isola, positive imaginary gap outside.
    /// Monotone on each side of the isola centre.
    pub fn gap(&self, mu: f64) -> Result<f64> {
        let s = self.pair(mu)?;
        let re = s.plus.re - s.minus.re;
        if re.abs() > 2.0 * RE_TOL {
            Ok(-re.abs())
        } else {
            Ok((s.plus.im - s.minus.im).abs())
        }
    }

    pub fn unstable(&self, mu: f64) -> Result<bool> {
        let s = self.pair(mu)?;
        Ok(s.plus.re.abs().max(s.minus.re.abs()) > RE_TOL)
    }
}

fn golden_min(f: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

fn edge(t: &PairTracker, inside: f64, dir: f64, scale: f64) -> Result<f64> {
    let mut step = scale * 1e-3;
    let mut out = inside + dir * step;
    let mut n = 0;
    while t.unstable(out)? {
        step *= 2.0;
        out = inside + dir * step;
        n += 1;
        if n > 60 {
            return Err(Error::Unresolved("unstable interval does not close".into()));
        }
    }
    let (mut a, mut b) = (inside, out);
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if t.unstable(m)? {
            a = m;
        } else {
            b = m;
        }
        if (b - a).abs() < 1e-14 * scale.max(1e-300) + 1e-15 {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// Fit `x² + E(y − y₀)² = R²` through the points by linear least squares in
/// `x² = c₀ + c₁ y + c₂ y²`.
pub fn fit_ellipse(points: &[(f64, f64)], y_ref: f64, scale: f64) -> Option<Ellipse> {
    if points.len() < 3 {
        return None;
    }
    let mut ata = nalgebra::Matrix3::<f64>::zeros();
    let mut atb = nalgebra::Vector3::<f64>::zeros();
    for &(x, y) in points {
        let (x, y) = (x / scale, (y - y_ref) / scale);
        let row = nalgebra::Vector3::new(1.0, y, y * y);
        ata += row * row.transpose();
        atb += row * (x * x);
    }
    let c = ata.lu().solve(&atb)?;
    let e = -c[2];
    if !(e > 0.0) {
        return None;
    }
    let y0 = c[1] / (2.0 * e);
    let r2 = c[0] + e * y0 * y0;
    if !(r2 > 0.0) {
        return None;
    }
    let mut ss = 0.0;
    for &(x, y) in points {
        let (x, y) = (x / scale, (y - y_ref) / scale);
        let res = x * x + e * (y - y0).powi(2) - r2;
        ss += res * res;
    }
    let rms = (ss / points.len() as f64).sqrt() / r2;
    Some(Ellipse { semi_x: r2.sqrt() * scale, semi_y: (r2 / e).sqrt() * scale, center_y: y_ref + y0 * scale, rms })
}

/// Predictions from the closed formula for `β₁` and the collision data.
pub fn predict(cd: &CollisionData, beta1: f64, eps: f64) -> IsolaPrediction {
    let ep = eps.powi(cd.p as i32);
    let t1 = cd.trace1().to_f64();
    let aspect = cd.aspect().to_f64();
    IsolaPrediction {
        beta1,
        max_re: beta1.abs() * ep,
        width: 4.0 * beta1.abs() / t1.abs() * ep,
        aspect,
        omega_star: cd.omega_star.to_f64(),
        semi_y: beta1.abs() * ep * aspect,
    }
}

/// Trace the isola born at the `p`-th collision.
pub fn trace_isola(params: &IsolaParams) -> Result<IsolaTrace> {
    let IsolaParams { p, h, eps, modes, order, samples, .. } = *params;
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("ε must be positive, got {eps}")));
    }
    let cd = collision_tables(p, h, COEFF_PREC)?;
    let beta = beta1_eval(p, h, COEFF_PREC)?.beta1.to_f64();
    if beta.abs() < 1e-8 {
        return Err(Error::InvalidArgument(format!("h = {h} is a zero of β₁ for p = {p}")));
    }
    let predictions = predict(&cd, beta, eps);
    let t = PairTracker::new(p, h, eps, modes, order)?;
    let phi = cd.phi.to_f64();

    let mut w = params.mu_window.unwrap_or(3.0 * eps * eps);
    let gap = |mu: f64| t.gap(mu);
    let mut center = None;
    for _ in 0..6 {
        let c = golden_min(&gap, phi - w, phi + w, 1e-13_f64.max(w * 1e-12))?;
        if (c - phi).abs() < 0.999 * w {
            center = Some(c);
            break;
        }
        w *= 2.0;
    }
    let center = center.ok_or_else(|| Error::Unresolved("isola centre not bracketed".into()))?;
    let c_pair = t.pair(center)?;
    if c_pair.plus.re < 1e3 * RE_TOL {
        return Err(Error::Unresolved(format!("max Re λ = {:e} below resolution", c_pair.plus.re)));
    }
    let scale = predictions.width.max(1e-12);
    let mu_wedge = edge(&t, center, -1.0, scale)?;
    let mu_vee = edge(&t, center, 1.0, scale)?;
    let width = mu_vee - mu_wedge;

    let inside: Vec<f64> = (0..samples).map(|i| mu_wedge + width * (i as f64 + 0.5) / samples as f64).collect();
    let n_out = (samples / 4).max(2);
    let mut outer = Vec::new();
    for i in 1..=n_out {
        let d = width * (0.25 + 0.5 * i as f64 / n_out as f64);
        outer.push(mu_wedge - d);
        outer.push(mu_vee + d);
    }
    let run = |mus: &[f64]| -> Result<Vec<PairSample>> { mus.par_iter().map(|&m| t.pair(m)).collect() };
    let mut samples_v = run(&inside)?;
    samples_v.push(c_pair);
    samples_v.sort_by(|a, b| a.mu.partial_cmp(&b.mu).unwrap());
    let outside = run(&outer)?;

    let max_re = samples_v.iter().map(|s| s.plus.re).fold(f64::MIN, f64::max);
    let center_im = 0.5 * (c_pair.plus.im + c_pair.minus.im);
    let mut pts = Vec::new();
    for s in &samples_v {
        pts.push((s.plus.re, s.plus.im));
        pts.push((s.minus.re, s.minus.im));
    }
    let ellipse = fit_ellipse(&pts, center_im, max_re).ok_or_else(|| Error::Unresolved("ellipse fit degenerate".into()))?;
    Ok(IsolaTrace {
        p,
        h,
        eps,
        samples: samples_v,
        outside,
        mu_wedge,
        mu_vee,
        mu_center: center,
        max_re,
        center_im,
        ellipse,
        predictions,
    })
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ellipse_fit_recovers_exact_ellipse() {
        let (a, b, y0) = (2e-4, 5e-4, 1.7);
        let pts: Vec<(f64, f64)> =
            (0..40).map(|k| k as f64 * 0.157).map(|t| (a * t.cos(), y0 + b * t.sin())).collect();
        let e = fit_ellipse(&pts, 1.7001, a).unwrap();
        assert!((e.semi_x - a).abs() < 1e-12);
        assert!((e.semi_y - b).abs() < 1e-12);
        assert!((e.center_y - y0).abs() < 1e-12);
    }

    #[test]
    fn slope_of_power_law() {
        let x = [0.1, 0.2, 0.4];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powi(2)).collect();
        assert!((loglog_slope(&x, &y) - 2.0).abs() < 1e-12);
    }
}
