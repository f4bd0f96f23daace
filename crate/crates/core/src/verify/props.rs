//! Randomized invariants. Each check takes plain inputs and returns a
//! description of the first violation, so it can be driven by any generator.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::beta1::{beta1_eval, ent_coeff};
use crate::collision::{collision_tables, Sign};
use crate::error::Error;
use crate::exactfield::{GradedScalar, RatFun, ZPoly};
use crate::linearization::{linearization_coeffs, numeric_coeffs, LinearizationCoeffs};
use crate::scalar::{Numeric, Symbolic};
use crate::spectrum::{trace_isola, IsolaParams, IsolaTrace, PairTracker};
use crate::stokes::StokesExpansion;
use crate::trigseries::{mul_poly, Parity, TrigPoly};
use crate::Real;

pub type Check = std::result::Result<(), String>;

const PREC: u32 = 256;

/// Order of the exact expansion compared against numeric mode.
pub const EXACT_ORDER: usize = 4;

/// Agreement required between exact and numeric coefficients.
pub const EXACT_NUMERIC_TOL: f64 = 1e-20;

/// Slack on `x²/a² + (y − y₀)²/b² = 1` for points of a traced isola.
pub const ELLIPSE_TOL: f64 = 2e-2;

/// `λ⁻ = −conj(λ⁺)` inside the isola.
pub const PAIRING_TOL: f64 = 1e-10;

fn grid_len(order: usize, parity: Parity) -> usize {
    let k0 = crate::trigseries::first_harmonic(order, parity);
    if order < k0 {
        0
    } else {
        (order - k0) / 2 + 1
    }
}

fn poly(order: usize, parity: Parity, coeffs: &[f64]) -> TrigPoly<Real> {
    let n = grid_len(order, parity);
    let c = (0..n).map(|i| Real::from_f64(coeffs.get(i).copied().unwrap_or(1.0), PREC)).collect();
    TrigPoly::from_harmonics(order, parity, c).expect("grid length")
}

/// Products of trigonometric polynomials keep the `Evn`/`Odd` bookkeeping
/// and agree pointwise with the product of the factors.
pub fn trig_product(a: (usize, Parity, &[f64]), b: (usize, Parity, &[f64]), x: f64) -> Check {
    let fld = Numeric::new(1.0, PREC);
    let (pa, pb) = (poly(a.0, a.1, a.2), poly(b.0, b.1, b.2));
    let prod = mul_poly(&pa, &pb, &fld);
    if prod.order() != a.0 + b.0 {
        return Err(format!("order {} ≠ {} + {}", prod.order(), a.0, b.0));
    }
    if prod.parity() != a.1.times(b.1) {
        return Err(format!("{:?} × {:?} gave {:?}", a.1, b.1, prod.parity()));
    }
    for (k, _) in prod.harmonics() {
        if k % 2 != prod.order() % 2 {
            return Err(format!("harmonic {k} in order {}", prod.order()));
        }
    }
    let xr = Real::from_f64(x, PREC);
    let lhs = prod.eval(&xr);
    let rhs = pa.eval(&xr) * pb.eval(&xr);
    let err = (lhs - &rhs).abs().to_f64();
    if err > 1e-60 * rhs.abs().to_f64().max(1.0) {
        return Err(format!("pointwise product off by {err:e} at x = {x}"));
    }
    Ok(())
}

fn graded(g: u8, n: i64, d: i64) -> GradedScalar {
    // c_h^g (n + t)/d
    let num = ZPoly::from_i64(&[n, 1]);
    GradedScalar::new(g, RatFun::new(num, ZPoly::from_i64(&[d])))
}

/// `c_h^{g₁} r₁ · c_h^{g₂} r₂` has grade `g₁ + g₂ mod 2` and evaluates to the
/// product of the values; sums across grades are rejected.
pub fn graded_product(a: (u8, i64, i64), b: (u8, i64, i64), h: f64) -> Check {
    let (x, y) = (graded(a.0, a.1, a.2), graded(b.0, b.1, b.2));
    let z = x.mul_ref(&y);
    if !z.is_zero() && z.grade() != (a.0 + b.0) % 2 {
        return Err(format!("grade {} for {} · {}", z.grade(), a.0, b.0));
    }
    let t = Real::from_f64(h, PREC).tanh();
    let ch = t.sqrt();
    let ev = |s: &GradedScalar| s.eval_at(&t, &ch).map_err(|e| e.to_string());
    let err = (ev(&z)? - ev(&x)? * ev(&y)?).abs().to_f64();
    if err > 1e-60 {
        return Err(format!("evaluation not multiplicative: {err:e}"));
    }
    let mixed = x.checked_add(&y);
    match (a.0 == b.0, x.is_zero() || y.is_zero(), mixed) {
        (false, false, Ok(_)) => Err("sum across grades accepted".into()),
        (false, false, Err(Error::GradeMismatch { .. })) => Ok(()),
        (_, _, Err(e)) if a.0 == b.0 => Err(format!("same grade sum failed: {e}")),
        _ => Ok(()),
    }
}

struct ExactData {
    stokes: StokesExpansion<Symbolic>,
    lin: LinearizationCoeffs<Symbolic>,
}

fn exact_data() -> &'static ExactData {
    static CELL: OnceLock<ExactData> = OnceLock::new();
    CELL.get_or_init(|| {
        let stokes = StokesExpansion::exact(EXACT_ORDER).expect("exact expansion");
        let lin = linearization_coeffs(&stokes).expect("exact linearization");
        ExactData { stokes, lin }
    })
}

fn max_gap<'a>(a: impl Iterator<Item = &'a Real>, b: impl Iterator<Item = &'a Real>) -> f64 {
    a.zip(b).map(|(x, y)| (x.clone() - y).abs().to_f64()).fold(0.0, f64::max)
}

/// Largest difference between the exact expansion evaluated at `h` and the
/// numeric recursion run at `h`, over `η, ψ, c, p, a, f`.
pub fn exact_numeric_gap(h: f64) -> std::result::Result<f64, String> {
    let ex = exact_data();
    let se = ex.stokes.at_depth(h, PREC).map_err(|e| e.to_string())?;
    let sn = StokesExpansion::numeric(EXACT_ORDER, h, PREC).map_err(|e| e.to_string())?;
    let le = ex.lin.at_depth(h, PREC).map_err(|e| e.to_string())?;
    let ln = numeric_coeffs(EXACT_ORDER, h, PREC).map_err(|e| e.to_string())?;
    let mut gap = max_gap(se.speed().iter(), sn.speed().iter()).max(max_gap(le.f.iter(), ln.f.iter()));
    for l in 0..=EXACT_ORDER {
        let pairs = [
            (se.eta().term(l), sn.eta().term(l)),
            (se.psi().term(l), sn.psi().term(l)),
            (le.p.term(l), ln.p.term(l)),
            (le.a.term(l), ln.a.term(l)),
        ];
        for (x, y) in pairs {
            if x.coeffs().len() != y.coeffs().len() {
                return Err(format!("order {l}: harmonic grids differ"));
            }
            gap = gap.max(max_gap(x.coeffs().iter(), y.coeffs().iter()));
        }
    }
    Ok(gap)
}

pub fn exact_vs_numeric(h: f64) -> Check {
    let gap = exact_numeric_gap(h)?;
    if gap < EXACT_NUMERIC_TOL {
        Ok(())
    } else {
        Err(format!("h = {h}: exact and numeric differ by {gap:e}"))
    }
}

/// Same-signature entanglement coefficients are real, opposite ones purely
/// imaginary, and the chain sum for `β₁` is real after dividing by `i`.
/// Excluded depths are skipped.
pub fn phase_reality(p: u32, h: f64, l: usize, j: usize, sigma: Sign, sigma_p: Sign) -> Check {
    let prec = 128;
    let cd = match collision_tables(p, h, prec) {
        Ok(cd) => cd,
        Err(Error::ExcludedDepth { .. }) => return Ok(()),
        Err(e) => return Err(e.to_string()),
    };
    let lin = numeric_coeffs(p as usize, h, prec).map_err(|e| e.to_string())?;
    let l = 1 + l % p as usize;
    let j = j % (p as usize - l + 1);
    let c = ent_coeff(&cd, &lin, l, j, sigma, sigma_p).map_err(|e| e.to_string())?.value;
    let (re, im) = (c.re.abs().to_f64(), c.im.abs().to_f64());
    let stray = if sigma == sigma_p { im } else { re };
    if stray > 1e-30 * re.max(im).max(1.0) {
        return Err(format!("ℓ = {l}, j = {j}, {sigma:?}{sigma_p:?}: stray component {stray:e}"));
    }
    match beta1_eval(p, h, prec) {
        Ok(r) => {
            let res = r.imag_residual.abs().to_f64();
            if res > 1e-30 * r.beta1.abs().to_f64().max(1.0) {
                return Err(format!("p = {p}, h = {h}: imaginary residual {res:e}"));
            }
            Ok(())
        }
        Err(Error::ExcludedDepth { .. }) => Ok(()),
        Err(e) => Err(e.to_string()),
    }
}

/// Isolas sampled by the ellipse check: `(p, h, ε)`.
pub const ELLIPSE_CASES: [(u32, f64, f64); 2] = [(2, 1.0, 0.05), (3, 1.0, 0.1)];

type TraceKey = (u32, u64, u64, usize, usize);

/// Traced isola with default cutoffs, memoized per process.
pub fn cached_trace(params: &IsolaParams) -> crate::Result<Arc<IsolaTrace>> {
    static CACHE: OnceLock<Mutex<HashMap<TraceKey, Arc<IsolaTrace>>>> = OnceLock::new();
    let key = (params.p, params.h.to_bits(), params.eps.to_bits(), params.modes, params.order);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let t = Arc::new(trace_isola(params)?);
    cache.lock().unwrap().insert(key, t.clone());
    Ok(t)
}

fn tracker(case: usize) -> &'static PairTracker {
    static CELLS: [OnceLock<PairTracker>; ELLIPSE_CASES.len()] = [OnceLock::new(), OnceLock::new()];
    CELLS[case].get_or_init(|| {
        let (p, h, eps) = ELLIPSE_CASES[case];
        let pr = IsolaParams::new(p, h, eps);
        PairTracker::new(p, h, eps, pr.modes, pr.order).expect("tracker")
    })
}

/// At a random `μ` strictly inside the unstable interval the pair is
/// `λ, −conj(λ)` and both points lie on the ellipse fitted to the trace.
pub fn ellipse_symmetry(case: usize, s: f64) -> Check {
    let case = case % ELLIPSE_CASES.len();
    let (p, h, eps) = ELLIPSE_CASES[case];
    let tr = cached_trace(&IsolaParams::new(p, h, eps)).map_err(|e| e.to_string())?;
    let mu = tr.mu_wedge + tr.width() * (0.02 + 0.96 * s.clamp(0.0, 1.0));
    let pair = tracker(case).pair(mu).map_err(|e| e.to_string())?;
    if pair.plus.re <= 0.0 {
        return Err(format!("μ = {mu}: no unstable eigenvalue inside the isola"));
    }
    let defect = (pair.minus + pair.plus.conj()).norm();
    if defect > PAIRING_TOL {
        return Err(format!("μ = {mu}: |λ⁻ + conj λ⁺| = {defect:e}"));
    }
    let el = tr.ellipse;
    for z in [pair.plus, pair.minus] {
        let q = (z.re / el.semi_x).powi(2) + ((z.im - el.center_y) / el.semi_y).powi(2);
        if (q - 1.0).abs() > ELLIPSE_TOL {
            return Err(format!("μ = {mu}: ({:e}, {:e}) off the ellipse, level {q}", z.re, z.im));
        }
    }
    Ok(())
}
