//! The acceptance checks, one function per criterion, with their tolerances
//! pinned as constants.

pub mod props;

use std::fmt;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::beta1::{ascending_tuples, beta1_at, beta1_roots, beta1_shallow_limit, s_tensor_exact, s_tensor_numeric, shallow_constant};
use crate::collision::{collision_fn, solve_phi, Sign};
use crate::combinatorics::{ap_bruteforce, ap_chain, ap_determinant, cp_bruteforce, cp_expected, kernel_check};
use crate::error::Result;
use crate::linearization::{linearization_limits, numeric_coeffs};
use crate::spectrum::{build_truncated, loglog_slope, IsolaParams, OperatorSymbols};
use crate::stokes::{sup_residual, verify_stokes_limits, StokesExpansion};
use crate::trigseries::Parity;
use crate::Real;

/// Working precision of the checks.
pub const PREC: u32 = 256;

/// Largest `p` for which `A^{(p)}` is summed term by term over all subsets.
pub const AP_ENUM_MAX: u32 = 24;
pub const AP_MAX: u32 = 40;
pub const KERNEL_MAX: u32 = 200;
pub const CP_MAX: u32 = 20;

pub const RESIDUAL_ORDER: usize = 8;
pub const RESIDUAL_EPS: f64 = 1e-2;
pub const RESIDUAL_GRID: usize = 64;
/// Orders carried past the expansion when evaluating the residual.
pub const RESIDUAL_EXTRA: usize = 4;

pub const SHALLOW_DEPTHS: [f64; 3] = [0.08, 0.04, 0.02];
pub const STOKES_REL_TOL: f64 = 0.05;
pub const LIMIT_L_MAX: usize = 6;
pub const DEEP_DEPTH: f64 = 15.0;
pub const DEEP_TOL: f64 = 1e-6;

pub const PHI_SHALLOW_H: f64 = 0.02;
pub const PHI_SHALLOW_TOL: f64 = 0.01;
pub const PHI_DEEP_TOL: f64 = 0.05;
pub const PHI_RESIDUAL_TOL: f64 = 1e-12;

/// Published zeros of `β₁^{(p)}`, `(p, h)`.
pub const BETA1_ZEROS: [(u32, f64); 4] = [(2, 1.84940), (3, 0.82064), (4, 0.566633), (4, 1.255969)];
pub const ZERO_TOL: f64 = 1e-3;
pub const BETA1_SHALLOW_TOL: f64 = 0.10;
pub const BETA1_DEEP_RATIO: f64 = 1e-2;
pub const TENSOR_TOL: f64 = 1e-25;

pub const SPECTRUM_MODES: usize = 16;
pub const SPECTRUM_ORDER: usize = 4;
pub const SPECTRUM_EPS: [f64; 2] = [0.02, 0.05];
/// Amplitudes used for the `p = 2` growth exponent.
pub const SLOPE_EPS_P2: [f64; 4] = [0.02, 0.03, 0.05, 0.08];
/// Amplitudes used for the `p = 3` growth exponent, up to `ε = 0.1`.
pub const SLOPE_EPS_P3: [f64; 3] = [0.02, 0.05, 0.1];
pub const MAX_RE_TOL: f64 = 0.10;
pub const WIDTH_TOL: f64 = 0.15;
pub const SLOPE_TOL_P2: f64 = 0.1;
pub const SLOPE_TOL_P3: f64 = 0.15;
pub const FLAT_RE_TOL: f64 = 1e-12;
pub const PAIRING_TOL: f64 = 1e-10;

/// Random cases per property.
pub const PROPERTY_CASES: usize = 200;
pub const PROPERTY_SEED: u64 = 0x15_01a5;

/// Criteria that fail with a faithful implementation.
pub const KNOWN_UNATTAINABLE: [u8; 1] = [3];

/// Outcome of one criterion.
#[derive(Clone, Debug)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<28} {:>7.2}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

fn run(id: u8, name: &'static str, budget_s: u64, body: impl FnOnce() -> Result<(bool, String)>) -> Criterion {
    let start = Instant::now();
    let out = body();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_s);
    let (ok, mut detail) = match out {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    if elapsed > budget {
        detail.push_str(&format!("; over the {budget_s}s budget"));
    }
    Criterion { id, name, passed: ok && elapsed <= budget, detail, elapsed, budget }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn criterion1() -> Criterion {
    run(1, "A(p) cancellation", 30, || {
        let mut bad = Vec::new();
        for p in 2..=AP_ENUM_MAX {
            if !ap_bruteforce(p)?.is_zero() {
                bad.push(format!("enum p={p}"));
            }
        }
        for p in 2..=AP_MAX {
            if !ap_chain(p)?.is_zero() {
                bad.push(format!("chain p={p}"));
            }
            if !ap_determinant(p)?.is_zero() {
                bad.push(format!("det p={p}"));
            }
        }
        for p in 2..=KERNEL_MAX {
            if !kernel_check(p) {
                bad.push(format!("kernel p={p}"));
            }
        }
        let detail = if bad.is_empty() {
            format!("A=0 by subsets p≤{AP_ENUM_MAX}, by chains and determinant p≤{AP_MAX}; kernel p≤{KERNEL_MAX}")
        } else {
            format!("nonzero: {}", bad.join(", "))
        };
        Ok((bad.is_empty(), detail))
    })
}

pub fn criterion2() -> Criterion {
    run(2, "C(p) = p(p+1)^2/3", 60, || {
        for p in 2..=CP_MAX {
            let got = cp_bruteforce(p)?;
            if got != cp_expected(p) {
                return Ok((false, format!("p={p}: got {got}, want {}", cp_expected(p))));
            }
        }
        Ok((true, format!("exact for p=2..{CP_MAX}")))
    })
}

pub fn criterion3() -> Criterion {
    run(3, "Stokes residual", 5, || {
        let st = StokesExpansion::numeric(RESIDUAL_ORDER, 1.0, PREC)?;
        let r = sup_residual(&st, RESIDUAL_EPS, RESIDUAL_EXTRA, RESIDUAL_GRID)?;
        let bound = 10.0 * RESIDUAL_EPS.powi(9);
        Ok((r < bound, format!("sup |R| = {r:.3e}, bound 10ε⁹ = {bound:.1e}, ratio {:.0}", r / bound)))
    })
}

pub fn criterion4() -> Criterion {
    run(4, "shallow Stokes constants", 60, || {
        let st = verify_stokes_limits(LIMIT_L_MAX, SHALLOW_DEPTHS, DEEP_DEPTH, PREC)?;
        let lin = linearization_limits(LIMIT_L_MAX, SHALLOW_DEPTHS, DEEP_DEPTH, PREC)?;
        let fits: Vec<_> = st.shallow.iter().chain(&lin.shallow).collect();
        let worst = fits.iter().map(|f| f.lead_rel_err().max(f.next_rel_err())).fold(0.0, f64::max);
        let bad: Vec<String> = fits
            .iter()
            .filter(|f| f.lead_rel_err() > STOKES_REL_TOL || f.next_rel_err() > STOKES_REL_TOL)
            .map(|f| format!("{}_{}", f.name, f.l))
            .collect();
        Ok((bad.is_empty(), format!("{} fits, worst rel err {worst:.2e}{}", fits.len(), if bad.is_empty() { String::new() } else { format!(", off: {}", bad.join(" ")) })))
    })
}

pub fn criterion5() -> Criterion {
    run(5, "deep-water limits", 10, || {
        let st = StokesExpansion::numeric(LIMIT_L_MAX, DEEP_DEPTH, PREC)?;
        let lin = numeric_coeffs(LIMIT_L_MAX, DEEP_DEPTH, PREC)?;
        let mut worst_eta: f64 = 0.0;
        let mut worst_p: f64 = 0.0;
        for l in 2..=LIMIT_L_MAX {
            worst_eta = worst_eta.max((st.eta_max(l) - st.psi_max(l)).abs().to_f64());
            worst_p = worst_p.max((lin.p_max(l) - lin.a_max(l)).abs().to_f64());
        }
        let ex = StokesExpansion::exact(2)?.eta_max(2).eval_deep();
        let half = BigRational::new(1.into(), 2.into());
        let exact_ok = ex.as_ref() == Some(&half);
        let ok = worst_eta < DEEP_TOL && worst_p < DEEP_TOL && exact_ok;
        let shown = ex.map(|q| q.to_string()).unwrap_or_else(|| "pole".into());
        Ok((ok, format!("max|η−ψ| = {worst_eta:.1e}, max|p−a| = {worst_p:.1e}, exact η₂(∞) = {shown}")))
    })
}

pub fn criterion6() -> Criterion {
    run(6, "collision root", 5, || {
        let mut worst_shallow: f64 = 0.0;
        for p in 2..=5u32 {
            let phi = solve_phi(p, PHI_SHALLOW_H, PREC)?.phi.to_f64();
            let pf = p as f64;
            worst_shallow = worst_shallow.max(rel(phi / (PHI_SHALLOW_H * PHI_SHALLOW_H), pf * (pf * pf - 1.0) / 12.0));
        }
        let phi2 = solve_phi(2, DEEP_DEPTH, PREC)?.phi.to_f64();
        let deep_err = rel(phi2 - 0.25, 0.375 * (-DEEP_DEPTH / 2.0).exp());
        let mut worst_res: f64 = 0.0;
        for i in 0..=40 {
            let h = PHI_SHALLOW_H * (DEEP_DEPTH / PHI_SHALLOW_H).powf(i as f64 / 40.0);
            let hr = Real::from_f64(h, PREC);
            for p in 2..=8u32 {
                let phi = solve_phi(p, h, PREC)?.phi;
                worst_res = worst_res.max(collision_fn(p, &phi, &hr).abs().to_f64());
            }
        }
        let ok = worst_shallow < PHI_SHALLOW_TOL && deep_err < PHI_DEEP_TOL && worst_res < PHI_RESIDUAL_TOL;
        Ok((ok, format!("shallow rel {worst_shallow:.1e}, deep rel {deep_err:.1e}, max|F_p| {worst_res:.1e}")))
    })
}

pub fn criterion7() -> Criterion {
    run(7, "beta1 zeros", 120, || {
        let mut parts = Vec::new();
        let mut ok = true;
        for (p, lo, hi) in [(2u32, 0.5, 3.0), (3, 0.3, 2.0), (4, 0.3, 2.0)] {
            let scan = beta1_roots(p, lo, hi, 200, 128)?;
            for &(q, want) in BETA1_ZEROS.iter().filter(|z| z.0 == p) {
                let got = scan.roots.iter().copied().min_by(|a, b| (a - want).abs().partial_cmp(&(b - want).abs()).unwrap());
                match got {
                    Some(g) if (g - want).abs() < ZERO_TOL => parts.push(format!("p={q}: {g:.6}")),
                    other => {
                        ok = false;
                        parts.push(format!("p={q}: want {want}, nearest {other:?}"));
                    }
                }
            }
        }
        Ok((ok, parts.join(", ")))
    })
}

pub fn criterion8() -> Criterion {
    run(8, "beta1 shallow limit", 120, || {
        let mut worst: f64 = 0.0;
        for p in 2..=4 {
            worst = worst.max(rel(beta1_shallow_limit(p, PREC)?, shallow_constant(p)));
        }
        Ok((worst < BETA1_SHALLOW_TOL, format!("worst rel err {worst:.1e} for p=2..4")))
    })
}

pub fn criterion9() -> Criterion {
    run(9, "beta1 deep limit", 60, || {
        let mut worst_ratio: f64 = 0.0;
        for p in 2..=5 {
            let deep = beta1_at(p, DEEP_DEPTH, PREC)?.beta1.abs().to_f64();
            let unit = beta1_at(p, 1.0, PREC)?.beta1.abs().to_f64();
            worst_ratio = worst_ratio.max(deep / unit);
        }
        let mut worst_tensor: f64 = 0.0;
        let mut exact = true;
        for p in 2..=6u32 {
            for q in 1..=4usize.min(p as usize - 1) {
                for js in ascending_tuples(p as usize, q) {
                    worst_tensor = worst_tensor.max(s_tensor_numeric(p, &js, PREC).abs().to_f64());
                    exact &= s_tensor_exact(p, &js).is_zero();
                }
            }
        }
        let ok = worst_ratio < BETA1_DEEP_RATIO && worst_tensor < TENSOR_TOL && exact;
        Ok((ok, format!("max|β(15)/β(1)| = {worst_ratio:.1e}, max|S| = {worst_tensor:.1e}, exact sums zero: {exact}")))
    })
}

fn spectral_trace(p: u32, eps: f64, order: usize) -> Result<std::sync::Arc<crate::spectrum::IsolaTrace>> {
    let mut pr = IsolaParams::new(p, 1.0, eps);
    pr.modes = SPECTRUM_MODES;
    pr.order = order;
    props::cached_trace(&pr)
}

fn pairing_defect(ev: &[Complex64]) -> f64 {
    ev.iter()
        .map(|z| ev.iter().map(|w| (w + z.conj()).norm()).fold(f64::MAX, f64::min))
        .fold(0.0, f64::max)
}

pub fn criterion10() -> Criterion {
    run(10, "spectrum vs prediction", 180, || {
        let mut ok = true;
        let mut notes = Vec::new();
        let mut worst_re: f64 = 0.0;
        let mut worst_w: f64 = 0.0;
        for &eps in &SPECTRUM_EPS {
            let t = spectral_trace(2, eps, SPECTRUM_ORDER)?;
            worst_re = worst_re.max(rel(t.max_re, t.predictions.max_re));
            worst_w = worst_w.max(rel(t.width(), t.predictions.width));
        }
        ok &= worst_re < MAX_RE_TOL && worst_w < WIDTH_TOL;
        notes.push(format!("maxRe rel {worst_re:.1e}, width rel {worst_w:.1e}"));

        let ys = SLOPE_EPS_P2.iter().map(|&e| Ok(spectral_trace(2, e, SPECTRUM_ORDER)?.max_re)).collect::<Result<Vec<_>>>()?;
        let s2 = loglog_slope(&SLOPE_EPS_P2, &ys);
        ok &= (s2 - 2.0).abs() <= SLOPE_TOL_P2;
        let ys = SLOPE_EPS_P3.iter().map(|&e| Ok(spectral_trace(3, e, 5)?.max_re)).collect::<Result<Vec<_>>>()?;
        let s3 = loglog_slope(&SLOPE_EPS_P3, &ys);
        ok &= (s3 - 3.0).abs() <= SLOPE_TOL_P3;
        notes.push(format!("slopes {s2:.3} (p=2), {s3:.3} (p=3)"));

        let lin = numeric_coeffs(SPECTRUM_ORDER, 1.0, 128)?;
        let phi = solve_phi(2, 1.0, 128)?.phi.to_f64();
        let flat = OperatorSymbols::new(&lin, 0.0, SPECTRUM_ORDER)?;
        let mut flat_re: f64 = 0.0;
        for mu in [0.0, 0.13, phi, 0.5] {
            let ev = build_truncated(&flat, mu, SPECTRUM_MODES).eigenvalues()?;
            flat_re = flat_re.max(ev.iter().map(|z| z.re.abs()).fold(0.0, f64::max));
        }
        ok &= flat_re < FLAT_RE_TOL;
        let sym = OperatorSymbols::new(&lin, 0.05, SPECTRUM_ORDER)?;
        let mut pair: f64 = spectral_trace(2, 0.05, SPECTRUM_ORDER)?.pairing_defect();
        for mu in [0.1, 0.3, phi] {
            pair = pair.max(pairing_defect(&build_truncated(&sym, mu, SPECTRUM_MODES).eigenvalues()?));
        }
        ok &= pair < PAIRING_TOL;
        notes.push(format!("ε=0 max|Re| {flat_re:.1e}, pairing {pair:.1e}"));
        Ok((ok, notes.join("; ")))
    })
}

fn parity(b: bool) -> Parity {
    if b {
        Parity::Evn
    } else {
        Parity::Odd
    }
}

/// Run every property on [`PROPERTY_CASES`] seeded random inputs, returning
/// `(name, failures, first failure)` per property.
pub fn property_sweep(cases: usize, seed: u64) -> Vec<(&'static str, usize, Option<String>)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut tally = |name: &'static str, checks: Vec<props::Check>| {
        let fails: Vec<String> = checks.into_iter().filter_map(|c| c.err()).collect();
        out.push((name, fails.len(), fails.into_iter().next()));
    };

    let mut checks = Vec::new();
    for _ in 0..cases {
        let ca: Vec<f64> = (0..6).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let cb: Vec<f64> = (0..6).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let a = (rng.gen_range(0..8), parity(rng.gen()), ca.as_slice());
        let b = (rng.gen_range(0..8), parity(rng.gen()), cb.as_slice());
        let x = rng.gen_range(-4.0..4.0);
        let mut c = props::trig_product(a, b, x);
        if c.is_ok() {
            let g = |r: &mut StdRng| (r.gen_range(0..2u8), r.gen_range(-9..10i64), r.gen_range(1..10i64));
            let (ga, gb) = (g(&mut rng), g(&mut rng));
            c = props::graded_product(ga, gb, rng.gen_range(0.05..6.0));
        }
        checks.push(c);
    }
    tally("parity/grading", checks);

    let checks = (0..cases).map(|_| props::exact_vs_numeric(rng.gen_range(0.1..8.0))).collect();
    tally("exact vs numeric", checks);

    let mut checks = Vec::new();
    for _ in 0..cases {
        let p = rng.gen_range(2..=5);
        let h = rng.gen_range(0.2..4.0);
        let s = |r: &mut StdRng| if r.gen() { Sign::Plus } else { Sign::Minus };
        let (l, j) = (rng.gen_range(0..8), rng.gen_range(0..8));
        let (s1, s2) = (s(&mut rng), s(&mut rng));
        checks.push(props::phase_reality(p, h, l, j, s1, s2));
    }
    tally("phase reality", checks);

    let checks = (0..cases).map(|_| props::ellipse_symmetry(rng.gen_range(0..2), rng.gen())).collect();
    tally("ellipse symmetry", checks);
    out
}

pub fn criterion11() -> Criterion {
    run(11, "property suites", 120, || {
        let res = property_sweep(PROPERTY_CASES, PROPERTY_SEED);
        let ok = res.iter().all(|r| r.1 == 0);
        let detail = res
            .iter()
            .map(|(n, f, first)| match first {
                None => format!("{n} {PROPERTY_CASES}/{PROPERTY_CASES}"),
                Some(m) => format!("{n} {} failed ({m})", f),
            })
            .collect::<Vec<_>>()
            .join(", ");
        Ok((ok, detail))
    })
}

/// Run one criterion by number.
pub fn criterion(id: u8) -> Option<Criterion> {
    Some(match id {
        1 => criterion1(),
        2 => criterion2(),
        3 => criterion3(),
        4 => criterion4(),
        5 => criterion5(),
        6 => criterion6(),
        7 => criterion7(),
        8 => criterion8(),
        9 => criterion9(),
        10 => criterion10(),
        11 => criterion11(),
        _ => return None,
    })
}

/// All criteria in order.
pub fn run_all() -> Vec<Criterion> {
    (1..=11).filter_map(criterion).collect()
}
