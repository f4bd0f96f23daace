//! The off-diagonal coefficient `β₁^{(p)}(h)` that sets the size of the
//! `p`-th isola.
//!
//! `β₁` is a sum over chains `(0,−) → (j₁,σ₁) → … → (j_q,σ_q) → (p,+)` of
//! products of entanglement coefficients divided by the frequency gaps
//! `ω_{j_i}^{σ_i} − ω*`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::collision::{solve_phi, tables_from_root, CollisionData, Sign};
use crate::error::{Error, Result};
use crate::linearization::{numeric_coeffs, LinearizationCoeffs};
use crate::real::Real;
use crate::scalar::Numeric;

/// A complex number over [`Real`].
#[derive(Clone, Debug)]
pub struct Cx {
    pub re: Real,
    pub im: Real,
}

impl Cx {
    pub fn zero(prec: u32) -> Self {
        Cx { re: Real::from_i64(0, prec), im: Real::from_i64(0, prec) }
    }

    pub fn real(re: Real) -> Self {
        let im = re.zero_like();
        Cx { re, im }
    }

    /// `i^k · x`.
    pub fn rotated(x: Real, k: u8) -> Self {
        let z = x.zero_like();
        match k % 4 {
            0 => Cx { re: x, im: z },
            1 => Cx { re: z, im: x },
            2 => Cx { re: -x, im: z },
            _ => Cx { re: z, im: -x },
        }
    }

    pub fn mul(&self, o: &Cx) -> Cx {
        Cx {
            re: self.re.clone() * &o.re - self.im.clone() * &o.im,
            im: self.re.clone() * &o.im + self.im.clone() * &o.re,
        }
    }

    pub fn scale(&self, s: &Real) -> Cx {
        Cx { re: self.re.clone() * s, im: self.im.clone() * s }
    }

    pub fn add(&self, o: &Cx) -> Cx {
        Cx { re: self.re.clone() + &o.re, im: self.im.clone() + &o.im }
    }

    pub fn abs(&self) -> Real {
        (self.re.square() + self.im.square()).sqrt()
    }
}

/// Power of `i` carried by `√σ · conj(√σ′)` with `√− = i`.
fn phase(sigma: Sign, sigma_p: Sign) -> u8 {
    match (sigma, sigma_p) {
        (Sign::Plus, Sign::Plus) | (Sign::Minus, Sign::Minus) => 0,
        (Sign::Minus, Sign::Plus) => 1,
        (Sign::Plus, Sign::Minus) => 3,
    }
}

/// Entanglement coefficient between `(j, σ)` and `(j + ℓ, σ′)`.
#[derive(Clone, Debug)]
pub struct EntanglementCoeff {
    pub l: usize,
    pub j: usize,
    pub sigma: Sign,
    pub sigma_p: Sign,
    pub value: Cx,
}

/// `¼ √σ conj(√σ′) √(Ω_j Ω_{j+ℓ}) (a_ℓ^{[ℓ]} − p_ℓ^{[ℓ]}(σ t_j + σ′ t_{j+ℓ}))`.
pub fn ent_coeff(
    cd: &CollisionData,
    lin: &LinearizationCoeffs<Numeric>,
    l: usize,
    j: usize,
    sigma: Sign,
    sigma_p: Sign,
) -> Result<EntanglementCoeff> {
    if l == 0 || j + l > cd.p as usize {
        return Err(Error::InvalidArgument(format!("entanglement index ℓ = {l}, j = {j} outside 1 ≤ ℓ, j + ℓ ≤ {}", cd.p)));
    }
    if lin.order() < l {
        return Err(Error::MissingOrder { needed: l, available: lin.order() });
    }
    let k = j + l;
    let st = cd.t[j].clone() * sigma.value() + cd.t[k].clone() * sigma_p.value();
    let bracket = lin.a_max(l) - lin.p_max(l) * st;
    let mag = (cd.omega[j].clone() * &cd.omega[k]).sqrt() * bracket * Real::ratio(1, 4, cd.phi.prec());
    Ok(EntanglementCoeff { l, j, sigma, sigma_p, value: Cx::rotated(mag, phase(sigma, sigma_p)) })
}

/// `β₁^{(p)}(h)` with its diagnostics.
#[derive(Clone, Debug)]
pub struct Beta1Result {
    pub p: u32,
    pub h: f64,
    pub beta1: Real,
    /// Imaginary part left after dividing the chain sum by `i`.
    pub imag_residual: Real,
    /// Number of chains summed, `3^{p−1}`.
    pub term_count: u64,
    pub b0: Real,
    /// Contribution of the chains with `q` intermediate nodes of which `m`
    /// carry the sign `−`, keyed by `(q, m)`. `(0, 0)` is `b₀`.
    pub partials: BTreeMap<(usize, usize), Real>,
    /// Set when `h` is an excluded depth and the value is the average of the
    /// evaluations at `h ± 10⁻⁴`.
    pub continued: bool,
}

/// Offset used to step around excluded depths.
pub const CONTINUATION_STEP: f64 = 1e-4;

struct Walker<'a> {
    p: usize,
    ent: &'a Vec<Vec<Vec<Vec<Option<Cx>>>>>,
    inv_gap: &'a Vec<[Real; 2]>,
    partials: BTreeMap<(usize, usize), Cx>,
    count: u64,
}

fn sidx(s: Sign) -> usize {
    match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

impl Walker<'_> {
    // prefix is the product of the chain up to (j, s), already divided by its
    // gaps and multiplied by its signs
    fn walk(&mut self, j: usize, s: Sign, prefix: &Cx, q: usize, m: usize) {
        let close = self.ent[j][sidx(s)][self.p][0].as_ref().unwrap();
        let term = prefix.mul(close);
        let slot = self.partials.entry((q, m)).or_insert_with(|| Cx::zero(term.re.prec()));
        *slot = slot.add(&term);
        self.count += 1;
        for k in j + 1..self.p {
            for s2 in Sign::BOTH {
                let e = self.ent[j][sidx(s)][k][sidx(s2)].as_ref().unwrap();
                let mut w = self.inv_gap[k][sidx(s2)].clone();
                if s2 == Sign::Minus {
                    w = -w;
                }
                let next = prefix.mul(e).scale(&w);
                self.walk(k, s2, &next, q + 1, m + usize::from(s2 == Sign::Minus));
            }
        }
    }
}

fn imag_tolerance(prec: u32) -> f64 {
    1e-20f64.max(2f64.powi(24 - prec as i32))
}

/// Evaluate the chain sum from collision tables and linearization data.
pub fn beta1_from_tables(cd: &CollisionData, lin: &LinearizationCoeffs<Numeric>) -> Result<Beta1Result> {
    let p = cd.p as usize;
    let prec = cd.phi.prec();
    if lin.order() < p {
        return Err(Error::MissingOrder { needed: p, available: lin.order() });
    }
    let mut ent = vec![vec![vec![vec![None; 2]; p + 1]; 2]; p];
    for j in 0..p {
        for s in Sign::BOTH {
            for k in j + 1..=p {
                for s2 in Sign::BOTH {
                    ent[j][sidx(s)][k][sidx(s2)] = Some(ent_coeff(cd, lin, k - j, j, s, s2)?.value);
                }
            }
        }
    }
    let mut inv_gap = Vec::with_capacity(p);
    for j in 0..p {
        let g = |s: Sign| (cd.omega_sigma(j, s).clone() - &cd.omega_star).recip();
        inv_gap.push([g(Sign::Plus), g(Sign::Minus)]);
    }

    let one = Cx::real(Real::from_i64(1, prec));
    let mut w = Walker { p, ent: &ent, inv_gap: &inv_gap, partials: BTreeMap::new(), count: 0 };
    w.walk(0, Sign::Minus, &one, 0, 0);

    // divide by i: (x + iy)/i = y − ix
    let mut total = Cx::zero(prec);
    let mut partials = BTreeMap::new();
    for (key, v) in &w.partials {
        total = total.add(v);
        partials.insert(*key, v.im.clone());
    }
    let beta1 = total.im.clone();
    let imag_residual = -total.re;
    let b0 = partials[&(0, 0)].clone();
    let tol = imag_tolerance(prec) * beta1.abs().to_f64().max(1.0);
    if imag_residual.abs().to_f64() > tol {
        return Err(Error::ImaginaryResidual { residual: imag_residual.to_f64() });
    }
    Ok(Beta1Result {
        p: cd.p,
        h: cd.h.to_f64(),
        beta1,
        imag_residual,
        term_count: w.count,
        b0,
        partials,
        continued: false,
    })
}

fn eval_with_root(p: u32, h: f64, prec: u32, phi: Real) -> Result<Beta1Result> {
    let cd = tables_from_root(p, h, phi)?;
    let lin = numeric_coeffs(p as usize, h, prec)?;
    beta1_from_tables(&cd, &lin)
}

/// `β₁^{(p)}(h)` at a non-excluded depth.
pub fn beta1_eval(p: u32, h: f64, prec: u32) -> Result<Beta1Result> {
    let root = solve_phi(p, h, prec)?;
    if root.excluded {
        return Err(Error::ExcludedDepth { h, reason: format!("φ({p}, h) = {} is an integer", root.phi.to_decimal(20)) });
    }
    eval_with_root(p, h, prec, root.phi)
}

/// `β₁^{(p)}(h)` at any depth; excluded depths are bridged by averaging the
/// values at `h ± 10⁻⁴` and flagged.
pub fn beta1_at(p: u32, h: f64, prec: u32) -> Result<Beta1Result> {
    match beta1_eval(p, h, prec) {
        Err(Error::ExcludedDepth { .. }) => {}
        other => return other,
    }
    let side = |hh: f64| -> Result<Beta1Result> {
        let root = solve_phi(p, hh, prec)?;
        eval_with_root(p, hh, prec, root.phi)
    };
    let (lo, hi) = (side(h - CONTINUATION_STEP)?, side(h + CONTINUATION_STEP)?);
    let half = Real::ratio(1, 2, prec);
    let avg = |a: &Real, b: &Real| (a.clone() + b) * &half;
    let mut partials = BTreeMap::new();
    for (key, v) in &lo.partials {
        partials.insert(*key, avg(v, &hi.partials[key]));
    }
    Ok(Beta1Result {
        p,
        h,
        beta1: avg(&lo.beta1, &hi.beta1),
        imag_residual: avg(&lo.imag_residual, &hi.imag_residual),
        term_count: lo.term_count,
        b0: avg(&lo.b0, &hi.b0),
        partials,
        continued: true,
    })
}

/// `(h, β₁^{(p)}(h), continued)` on `n` evenly spaced depths in `[from, to]`.
pub fn beta1_curve(p: u32, from: f64, to: f64, n: usize, prec: u32) -> Result<Vec<(f64, f64, bool)>> {
    if n < 2 || !(from > 0.0) || !(to > from) {
        return Err(Error::InvalidArgument(format!("bad curve range [{from}, {to}] with {n} points")));
    }
    (0..n)
        .into_par_iter()
        .map(|i| {
            let h = from + (to - from) * i as f64 / (n - 1) as f64;
            let r = beta1_at(p, h, prec)?;
            Ok((h, r.beta1.to_f64(), r.continued))
        })
        .collect()
}

/// Zeros found by [`beta1_roots`] and the excluded depths met on the way.
#[derive(Clone, Debug, Default)]
pub struct RootScan {
    pub roots: Vec<f64>,
    /// Grid depths where `β₁` was only available by continuation.
    pub gaps: Vec<f64>,
}

/// Bisection target width for roots.
pub const ROOT_TOL: f64 = 1e-6;

/// Sign changes of `β₁^{(p)}` on a grid of `grid_n` points, refined by
/// bisection.
pub fn beta1_roots(p: u32, h_lo: f64, h_hi: f64, grid_n: usize, prec: u32) -> Result<RootScan> {
    let curve = beta1_curve(p, h_lo, h_hi, grid_n, prec)?;
    let mut scan = RootScan::default();
    scan.gaps = curve.iter().filter(|c| c.2).map(|c| c.0).collect();
    let f = |h: f64| -> Result<f64> { Ok(beta1_at(p, h, prec)?.beta1.to_f64()) };
    for w in curve.windows(2) {
        let ((a, fa, _), (b, fb, _)) = (w[0], w[1]);
        if fa == 0.0 {
            scan.roots.push(a);
            continue;
        }
        if fa.signum() == fb.signum() {
            continue;
        }
        let (mut lo, mut hi) = (a, b);
        while hi - lo > ROOT_TOL {
            let m = 0.5 * (lo + hi);
            if f(m)?.signum() == fa.signum() {
                lo = m;
            } else {
                hi = m;
            }
        }
        scan.roots.push(0.5 * (lo + hi));
    }
    Ok(scan)
}

/// `−√((p²−1)/3) (3/8)^{p−1} p²(p+1)²/24`, the limit of `β₁ h^{3p−11/2}`.
pub fn shallow_constant(p: u32) -> f64 {
    let pf = p as f64;
    -((pf * pf - 1.0) / 3.0).sqrt() * (3.0f64 / 8.0).powi(p as i32 - 1) * pf * pf * (pf + 1.0).powi(2) / 24.0
}

/// Depths used for the shallow extrapolation.
pub const SHALLOW_DEPTHS: [f64; 3] = [0.08, 0.04, 0.02];

/// Depths used for the deep decay check.
pub const DEEP_DEPTHS: [f64; 3] = [5.0, 10.0, 15.0];

/// Outcome of [`beta1_limits_check`].
#[derive(Clone, Debug)]
pub struct Beta1Limits {
    pub p: u32,
    /// Richardson limit of `β₁ h^{3p−11/2}`.
    pub shallow: f64,
    pub shallow_expected: f64,
    /// `(h, |β₁(h)|, continued)` at the deep depths.
    pub deep: Vec<(f64, f64, bool)>,
    /// Largest `|S_{j₁…j_q}|` over all tuples, evaluated numerically.
    pub tensor_max: f64,
    /// Every tensor sum vanishes in exact arithmetic.
    pub tensor_exact: bool,
}

impl Beta1Limits {
    pub fn shallow_rel_err(&self) -> f64 {
        ((self.shallow - self.shallow_expected) / self.shallow_expected).abs()
    }

    pub fn deep_decays(&self) -> bool {
        self.deep.windows(2).all(|w| w[1].1 < w[0].1)
    }
}

/// Richardson limit of `β₁ h^{3p−11/2}` over [`SHALLOW_DEPTHS`].
pub fn beta1_shallow_limit(p: u32, prec: u32) -> Result<f64> {
    let expo = Real::ratio(6 * p as i64 - 11, 2, prec);
    let mut g = Vec::new();
    for &h in &SHALLOW_DEPTHS {
        let b = beta1_at(p, h, prec)?.beta1;
        g.push(b * Real::from_f64(h, prec).powf(&expo));
    }
    let g: [Real; 3] = g.try_into().unwrap();
    Ok(crate::stokes::richardson3(SHALLOW_DEPTHS, g).0.to_f64())
}

/// Shallow limit, deep decay and tensor cancellation for a given `p`.
pub fn beta1_limits_check(p: u32, prec: u32) -> Result<Beta1Limits> {
    if !(2..=8).contains(&p) {
        return Err(Error::InvalidArgument(format!("limit check needs 2 ≤ p ≤ 8, got {p}")));
    }
    let lim = beta1_shallow_limit(p, prec)?;
    let mut deep = Vec::new();
    for &h in &DEEP_DEPTHS {
        let r = beta1_at(p, h, prec)?;
        deep.push((h, r.beta1.abs().to_f64(), r.continued));
    }
    let mut tensor_max = 0.0f64;
    let mut tensor_exact = true;
    for q in 1..p as usize {
        for js in ascending_tuples(p as usize, q) {
            tensor_max = tensor_max.max(s_tensor_numeric(p, &js, prec).abs().to_f64());
            tensor_exact &= s_tensor_exact(p, &js).is_zero();
        }
    }
    Ok(Beta1Limits { p, shallow: lim, shallow_expected: shallow_constant(p), deep, tensor_max, tensor_exact })
}

/// All tuples `0 < j₁ < … < j_q < p`.
pub fn ascending_tuples(p: usize, q: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, p: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for j in start..p {
            if p - j < left {
                break;
            }
            cur.push(j);
            rec(j + 1, p, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, p, q, &mut Vec::new(), &mut out);
    out
}

/// `ν_j² = j + (p−1)²/4`.
fn nu_sq(p: u32, j: usize) -> BigRational {
    let pm = BigInt::from(p as i64 - 1);
    BigRational::from_integer(BigInt::from(j)) + BigRational::new(&pm * &pm, BigInt::from(4))
}

/// `B^{σ⃗}_{j⃗}` in floating point.
pub fn b_tensor(p: u32, js: &[usize], sigmas: &[Sign], prec: u32) -> Real {
    let nu = |j: usize| Real::from_rational(&nu_sq(p, j), prec).sqrt();
    let one = Real::from_i64(1, prec);
    let mut b = one.clone() + nu(0) - nu(js[0]) * sigmas[0].value();
    for i in 0..js.len() {
        let (ji, si) = (js[i], sigmas[i].value());
        let (jn, sn) = if i + 1 < js.len() { (js[i + 1], sigmas[i + 1].value()) } else { (p as usize, 1) };
        let f1 = one.clone() - nu(ji) * si - nu(jn) * sn;
        let f2 = Real::from_i64(2 * ji as i64 - p as i64 + 1, prec) + nu(ji) * (2 * si);
        b = b * f1 * f2;
    }
    b
}

/// `S_{j⃗} = Σ_σ σ₁⋯σ_q B^{σ⃗}_{j⃗}`, summed in floating point.
pub fn s_tensor_numeric(p: u32, js: &[usize], prec: u32) -> Real {
    let q = js.len();
    let mut s = Real::from_i64(0, prec);
    for mask in 0u32..(1 << q) {
        let sig: Vec<Sign> = (0..q).map(|i| if mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus }).collect();
        let b = b_tensor(p, js, &sig, prec);
        if mask.count_ones() % 2 == 1 {
            s = s - b;
        } else {
            s = s + b;
        }
    }
    s
}

/// Multilinear polynomial in `x_i = σ_i ν_{j_i}` with `x_i² = ν_{j_i}²`,
/// keyed by the bitmask of the variables present.
type Multi = BTreeMap<u32, BigRational>;

fn multi_mul(a: &Multi, b: &Multi, sq: &[BigRational]) -> Multi {
    let mut out = Multi::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut c = ca * cb;
            let both = ma & mb;
            for (i, s) in sq.iter().enumerate() {
                if both >> i & 1 == 1 {
                    c *= s;
                }
            }
            *out.entry(ma ^ mb).or_insert_with(BigRational::zero) += c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `S_{j⃗} / (2^q ν_{j₁}⋯ν_{j_q})` in exact arithmetic.
///
/// Summing `σ₁⋯σ_q B` over all signs keeps only the part of `B` odd in every
/// `x_i`, which after reducing `x_i²` is the coefficient of `x₁⋯x_q`. `ν₀`
/// and `ν_p` are rational.
pub fn s_tensor_exact(p: u32, js: &[usize]) -> BigRational {
    let q = js.len();
    let sq: Vec<BigRational> = js.iter().map(|&j| nu_sq(p, j)).collect();
    let rat = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let nu0 = rat(p as i64 - 1, 2);
    let nup = rat(p as i64 + 1, 2);
    let lin = |c: BigRational, i: usize, k: BigRational| -> Multi {
        let mut m = Multi::new();
        if !c.is_zero() {
            m.insert(0, c);
        }
        m.insert(1 << i, k);
        m
    };
    let mut b = lin(BigRational::one() + &nu0, 0, -BigRational::one());
    for i in 0..q {
        let f1 = if i + 1 < q {
            let mut m = lin(BigRational::one(), i, -BigRational::one());
            m.insert(1 << (i + 1), -BigRational::one());
            m
        } else {
            lin(BigRational::one() - &nup, i, -BigRational::one())
        };
        let f2 = lin(rat(2 * js[i] as i64 - p as i64 + 1, 1), i, rat(2, 1));
        b = multi_mul(&multi_mul(&b, &f1, &sq), &f2, &sq);
    }
    b.get(&((1u32 << q) - 1)).cloned().unwrap_or_else(BigRational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_pattern() {
        let cd = crate::collision::collision_tables(3, 1.0, 128).unwrap();
        let lin = numeric_coeffs(3, 1.0, 128).unwrap();
        for s in Sign::BOTH {
            for s2 in Sign::BOTH {
                let e = ent_coeff(&cd, &lin, 2, 1, s, s2).unwrap().value;
                if s == s2 {
                    assert!(e.im.is_zero());
                } else {
                    assert!(e.re.is_zero());
                }
            }
        }
        assert!(ent_coeff(&cd, &lin, 3, 1, Sign::Plus, Sign::Plus).is_err());
    }

    #[test]
    fn term_count_is_power_of_three() {
        for p in 2..=5 {
            let r = beta1_eval(p, 1.0, 128).unwrap();
            assert_eq!(r.term_count, 3u64.pow(p - 1));
        }
    }

    #[test]
    fn tensor_sums_vanish() {
        for p in 2..=6u32 {
            for q in 1..p as usize {
                for js in ascending_tuples(p as usize, q) {
                    assert!(s_tensor_exact(p, &js).is_zero());
                    assert!(s_tensor_numeric(p, &js, 256).abs().to_f64() < 1e-40);
                }
            }
        }
    }

    #[test]
    fn single_node_tensor_has_nonzero_terms() {
        // the cancellation is between signs, not term by term
        let b = b_tensor(4, &[2], &[Sign::Plus], 128);
        assert!(b.abs().to_f64() > 1e-3);
    }
}
