//! Exact identities behind the shallow-water expansion of `β₁`: the
//! cancellation `A^{(p)} = 0`, the value `C^{(p)} = p(p+1)²/3`, and the
//! convolution sums used for the Stokes coefficients.
//!
//! With `d_j = p³ − p + j − j³` and `D = Π_{j<p} d_j`, a tuple
//! `0 < j₁ < … < j_q < p` contributes
//! `a_q = (−12)^q j₁⋯j_q · j₁(j₂−j₁)⋯(p−j_q) / (d_{j₁}⋯d_{j_q})`, so
//! `D·a_q` is the integer obtained by multiplying in `d_j` for every `j`
//! outside the tuple.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest `p` accepted by the subset enumeration for `A^{(p)}`.
pub const AP_BRUTE_MAX: u32 = 26;

/// Largest `p` accepted by [`cp_bruteforce`].
pub const CP_BRUTE_MAX: u32 = 22;

fn d(p: i64, j: i64) -> i64 {
    p * p * p - p + j - j * j * j
}

fn denominator(p: i64) -> BigInt {
    (1..p).map(|j| BigInt::from(d(p, j))).product()
}

fn check_p(p: u32, max: u32) -> Result<()> {
    if p < 2 || p > max {
        return Err(Error::InvalidArgument(format!("p must lie in 2..={max}, got {p}")));
    }
    Ok(())
}

/// Tuples sharing the smallest index, so the enumeration splits across
/// threads.
fn by_first_index<T, F>(p: i64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Option<i64>) -> T + Sync + Send,
{
    let mut firsts: Vec<Option<i64>> = vec![None];
    firsts.extend((1..p).map(Some));
    firsts.into_par_iter().map(f).collect()
}

/// `A^{(p)} = p + Σ a_q` by enumerating all `2^{p−1}` tuples.
pub fn ap_bruteforce(p: u32) -> Result<BigRational> {
    check_p(p, AP_BRUTE_MAX)?;
    let p = p as i64;

    fn walk(p: i64, next: i64, last: i64, acc: &BigInt, out: &mut BigInt) {
        if next == p {
            *out += acc * (p - last);
            return;
        }
        walk(p, next + 1, last, &(acc * d(p, next)), out);
        walk(p, next + 1, next, &(acc * (-12 * next * (next - last))), out);
    }

    let parts = by_first_index(p, |first| {
        let mut out = BigInt::zero();
        match first {
            None => {
                let acc: BigInt = (1..p).map(|j| BigInt::from(d(p, j))).product();
                out += acc * p;
            }
            Some(j1) => {
                let acc: BigInt = (1..j1).map(|j| BigInt::from(d(p, j))).product::<BigInt>() * (-12 * j1 * j1);
                walk(p, j1 + 1, j1, &acc, &mut out);
            }
        }
        out
    });
    let num: BigInt = parts.into_iter().sum();
    Ok(BigRational::new(num, denominator(p)))
}

/// The same sum as [`ap_bruteforce`], grouped by the last chosen index so it
/// costs `O(p²)` big-integer operations.
pub fn ap_chain(p: u32) -> Result<BigRational> {
    check_p(p, 400)?;
    let p = p as i64;
    // run[i][k] = Π_{i<m<k} d_m
    let run = |i: i64, k: i64| -> BigInt { (i + 1..k).map(|m| BigInt::from(d(p, m))).product() };
    let mut f = vec![BigInt::zero(); p as usize];
    f[0] = BigInt::one();
    for k in 1..p {
        let mut s = BigInt::zero();
        for i in 0..k {
            s += &f[i as usize] * (k - i) * run(i, k);
        }
        f[k as usize] = s * (-12 * k);
    }
    let mut num = BigInt::zero();
    for i in 0..p {
        num += &f[i as usize] * (p - i) * run(i, p);
    }
    Ok(BigRational::new(num, denominator(p)))
}

/// The tridiagonal integer matrix whose determinant is `D·A^{(p)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TridiagIII {
    pub p: u32,
    /// Diagonal, `p` entries.
    pub diag: Vec<BigInt>,
    /// Entries `(k, k+1)`, `p − 1` entries.
    pub upper: Vec<BigInt>,
    /// Entries `(k+1, k)`, `p − 1` entries.
    pub lower: Vec<BigInt>,
}

impl TridiagIII {
    /// Diagonal `2p³ − 2p − 2j³ − 10j` for `j < p` and `1` in the corner;
    /// column `j` carries `j³ − j − p³ + p` off the diagonal.
    pub fn new(p: u32) -> Self {
        let pi = p as i64;
        let off = |j: i64| BigInt::from(j * j * j - j - pi * pi * pi + pi);
        let diag = (1..=pi)
            .map(|j| if j == pi { BigInt::one() } else { BigInt::from(2 * pi * pi * pi - 2 * pi - 2 * j * j * j - 10 * j) })
            .collect();
        let upper = (2..=pi).map(off).collect();
        let lower = (1..pi).map(off).collect();
        TridiagIII { p, diag, upper, lower }
    }

    pub fn dense(&self) -> Vec<Vec<BigInt>> {
        let n = self.p as usize;
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for k in 0..n {
            m[k][k] = self.diag[k].clone();
            if k + 1 < n {
                m[k][k + 1] = self.upper[k].clone();
                m[k + 1][k] = self.lower[k].clone();
            }
        }
        m
    }

    /// Three-term recurrence `f_k = a_k f_{k−1} − b_{k−1} c_{k−1} f_{k−2}`.
    pub fn det(&self) -> BigInt {
        let mut f0 = BigInt::one();
        let mut f1 = self.diag[0].clone();
        for k in 1..self.diag.len() {
            let f2 = &self.diag[k] * &f1 - &self.upper[k - 1] * &self.lower[k - 1] * &f0;
            f0 = f1;
            f1 = f2;
        }
        f1
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        let n = self.diag.len();
        (0..n)
            .map(|k| {
                let mut s = &self.diag[k] * &v[k];
                if k + 1 < n {
                    s += &self.upper[k] * &v[k + 1];
                }
                if k > 0 {
                    s += &self.lower[k - 1] * &v[k - 1];
                }
                s
            })
            .collect()
    }
}

/// `(1, 2, …, p−1, 3p(p−1)²)`.
pub fn kernel_vector(p: u32) -> Vec<BigInt> {
    let pi = p as i64;
    let mut v: Vec<BigInt> = (1..pi).map(BigInt::from).collect();
    v.push(BigInt::from(3 * pi * (pi - 1) * (pi - 1)));
    v
}

/// `Ⅲ · v = 0` for the kernel vector.
pub fn kernel_check(p: u32) -> bool {
    TridiagIII::new(p).apply(&kernel_vector(p)).iter().all(Zero::is_zero)
}

/// `A^{(p)} = det Ⅲ / D`.
pub fn ap_determinant(p: u32) -> Result<BigRational> {
    check_p(p, 400)?;
    Ok(BigRational::new(TridiagIII::new(p).det(), denominator(p as i64)))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Per-index pieces of `3 g_q`, as rationals.
struct GWeights {
    /// Term added for every element `j`.
    each: Vec<BigRational>,
    /// Extra terms when `j` is the first element.
    first: Vec<BigRational>,
    /// `−13/9`, multiplying consecutive products `j_i j_{i+1}` with `j_{q+1} = p`.
    pair: BigRational,
    /// `−4/9`.
    konst: BigRational,
}

fn g_weights(p: i64) -> GWeights {
    let w = p * p * p - p;
    let mut each = vec![BigRational::zero(); p as usize];
    let mut first = vec![BigRational::zero(); p as usize];
    for j in 1..p {
        each[j as usize] = rat(49, 45) + rat(5 * w, 18 * j) + rat(38 * j * j, 15) + rat(w * (p + j), 5 * (p * p + j * j + p * j - 1));
        first[j as usize] = rat(32 * j * j, 9) - rat(4 * w, 9 * j);
    }
    GWeights { each, first, pair: rat(-13, 9), konst: rat(-4, 9) }
}

/// `g_q^{(p)}(j₁…j_q)` for a single tuple.
pub fn g_weight(p: u32, js: &[usize]) -> BigRational {
    let p = p as i64;
    let gw = g_weights(p);
    let mut s = gw.konst.clone() + &gw.first[js[0]];
    for (i, &j) in js.iter().enumerate() {
        s += &gw.each[j];
        let next = js.get(i + 1).map(|&n| n as i64).unwrap_or(p);
        s += &gw.pair * BigRational::from_integer((j as i64 * next).into());
    }
    s / rat(3, 1)
}

/// `a_q^{(p)}(j₁…j_q)` for a single tuple.
pub fn a_weight(p: u32, js: &[usize]) -> BigRational {
    let p = p as i64;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let mut last = 0i64;
    for &j in js {
        let j = j as i64;
        num *= -12 * j * (j - last);
        den *= d(p, j);
        last = j;
    }
    num *= p - last;
    BigRational::new(num, den)
}

/// `C^{(p)} = (28/27)p³ + Σ a_q g_q` by enumerating all tuples.
///
/// The weights `g_q` are scaled by a common integer `L` so that every
/// accumulation is in integers; the final division is by `27·D·L`.
pub fn cp_bruteforce(p: u32) -> Result<BigRational> {
    check_p(p, CP_BRUTE_MAX)?;
    let p = p as i64;
    let gw = g_weights(p);
    let mut l = BigInt::from(3);
    for r in gw.each.iter().chain(&gw.first).chain([&gw.pair, &gw.konst]) {
        l = l.lcm(r.denom());
    }
    let scale = |r: &BigRational| -> BigInt {
        let v = r * BigRational::from_integer(l.clone());
        debug_assert!(v.is_integer());
        v.to_integer()
    };
    let each: Vec<BigInt> = gw.each.iter().map(scale).collect();
    let first: Vec<BigInt> = gw.first.iter().map(scale).collect();
    let pair = scale(&gw.pair);
    let konst = scale(&gw.konst);

    // acc: D·a numerator so far; g: L·(3 g) accumulated so far, both over the
    // prefix; the closing factor (p − last) and pair (last · p) are added at
    // the leaf
    fn walk(
        p: i64,
        next: i64,
        last: i64,
        acc: &BigInt,
        g: &BigInt,
        w: (&[BigInt], &BigInt),
        out: &mut BigInt,
    ) {
        let (each, pair) = w;
        if next == p {
            let gl = g + pair * (last * p);
            *out += acc * (p - last) * gl;
            return;
        }
        walk(p, next + 1, last, &(acc * d(p, next)), g, w, out);
        let g2 = g + &each[next as usize] + pair * (last * next);
        walk(p, next + 1, next, &(acc * (-12 * next * (next - last))), &g2, w, out);
    }

    let parts = by_first_index(p, |j1| match j1 {
        None => BigInt::zero(),
        Some(j1) => {
            let acc: BigInt = (1..j1).map(|j| BigInt::from(d(p, j))).product::<BigInt>() * (-12 * j1 * j1);
            let g = &konst + &first[j1 as usize] + &each[j1 as usize];
            let mut out = BigInt::zero();
            walk(p, j1 + 1, j1, &acc, &g, (&each, &pair), &mut out);
            out
        }
    });
    let sum: BigInt = parts.into_iter().sum();
    let dd = denominator(p);
    let lead = rat(28 * p * p * p, 27);
    Ok(lead + BigRational::new(sum, dd * l * 3))
}

/// `p(p+1)²/3`.
pub fn cp_expected(p: u32) -> BigRational {
    let p = p as i64;
    rat(p * (p + 1) * (p + 1), 3)
}

/// A convolution identity `Σ_{ℓ₁+ℓ₂=ℓ} w(ℓ₁, ℓ₂) = closed(ℓ)`.
pub struct SumIdentity {
    pub name: &'static str,
    pub term: fn(i128, i128) -> i128,
    /// Closed form as `(numerator(ℓ), denominator)`.
    pub closed: fn(i128) -> (i128, i128),
}

/// The five convolution identities.
pub fn sum_identities() -> Vec<SumIdentity> {
    vec![
        SumIdentity { name: "l1 l2", term: |a, b| a * b, closed: |l| (l * (l * l - 1), 6) },
        SumIdentity { name: "l1^2 l2^2", term: |a, b| a * a * b * b, closed: |l| ((l * l - 1) * l * (l * l + 1), 30) },
        SumIdentity {
            name: "l1 l2 (5 l2^2 + 3 l2 - 5)",
            term: |a, b| a * b * (5 * b * b + 3 * b - 5),
            closed: |l| ((l * l - 1) * l * (l * l + l - 4), 4),
        },
        SumIdentity {
            name: "l2 l1 (l1 - 1)(l1 + 2)",
            term: |a, b| b * a * (a - 1) * (a + 2),
            closed: |l| ((l * l - 1) * l * (l - 2) * (3 * l + 11), 60),
        },
        SumIdentity { name: "l1 l2^2", term: |a, b| a * b * b, closed: |l| ((l * l - 1) * l * l, 12) },
    ]
}

/// First `(identity, ℓ)` in `2..=l_max` where a convolution identity fails,
/// or `None` when all hold.
pub fn sum_identities_check(l_max: u32) -> Result<Option<(&'static str, u32)>> {
    if l_max > 200 {
        return Err(Error::InvalidArgument(format!("ℓ_max must be ≤ 200, got {l_max}")));
    }
    for id in sum_identities() {
        for l in 2..=l_max as i128 {
            let lhs: i128 = (1..l).map(|a| (id.term)(a, l - a)).sum();
            let (n, dd) = (id.closed)(l);
            if n % dd != 0 || lhs != n / dd {
                return Ok(Some((id.name, l as u32)));
            }
        }
    }
    Ok(None)
}

/// Sign of a rational as `−1`, `0` or `1`.
pub fn sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beta1::ascending_tuples;

    #[test]
    fn p2_by_hand() {
        // 2 + (−12·1·1·1)/6
        assert_eq!(a_weight(2, &[1]), rat(-2, 1));
        assert!(ap_bruteforce(2).unwrap().is_zero());
    }

    #[test]
    fn p3_matrix() {
        let m = TridiagIII::new(3).dense();
        let want = [[36, -18, 0], [-24, 12, 0], [0, -18, 1]];
        for k in 0..3 {
            for j in 0..3 {
                assert_eq!(m[k][j], BigInt::from(want[k][j]));
            }
        }
        // 2×2 expansion along the last column
        assert_eq!(BigInt::from(36 * 12 - 18 * 24), BigInt::zero());
        assert!(TridiagIII::new(3).det().is_zero());
        assert!(kernel_check(3));
    }

    #[test]
    fn routes_agree_on_a_nonzero_variant() {
        // the recurrence matches cofactor expansion on a matrix with nonzero det
        let mut m = TridiagIII::new(5);
        m.diag[0] += 3;
        let dense = m.dense();
        assert_eq!(m.det(), det_dense(&dense));
        assert!(!m.det().is_zero());
    }

    fn det_dense(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut s = BigInt::zero();
        for c in 0..n {
            if m[0][c].is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigInt>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, x)| x.clone()).collect()).collect();
            let t = &m[0][c] * det_dense(&minor);
            if c % 2 == 0 {
                s += t;
            } else {
                s -= t;
            }
        }
        s
    }

    #[test]
    fn enumeration_matches_tuple_by_tuple_sum() {
        for p in 2..=7u32 {
            let mut a = rat(p as i64, 1);
            let mut c = rat(28 * (p as i64).pow(3), 27);
            for q in 1..p as usize {
                for js in ascending_tuples(p as usize, q) {
                    let w = a_weight(p, &js);
                    c += &w * g_weight(p, &js);
                    a += w;
                }
            }
            assert_eq!(a, ap_bruteforce(p).unwrap());
            assert_eq!(c, cp_bruteforce(p).unwrap());
        }
    }

    #[test]
    fn small_values() {
        assert_eq!(cp_bruteforce(2).unwrap(), rat(6, 1));
        assert_eq!(cp_bruteforce(3).unwrap(), rat(16, 1));
        for p in 2..=12 {
            assert!(ap_chain(p).unwrap().is_zero());
            assert!(ap_determinant(p).unwrap().is_zero());
        }
    }

    #[test]
    fn convolution_examples() {
        let ids = sum_identities();
        let conv = |i: usize, l: i128| -> i128 { (1..l).map(|a| (ids[i].term)(a, l - a)).sum() };
        assert_eq!(conv(0, 3), 4);
        assert_eq!(conv(1, 2), 1);
        assert_eq!(conv(4, 4), 20);
        assert_eq!(sum_identities_check(50).unwrap(), None);
    }
}
