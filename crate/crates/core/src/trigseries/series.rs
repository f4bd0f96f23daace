use super::poly::{mul_poly, Parity, TrigPoly};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::scalar::{Scalar, ScalarField};

/// Truncated power series `Σ_{ℓ=0}^{N} ε^ℓ f_ℓ(x)` with `f_ℓ` of order `ℓ`
/// in a fixed basis.
///
/// `ε` is only an index: nothing here stores its value.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsSeries<S> {
    parity: Parity,
    terms: Vec<TrigPoly<S>>,
}

impl<S: Scalar> EpsSeries<S> {
    pub fn zero<F: ScalarField<Elem = S>>(n: usize, parity: Parity, fld: &F) -> Self {
        let terms = (0..=n).map(|l| TrigPoly::zero(l, parity, fld)).collect();
        EpsSeries { parity, terms }
    }

    /// The constant series `1`.
    pub fn one<F: ScalarField<Elem = S>>(n: usize, fld: &F) -> Self {
        let mut s = Self::zero(n, Parity::Evn, fld);
        s.terms[0].set(0, fld.int(1));
        s
    }

    pub fn from_terms(parity: Parity, terms: Vec<TrigPoly<S>>) -> Result<Self> {
        for (l, t) in terms.iter().enumerate() {
            if t.order() != l || t.parity() != parity {
                return Err(Error::Parity(format!(
                    "term {l} has order {} and basis {:?}, expected {parity:?}",
                    t.order(),
                    t.parity()
                )));
            }
        }
        Ok(EpsSeries { parity, terms })
    }

    /// Series of `x`-independent values `Σ ε^ℓ v_ℓ`.
    ///
    /// Odd orders cannot hold a constant and must be zero.
    pub fn constants<F: ScalarField<Elem = S>>(values: &[S], fld: &F) -> Result<Self> {
        let n = values.len().saturating_sub(1);
        let mut s = Self::zero(n, Parity::Evn, fld);
        for (l, v) in values.iter().enumerate() {
            if l % 2 == 0 {
                s.terms[l].set(0, v.clone());
            } else if !v.is_zero() {
                return Err(Error::Parity(format!("constant at odd order {l}")));
            }
        }
        Ok(s)
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn terms(&self) -> &[TrigPoly<S>] {
        &self.terms
    }

    pub fn term(&self, l: usize) -> &TrigPoly<S> {
        &self.terms[l]
    }

    pub fn set_term(&mut self, l: usize, t: TrigPoly<S>) {
        assert!(t.order() == l && t.parity() == self.parity, "term shape mismatch");
        self.terms[l] = t;
    }

    pub fn term_mut(&mut self, l: usize) -> &mut TrigPoly<S> {
        &mut self.terms[l]
    }

    /// Truncate or zero-pad to order `n`.
    pub fn resized<F: ScalarField<Elem = S>>(&self, n: usize, fld: &F) -> Self {
        let terms = (0..=n)
            .map(|l| self.terms.get(l).cloned().unwrap_or_else(|| TrigPoly::zero(l, self.parity, fld)))
            .collect();
        EpsSeries { parity: self.parity, terms }
    }

    /// Constant terms `f_ℓ^{[0]}`, zero at odd orders.
    pub fn constant_part<F: ScalarField<Elem = S>>(&self, fld: &F) -> Vec<S> {
        self.terms.iter().map(|t| t.get(0).cloned().unwrap_or_else(|| fld.zero())).collect()
    }

    /// Maximal coefficients `f_ℓ^{[ℓ]}`.
    pub fn leading(&self) -> Vec<Option<S>> {
        self.terms.iter().map(|t| t.leading().cloned()).collect()
    }

    /// Convert every coefficient, keeping the shape.
    pub fn try_map_into<T: Scalar>(&self, f: impl Fn(&S) -> Result<T>) -> Result<EpsSeries<T>> {
        let terms = self.terms.iter().map(|t| t.try_map_into(&f)).collect::<Result<Vec<_>>>()?;
        Ok(EpsSeries { parity: self.parity, terms })
    }

    fn zip(&self, other: &Self, f: impl Fn(&TrigPoly<S>, &TrigPoly<S>) -> TrigPoly<S>) -> Self {
        assert_eq!(self.parity, other.parity, "series of different basis");
        let n = self.order().min(other.order());
        let terms = (0..=n).map(|l| f(&self.terms[l], &other.terms[l])).collect();
        EpsSeries { parity: self.parity, terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, TrigPoly::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, TrigPoly::sub)
    }

    pub fn neg(&self) -> Self {
        self.map_terms(|t| t.neg())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map_terms(|t| t.scale(s))
    }

    fn map_terms(&self, f: impl Fn(&TrigPoly<S>) -> TrigPoly<S>) -> Self {
        EpsSeries { parity: self.parity, terms: self.terms.iter().map(f).collect() }
    }

    /// Cauchy product truncated at `n`.
    pub fn mul<F: ScalarField<Elem = S>>(&self, other: &Self, n: usize, fld: &F) -> Self {
        let parity = self.parity.times(other.parity);
        let mut terms = Vec::with_capacity(n + 1);
        for l in 0..=n {
            let mut acc = TrigPoly::zero(l, parity, fld);
            for l1 in 0..=l.min(self.order()) {
                let l2 = l - l1;
                if l2 > other.order() {
                    continue;
                }
                let (a, b) = (&self.terms[l1], &other.terms[l2]);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc.add(&mul_poly(a, b, fld));
            }
            terms.push(acc);
        }
        EpsSeries { parity, terms }
    }

    /// `self^k` truncated at `n`; `self^0 = 1`.
    pub fn pow<F: ScalarField<Elem = S>>(&self, k: usize, n: usize, fld: &F) -> Self {
        let mut out = EpsSeries::one(n, fld);
        for _ in 0..k {
            out = out.mul(self, n, fld);
        }
        out
    }

    /// The powers `self^0, …, self^k` truncated at `n`.
    pub fn powers<F: ScalarField<Elem = S>>(&self, k: usize, n: usize, fld: &F) -> Vec<Self> {
        let mut out = vec![EpsSeries::one(n, fld)];
        for i in 0..k {
            let next = out[i].mul(self, n, fld);
            out.push(next);
        }
        out
    }

    /// Multiply harmonic `κ` by `m(κ)` in every term.
    pub fn multiplier(&self, m: impl Fn(usize) -> S) -> Self {
        self.map_terms(|t| t.map(|k, c| c.clone() * m(k)))
    }

    /// `∂_x`: `cos κx ↦ −κ sin κx`, `sin κx ↦ κ cos κx`.
    pub fn dx<F: ScalarField<Elem = S>>(&self, fld: &F) -> Self {
        let sign = match self.parity {
            Parity::Evn => -1,
            Parity::Odd => 1,
        };
        EpsSeries {
            parity: self.parity.flip(),
            terms: self.terms.iter().map(|t| t.flip_with(fld, |k, c| c.clone() * fld.int(sign * k as i64))).collect(),
        }
    }

    /// `∂_x^m`.
    pub fn dx_n<F: ScalarField<Elem = S>>(&self, m: usize, fld: &F) -> Self {
        (0..m).fold(self.clone(), |s, _| s.dx(fld))
    }

    /// Hilbert transform: `cos κx ↦ sin κx`, `sin κx ↦ −cos κx`, constants to zero.
    pub fn hilbert<F: ScalarField<Elem = S>>(&self, fld: &F) -> Self {
        let neg = self.parity == Parity::Odd;
        EpsSeries {
            parity: self.parity.flip(),
            terms: self
                .terms
                .iter()
                .map(|t| t.flip_with(fld, |_, c| if neg { -c.clone() } else { c.clone() }))
                .collect(),
        }
    }

    /// `|D|^m`.
    pub fn abs_d<F: ScalarField<Elem = S>>(&self, m: u32, fld: &F) -> Self {
        if m == 0 {
            return self.clone();
        }
        self.multiplier(|k| fld.int((k as i64).pow(m)))
    }

    /// `G₀ = |D| tanh(h|D|)`.
    pub fn g0<F: ScalarField<Elem = S>>(&self, fld: &F) -> Self {
        self.multiplier(|k| if k == 0 { fld.zero() } else { fld.int(k as i64) * fld.tanh_mult(k) })
    }

    /// `f(x + g(x))` for `g` in the sine basis with `g_0 = 0`, truncated at `n`.
    ///
    /// Uses `[f(x+g)]_ℓ = Σ_m (1/m!) Σ_{ℓ₁+ℓ'=ℓ} ∂_x^m f_{ℓ₁} · [g^m]_{ℓ'}`.
    pub fn compose<F: ScalarField<Elem = S>>(&self, g: &Self, n: usize, fld: &F) -> Result<Self> {
        if g.parity != Parity::Odd {
            return Err(Error::Parity("composition shift must be a sine series".into()));
        }
        let f = self.resized(n, fld);
        let mut out = f.clone();
        let mut gm = EpsSeries::one(n, fld);
        let mut df = f;
        let mut fact = 1i64;
        for m in 1..=n {
            gm = gm.mul(g, n, fld);
            df = df.dx(fld);
            fact *= m as i64;
            out = out.add(&df.mul(&gm, n, fld).scale(&fld.ratio(1, fact)));
        }
        Ok(out)
    }

    /// `1/(1 + self)` for a cosine series without order zero term.
    pub fn reciprocal<F: ScalarField<Elem = S>>(&self, n: usize, fld: &F) -> Result<Self> {
        if self.parity != Parity::Evn || !self.terms[0].is_zero() {
            return Err(Error::InvalidArgument("reciprocal needs a cosine series with zero order-0 term".into()));
        }
        let mut out = EpsSeries::one(n, fld);
        let mut pk = EpsSeries::one(n, fld);
        let neg = self.neg();
        for _ in 1..=n {
            pk = pk.mul(&neg, n, fld);
            if pk.terms.iter().all(TrigPoly::is_zero) {
                break;
            }
            out = out.add(&pk);
        }
        Ok(out)
    }

    /// `H coth((h + f)|D|) self` for a constant series `f` with `f_0 = 0`.
    ///
    /// Expanded as `Σ_m (1/m!) |D|^m coth^{(m)}(h|D|) self · f^m`; harmonic
    /// zero is annihilated by `H` before the singular `coth(0)` is needed.
    pub fn hilbert_coth<F: ScalarField<Elem = S>>(&self, f: &Self, n: usize, fld: &F) -> Result<Self> {
        if self.parity != Parity::Evn {
            return Err(Error::Parity("coth multiplier expects a cosine series".into()));
        }
        if f.terms.iter().any(|t| t.order() > 0 && t.harmonics().any(|(k, c)| k > 0 && !c.is_zero()))
            || !f.terms[0].is_zero()
        {
            return Err(Error::InvalidArgument("depth shift must be constant with zero order-0 term".into()));
        }
        let u = self.resized(n, fld);
        let mut out = EpsSeries::zero(n, Parity::Odd, fld);
        let mut fm = EpsSeries::one(n, fld);
        let mut fact = 1i64;
        for m in 0..=n {
            if m > 0 {
                fm = fm.mul(f, n, fld);
                fact *= m as i64;
                if fm.terms.iter().all(TrigPoly::is_zero) {
                    break;
                }
            }
            let inv_fact = fld.ratio(1, fact);
            let um = u.multiplier(|k| {
                if k == 0 {
                    fld.zero()
                } else {
                    fld.int((k as i64).pow(m as u32)) * fld.coth_deriv(k, m) * &inv_fact
                }
            });
            out = out.add(&um.hilbert(fld).mul(&fm, n, fld));
        }
        Ok(out)
    }
}

impl EpsSeries<Real> {
    /// `Σ ε^ℓ f_ℓ(x)`.
    pub fn eval(&self, eps: &Real, x: &Real) -> Real {
        let mut acc = x.zero_like();
        let mut e = eps.one_like();
        for t in &self.terms {
            acc = acc + t.eval(x) * &e;
            e = e * eps;
        }
        acc
    }
}
