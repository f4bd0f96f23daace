use crate::error::{Error, Result};
use crate::real::Real;
use crate::scalar::{Scalar, ScalarField};

/// Cosine (`Evn`) or sine (`Odd`) basis.
///
/// The names follow the parity of the underlying functions in `x`: cosine
/// polynomials are even, sine polynomials odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Evn,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Evn => Parity::Odd,
            Parity::Odd => Parity::Evn,
        }
    }

    /// Parity of a product.
    pub fn times(self, other: Parity) -> Parity {
        if self == other {
            Parity::Evn
        } else {
            Parity::Odd
        }
    }
}

/// Trigonometric polynomial of order `ℓ` carrying only the harmonics
/// `κ ≤ ℓ` with `κ ≡ ℓ (mod 2)`, and `κ ≥ 1` in the sine basis.
///
/// Coefficients are stored densely over that grid, lowest harmonic first.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly<S> {
    order: usize,
    parity: Parity,
    coeffs: Vec<S>,
}

/// Lowest stored harmonic for the given order and basis.
pub fn first_harmonic(order: usize, parity: Parity) -> usize {
    match (parity, order % 2) {
        (Parity::Odd, 0) => 2,
        (_, r) => r,
    }
}

fn grid_len(order: usize, parity: Parity) -> usize {
    let k0 = first_harmonic(order, parity);
    if order < k0 {
        0
    } else {
        (order - k0) / 2 + 1
    }
}

impl<S: Scalar> TrigPoly<S> {
    pub fn zero<F: ScalarField<Elem = S>>(order: usize, parity: Parity, fld: &F) -> Self {
        TrigPoly { order, parity, coeffs: vec![fld.zero(); grid_len(order, parity)] }
    }

    /// Build from coefficients listed on the harmonic grid.
    pub fn from_harmonics(order: usize, parity: Parity, coeffs: Vec<S>) -> Result<Self> {
        let n = grid_len(order, parity);
        if coeffs.len() != n {
            return Err(Error::Parity(format!(
                "order {order} {parity:?} holds {n} harmonics, got {}",
                coeffs.len()
            )));
        }
        Ok(TrigPoly { order, parity, coeffs })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn first_harmonic(&self) -> usize {
        first_harmonic(self.order, self.parity)
    }

    /// `(κ, coefficient)` pairs in increasing `κ`.
    pub fn harmonics(&self) -> impl Iterator<Item = (usize, &S)> {
        let k0 = self.first_harmonic();
        self.coeffs.iter().enumerate().map(move |(i, c)| (k0 + 2 * i, c))
    }

    fn index(&self, kappa: usize) -> Option<usize> {
        let k0 = self.first_harmonic();
        if kappa < k0 || kappa > self.order || (kappa - k0) % 2 != 0 {
            None
        } else {
            Some((kappa - k0) / 2)
        }
    }

    /// Coefficient of harmonic `κ`, or `None` when `κ` is off the grid.
    pub fn get(&self, kappa: usize) -> Option<&S> {
        self.index(kappa).map(|i| &self.coeffs[i])
    }

    /// Set harmonic `κ`.
    ///
    /// # Panics
    /// If `κ` is not on the grid of this order and basis.
    pub fn set(&mut self, kappa: usize, v: S) {
        let i = self.index(kappa).unwrap_or_else(|| {
            panic!("harmonic {kappa} not allowed at order {} {:?}", self.order, self.parity)
        });
        self.coeffs[i] = v;
    }

    /// The maximal coefficient, harmonic `ℓ` of order `ℓ`.
    pub fn leading(&self) -> Option<&S> {
        self.get(self.order)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Apply `f(κ, c)` to every coefficient, keeping order and basis.
    pub fn map(&self, f: impl Fn(usize, &S) -> S) -> Self {
        let coeffs = self.harmonics().map(|(k, c)| f(k, c)).collect();
        TrigPoly { order: self.order, parity: self.parity, coeffs }
    }

    fn zip(&self, other: &Self, f: impl Fn(S, &S) -> S) -> Self {
        assert_eq!(
            (self.order, self.parity),
            (other.order, other.parity),
            "trigonometric polynomials of different shape"
        );
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a.clone(), b)).collect();
        TrigPoly { order: self.order, parity: self.parity, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.map(|_, c| -c.clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|_, c| c.clone() * s)
    }

    /// Convert every coefficient, keeping the shape.
    pub fn try_map_into<T>(&self, f: impl Fn(&S) -> Result<T>) -> Result<TrigPoly<T>> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<T>>>()?;
        Ok(TrigPoly { order: self.order, parity: self.parity, coeffs })
    }

    /// Same order in the other basis, with harmonic `κ` set to `f(κ, c)`.
    ///
    /// Harmonic zero has no sine counterpart and is dropped when moving to
    /// the sine basis.
    pub(crate) fn flip_with<F: ScalarField<Elem = S>>(&self, fld: &F, f: impl Fn(usize, &S) -> S) -> Self {
        let mut out = TrigPoly::zero(self.order, self.parity.flip(), fld);
        for (k, c) in self.harmonics() {
            if out.index(k).is_some() {
                out.set(k, f(k, c));
            }
        }
        out
    }
}

impl TrigPoly<Real> {
    /// Value at the point `x`.
    pub fn eval(&self, x: &Real) -> Real {
        let mut acc = x.zero_like();
        for (k, c) in self.harmonics() {
            let kx = x.int_like(k as i64) * x;
            let b = match self.parity {
                Parity::Evn => kx.cos(),
                Parity::Odd => kx.sin(),
            };
            acc = acc + c.clone() * b;
        }
        acc
    }
}

/// Sparse accumulator over harmonics `0..=ℓ`, used to build products.
pub(crate) struct Acc<S> {
    slots: Vec<Option<S>>,
}

impl<S: Scalar> Acc<S> {
    pub fn new(order: usize) -> Self {
        Acc { slots: vec![None; order + 1] }
    }

    pub fn add(&mut self, kappa: usize, v: S) {
        let slot = &mut self.slots[kappa];
        *slot = Some(match slot.take() {
            Some(a) => a + v,
            None => v,
        });
    }

    pub fn into_poly<F: ScalarField<Elem = S>>(self, order: usize, parity: Parity, fld: &F) -> TrigPoly<S> {
        let mut out = TrigPoly::zero(order, parity, fld);
        for (k, v) in self.slots.into_iter().enumerate() {
            if let Some(v) = v {
                match out.index(k) {
                    Some(i) => out.coeffs[i] = v,
                    None => assert!(
                        v.is_zero(),
                        "nonzero harmonic {k} outside the grid of order {order} {parity:?}"
                    ),
                }
            }
        }
        out
    }
}

/// Product of two trigonometric polynomials, by the product-to-sum rules.
pub fn mul_poly<F: ScalarField>(a: &TrigPoly<F::Elem>, b: &TrigPoly<F::Elem>, fld: &F) -> TrigPoly<F::Elem> {
    let order = a.order + b.order;
    let parity = a.parity.times(b.parity);
    let mut acc = Acc::new(order);
    let half = fld.ratio(1, 2);
    for (ka, ca) in a.harmonics() {
        if ca.is_zero() {
            continue;
        }
        for (kb, cb) in b.harmonics() {
            if cb.is_zero() {
                continue;
            }
            let w = half.clone() * ca.clone() * cb;
            let (sum, diff) = (ka + kb, ka.abs_diff(kb));
            match (a.parity, b.parity) {
                // cos a cos b = ½cos(a−b) + ½cos(a+b)
                (Parity::Evn, Parity::Evn) => {
                    acc.add(diff, w.clone());
                    acc.add(sum, w);
                }
                // sin a sin b = ½cos(a−b) − ½cos(a+b)
                (Parity::Odd, Parity::Odd) => {
                    acc.add(diff, w.clone());
                    acc.add(sum, -w);
                }
                // cos a sin b = ½sin(a+b) + ½sin(b−a)
                (Parity::Evn, Parity::Odd) | (Parity::Odd, Parity::Evn) => {
                    let (kc, ks) = if a.parity == Parity::Evn { (ka, kb) } else { (kb, ka) };
                    acc.add(sum, w.clone());
                    if ks > kc {
                        acc.add(ks - kc, w);
                    } else if kc > ks {
                        acc.add(kc - ks, -w);
                    }
                }
            }
        }
    }
    acc.into_poly(order, parity, fld)
}
