//! Homogeneous jets `G_j(η)` of the Dirichlet–Neumann operator.

use crate::scalar::ScalarField;
use crate::trigseries::{EpsSeries, Parity};

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// `|D|^k` for even `k`, `G₀|D|^{k−1}` for odd `k`.
fn alternating<F: ScalarField>(u: &EpsSeries<F::Elem>, k: usize, fld: &F) -> EpsSeries<F::Elem> {
    if k % 2 == 0 {
        u.abs_d(k as u32, fld)
    } else {
        u.abs_d(k as u32 - 1, fld).g0(fld)
    }
}

/// `G_0 ψ, G_1(η) ψ, …, G_{jmax}(η) ψ`, each truncated at `n`.
///
/// The recursion, for `j ≥ 1`, reads
/// `G_j = −(1/j!) M_j ∂_x η^j ∂_x − Σ_{i<j} (1/(j−i)!) A_{j−i} η^{j−i} G_i`
/// where `A_k` is `|D|^k` for even `k` and `G₀|D|^{k−1}` for odd `k`, and
/// `M_j` is `G₀|D|^{j−2}` for even `j` and `|D|^{j−1}` for odd `j`.
pub fn dn_jets<F: ScalarField>(
    eta: &EpsSeries<F::Elem>,
    psi: &EpsSeries<F::Elem>,
    jmax: usize,
    n: usize,
    fld: &F,
) -> Vec<EpsSeries<F::Elem>> {
    assert_eq!(eta.parity(), Parity::Evn, "η must be a cosine series");
    assert_eq!(psi.parity(), Parity::Odd, "ψ must be a sine series");
    let psi = psi.resized(n, fld);
    let eta_pow = eta.powers(jmax, n, fld);
    let psi_x = psi.dx(fld);
    let mut jets = vec![psi.g0(fld)];
    for j in 1..=jmax {
        let inner = eta_pow[j].mul(&psi_x, n, fld).dx(fld);
        let lead = if j % 2 == 0 { inner.abs_d(j as u32 - 2, fld).g0(fld) } else { inner.abs_d(j as u32 - 1, fld) };
        let mut gj = lead.scale(&fld.ratio(-1, factorial(j)));
        for (i, gi) in jets.iter().enumerate() {
            let k = j - i;
            let term = alternating(&eta_pow[k].mul(gi, n, fld), k, fld);
            gj = gj.sub(&term.scale(&fld.ratio(1, factorial(k))));
        }
        jets.push(gj);
    }
    jets
}

/// `G_j(η) ψ` truncated at `n`.
pub fn dn_apply<F: ScalarField>(
    j: usize,
    eta: &EpsSeries<F::Elem>,
    psi: &EpsSeries<F::Elem>,
    n: usize,
    fld: &F,
) -> EpsSeries<F::Elem> {
    dn_jets(eta, psi, j, n, fld).pop().unwrap()
}

/// `G(η) ψ = Σ_j G_j(η) ψ` truncated at `n`, for `η` without order zero term.
pub fn dn_full<F: ScalarField>(
    eta: &EpsSeries<F::Elem>,
    psi: &EpsSeries<F::Elem>,
    n: usize,
    fld: &F,
) -> EpsSeries<F::Elem> {
    let jets = dn_jets(eta, psi, n.saturating_sub(1), n, fld);
    let mut out = EpsSeries::zero(n, Parity::Odd, fld);
    for g in &jets {
        out = out.add(g);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::GradedScalar;
    use crate::scalar::Symbolic;

    #[test]
    fn first_jet_by_hand() {
        let fld = Symbolic::new();
        let n = 2;
        let mut eta = EpsSeries::zero(n, Parity::Evn, &fld);
        eta.term_mut(1).set(1, fld.int(1));
        let mut psi = EpsSeries::zero(n, Parity::Odd, &fld);
        psi.term_mut(1).set(1, fld.ch_inv());
        let g1 = dn_apply(1, &eta, &psi, n, &fld);
        // −∂x(η ψ_x) − G₀(η G₀ψ)
        let by_hand = eta
            .mul(&psi.dx(&fld), n, &fld)
            .dx(&fld)
            .add(&eta.mul(&psi.g0(&fld), n, &fld).g0(&fld))
            .neg();
        assert_eq!(g1, by_hand);
        assert!(g1.term(1).is_zero());
    }

    #[test]
    fn flat_surface_has_no_higher_jets() {
        let fld = Symbolic::new();
        let eta = EpsSeries::<GradedScalar>::zero(3, Parity::Evn, &fld);
        let mut psi = EpsSeries::zero(3, Parity::Odd, &fld);
        psi.term_mut(1).set(1, fld.ch_inv());
        let jets = dn_jets(&eta, &psi, 2, 3, &fld);
        assert!(jets[1..].iter().all(|g| g.terms().iter().all(|t| t.is_zero())));
    }
}
