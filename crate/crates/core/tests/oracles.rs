use isola::beta1::{beta1_eval, beta1_roots, ent_coeff, shallow_constant};
use isola::collision::{collision_tables, Sign};
use isola::linearization::numeric_coeffs;
use isola::spectrum::{build_truncated, trace_isola, IsolaParams, OperatorSymbols};
use num_complex::Complex64;

#[test]
fn p2_shallow_constant_is_minus_nine_sixteenths() {
    // −√(3/3) · (3/8) · 4 · 9 / 24
    let by_hand = -1.0 * 0.375 * 4.0 * 9.0 / 24.0;
    assert_eq!(by_hand, -0.5625);
    assert!((shallow_constant(2) - by_hand).abs() < 1e-15);
}

#[test]
fn single_zero_for_p2() {
    let wide = beta1_roots(2, 0.5, 3.0, 200, 128).unwrap();
    assert_eq!(wide.roots.len(), 1);
    assert!((wide.roots[0] - 1.84940).abs() < 1e-3);
    assert!(beta1_roots(2, 2.0, 3.0, 100, 128).unwrap().roots.is_empty());
}

#[test]
fn beta1_negative_in_shallow_water() {
    for p in 2..=5 {
        let b = beta1_eval(p, 0.05, 128).unwrap().beta1.to_f64();
        assert!(b < 0.0, "p = {p}: β₁ = {b}");
    }
}

fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
    v.sort_by(|a, b| (a.im, a.re).partial_cmp(&(b.im, b.re)).unwrap());
    v
}

#[test]
fn reflected_floquet_exponent_conjugates_spectrum() {
    let lin = numeric_coeffs(4, 1.0, 128).unwrap();
    let sym = OperatorSymbols::new(&lin, 0.05, 4).unwrap();
    for mu in [0.11, 0.27, 0.4] {
        let a = sorted(build_truncated(&sym, mu, 12).eigenvalues().unwrap().iter().map(|z| z.conj()).collect());
        let b = sorted(build_truncated(&sym, -mu, 12).eigenvalues().unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-10, "μ = {mu}: {x} vs {y}");
        }
    }
}

#[test]
fn isola_centre_drifts_at_second_order() {
    let mut ratios = Vec::new();
    for eps in [0.02, 0.04, 0.08] {
        let mut pr = IsolaParams::new(2, 1.0, eps);
        pr.samples = 16;
        let t = trace_isola(&pr).unwrap();
        ratios.push((t.center_im - t.predictions.omega_star) / (eps * eps));
    }
    for r in &ratios {
        assert!(r.abs() < 2.0, "drift ratios {ratios:?}");
    }
    let (lo, hi) = ratios.iter().fold((f64::MAX, f64::MIN), |(a, b), &r| (a.min(r), b.max(r)));
    assert!(hi - lo < 0.5 * lo.abs().max(hi.abs()), "drift ratios {ratios:?}");
}

#[test]
fn entanglement_shallow_scaling() {
    // |ent(ℓ, j > 0)| ~ h^{5/2−3ℓ}, |ent(ℓ, 0)| ~ h^{7/2−3ℓ}
    let p = 3;
    let scaled = |h: f64, l: usize, j: usize| {
        let cd = collision_tables(p, h, 256).unwrap();
        let lin = numeric_coeffs(p as usize, h, 256).unwrap();
        let v = ent_coeff(&cd, &lin, l, j, Sign::Plus, Sign::Minus).unwrap().value.abs().to_f64();
        let e = if j > 0 { 3.0 * l as f64 - 2.5 } else { 3.0 * l as f64 - 3.5 };
        v * h.powf(e)
    };
    for (l, j) in [(1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (3, 0)] {
        let (a, b) = (scaled(0.02, l, j), scaled(0.01, l, j));
        assert!(a > 0.0 && (a / b - 1.0).abs() < 0.1, "ℓ = {l}, j = {j}: {a} vs {b}");
    }
}
