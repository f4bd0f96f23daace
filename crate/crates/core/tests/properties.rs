use isola::collision::Sign;
use isola::trigseries::Parity;
use isola::verify::props;
use proptest::prelude::*;

fn parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Evn), Just(Parity::Odd)]
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

fn graded() -> impl Strategy<Value = (u8, i64, i64)> {
    (0u8..2, -9i64..10, 1i64..10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn trig_products_respect_parity(
        oa in 0usize..8, pa in parity(), ca in prop::collection::vec(-3.0f64..3.0, 6),
        ob in 0usize..8, pb in parity(), cb in prop::collection::vec(-3.0f64..3.0, 6),
        x in -4.0f64..4.0,
    ) {
        props::trig_product((oa, pa, &ca), (ob, pb, &cb), x).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn graded_products_respect_grading(a in graded(), b in graded(), h in 0.05f64..6.0) {
        props::graded_product(a, b, h).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn exact_and_numeric_pipelines_agree(h in 0.1f64..8.0) {
        props::exact_vs_numeric(h).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn entanglement_phases_are_real_or_imaginary(
        p in 2u32..=5, h in 0.2f64..4.0, l in 0usize..8, j in 0usize..8, s in sign(), sp in sign(),
    ) {
        props::phase_reality(p, h, l, j, s, sp).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn isola_points_are_symmetric_and_elliptic(case in 0usize..2, s in 0.0f64..1.0) {
        props::ellipse_symmetry(case, s).map_err(TestCaseError::fail)?;
    }
}

#[test]
fn seeded_sweep_is_clean() {
    for (name, fails, first) in isola::verify::property_sweep(20, 7) {
        assert_eq!(fails, 0, "{name}: {first:?}");
    }
}
