use proptest::prelude::*;
use pseudodot::oracle::tridiag::SymTridiagonal;
use pseudodot::specfun::{kummer_polynomial, kummer_polynomial_abs_sum, kummer_series, KummerArgs};
use pseudodot::spectra::solve_energy;
use pseudodot::verify::{case1_exponents, sigma_from_betas, BetaParams};
use pseudodot::{ConfinementParams, QuantumNumbers, Scenario};

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn sturm_counts_agree(
        diag in prop::collection::vec(-10.0..10.0f64, 2..60),
        shift in -15.0..15.0f64,
    ) {
        let off: Vec<f64> = (0..diag.len() - 1).map(|i| -1.0 - 0.1 * i as f64 % 0.7).collect();
        let t = SymTridiagonal::new(diag, off).unwrap();
        prop_assert_eq!(t.sturm_count(shift), t.sturm_sign_agreements(shift));
    }

    #[test]
    fn exponent_sum_identity(
        beta0 in 0.2..3.0f64,
        beta1 in -5.0..20.0f64,
        beta2 in 0.1..4.0f64,
        beta3 in 0.05..3.0f64,
    ) {
        if let Ok(p) = BetaParams::new(beta0, beta1, beta2, beta3) {
            let ex = case1_exponents(&p).unwrap();
            prop_assert!((ex.a + ex.b - (ex.beta - 2.0)).abs() <= 1e-12 * (1.0 + ex.a.abs() + ex.b.abs()));
        }
    }

    #[test]
    fn unit_beta0_gives_abs_beta3(beta3 in -5.0..5.0f64) {
        prop_assert_eq!(sigma_from_betas(1.0, beta3), beta3.abs());
    }

    #[test]
    fn polynomial_and_series_agree(n in 0u32..=10, b in 0.5..6.5f64, x in 0.0..20.0f64) {
        let p = kummer_polynomial(n, b, x);
        let s = kummer_series(KummerArgs::new(-f64::from(n), b, x)).unwrap();
        prop_assert!((p - s).abs() <= 1e-12 * kummer_polynomial_abs_sum(n, b, x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn exact_energy_grows_with_depth(de in 0.5..4.0f64, n in 0u32..=2, l in 0u32..=2) {
        let qn = QuantumNumbers::new(n, l);
        let lo = solve_energy(qn, &ConfinementParams::new(de, 1.0, 1.0).unwrap(), Scenario::ExactVariableMass).unwrap();
        let hi = solve_energy(qn, &ConfinementParams::new(de * 1.1, 1.0, 1.0).unwrap(), Scenario::ExactVariableMass).unwrap();
        prop_assert!(hi.energy > lo.energy);
        prop_assert!(lo.residual_ok());
    }
}
