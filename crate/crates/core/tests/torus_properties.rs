use hilbert_interp::catalog::{random_distribution, random_qsv};
use hilbert_interp::elliptic::{calculus_check, graph_norm_check, lifting_check, EllipticOperator};
use hilbert_interp::hormander::{
    bracket, hnorm, interpolation_identity_check, FourierDistribution, SmoothnessIndex,
};
use hilbert_interp::param::ParamFn;
use hilbert_interp::rng::instance_rng;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 128,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn interpolation_identity_holds(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 0);
        let n = rng.gen_range(1..=2);
        let band = rng.gen_range(1..=64);
        let u = random_distribution(&mut rng, n, band, 64);
        let idx = SmoothnessIndex::new(rng.gen_range(-4.0..4.0), random_qsv(&mut rng)).unwrap();
        let eps = rng.gen_range(0.05..3.0);
        let delta = rng.gen_range(0.05..3.0);
        let cmp = interpolation_identity_check(&u, &idx, eps, delta).unwrap();
        prop_assert!(cmp.agrees(1e-12), "{:?}", cmp);
    }

    #[test]
    fn calculus_and_lifting_identities(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 1);
        let n = rng.gen_range(1..=2);
        let band = rng.gen_range(1..=64);
        let u = random_distribution(&mut rng, n, band, 64);
        let idx = SmoothnessIndex::new(rng.gen_range(-4.0..4.0), random_qsv(&mut rng)).unwrap();
        prop_assert!(calculus_check(&u, &idx).unwrap().agrees(1e-12));
        let a = EllipticOperator::default();
        prop_assert!(lifting_check(&a, &u, &idx).unwrap().agrees(1e-12));
        let back = a.invert_calculus(&a.apply_calculus(&u, &idx).unwrap(), &idx).unwrap();
        for (k, c) in u.modes() {
            prop_assert!((back.get(k) - c).norm() <= 1e-14 * c.norm().max(1e-300));
        }
    }

    #[test]
    fn norm_grows_with_smoothness(seed in any::<u64>(), s1 in -4.0f64..4.0, gap in 0.0f64..3.0) {
        let mut rng = instance_rng(seed, 2);
        let u = random_distribution(&mut rng, 2, 32, 40);
        let phi = random_qsv(&mut rng);
        let lo = SmoothnessIndex::new(s1, phi.clone()).unwrap();
        let hi = SmoothnessIndex::new(s1 + gap, phi).unwrap();
        prop_assert!(hnorm(&u, &lo).unwrap() <= hnorm(&u, &hi).unwrap());
    }

    #[test]
    fn quadratic_form_bounded_below(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 3);
        let u = random_distribution(&mut rng, 2, 64, 64);
        let form: f64 = u.modes().map(|(k, c)| bracket(k).powi(2) * c.norm_sqr()).sum();
        let mass: f64 = u.modes().map(|(_, c)| c.norm_sqr()).sum();
        prop_assert!(form >= mass);
    }

    #[test]
    fn graph_ratio_within_bounds(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 4);
        let u = random_distribution(&mut rng, 1, 64, 32);
        let idx = SmoothnessIndex::new(rng.gen_range(0.0..4.0), random_qsv(&mut rng)).unwrap();
        let g = graph_norm_check(&u, &idx).unwrap();
        prop_assert!(g.ratio >= 1.0 - 1e-15);
        prop_assert!(g.ratio <= g.bound * (1.0 + 1e-15));
    }
}

#[test]
fn order_zero_norm_is_coefficient_norm() {
    let mut rng = instance_rng(5, 0);
    for _ in 0..50 {
        let u = random_distribution(&mut rng, 2, 16, 30);
        let l2 = u.modes().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt();
        assert_eq!(hnorm(&u, &SmoothnessIndex::sobolev(0.0)).unwrap(), l2);
    }
}

#[test]
fn refinement_along_high_modes() {
    // Single high modes: hnorm(s, φ)/hnorm(s, 1) = φ(⟨K⟩).
    let logs = ParamFn::log_multiscale(&[1.0]).unwrap();
    let cubed = ParamFn::log_multiscale(&[3.0]).unwrap();
    let mut prev = 0.0;
    for p in 1..=6 {
        let k = 10i64.pow(p);
        let u = FourierDistribution::single_mode(&[k], Complex64::new(1.0, 0.0)).unwrap();
        let plain = hnorm(&u, &SmoothnessIndex::sobolev(0.5)).unwrap();
        let ratio = hnorm(&u, &SmoothnessIndex::new(0.5, logs.clone()).unwrap()).unwrap() / plain;
        let b = bracket(&[k]);
        assert!((ratio - (b + std::f64::consts::E).ln()).abs() <= 1e-12 * ratio);
        assert!(ratio > prev);
        prev = ratio;
    }
    let u = FourierDistribution::single_mode(&[1_000_000], Complex64::new(1.0, 0.0)).unwrap();
    let plain = hnorm(&u, &SmoothnessIndex::sobolev(0.0)).unwrap();
    let grown = hnorm(&u, &SmoothnessIndex::new(0.0, cubed).unwrap()).unwrap() / plain;
    assert!(grown > 1e3);
}
