use hilbert_interp::catalog::{log_uniform, random_indexed};
use hilbert_interp::couple::{
    duality_check, norm_psi, operator_norm, product_norm_check, reiteration_check,
    two_point_counterexample, SpectralCouple, SpectralOperator, SpectralVector,
};
use hilbert_interp::param::ParamFn;
use hilbert_interp::rng::instance_rng;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> SpectralVector {
    SpectralVector(
        (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

fn random_couple(rng: &mut ChaCha8Rng, n: usize) -> SpectralCouple {
    SpectralCouple::new(log_uniform(rng, n, 1.0, 1e8), 1.0).unwrap()
}

/// `σ_max(D_Y T D_X^{-1})` from a dense Hermitian eigensolve of `MᴴM`.
fn eigen_oracle(
    cx: &SpectralCouple,
    cy: &SpectralCouple,
    psi: &ParamFn,
    t: &SpectralOperator,
) -> f64 {
    let wx = cx.weights(psi).unwrap();
    let wy = cy.weights(psi).unwrap();
    let m = DMatrix::from_fn(t.rows(), t.cols(), |i, j| t.get(i, j) * (wy[i] / wx[j]));
    let gram = m.adjoint() * &m;
    let top = gram
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(0.0f64, f64::max);
    top.sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 96,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn operator_norm_matches_eigensolve(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 0);
        let nx = rng.gen_range(1..=8);
        let ny = rng.gen_range(1..=8);
        let cx = SpectralCouple::new(log_uniform(&mut rng, nx, 1.0, 1e3), 1.0).unwrap();
        let cy = SpectralCouple::new(log_uniform(&mut rng, ny, 1.0, 1e3), 1.0).unwrap();
        let psi = random_indexed(&mut rng, 0.0, 1.0);
        let data = (0..nx * ny)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let t = SpectralOperator::new(ny, nx, data).unwrap();
        let got = operator_norm(&cx, &cy, &psi, &t).unwrap();
        let want = eigen_oracle(&cx, &cy, &psi, &t);
        prop_assert!((got - want).abs() <= 1e-9 * want, "{} vs {}", got, want);
    }

    #[test]
    fn identity_operator_has_norm_one(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 1);
        let n = rng.gen_range(1..=8);
        let c = random_couple(&mut rng, n);
        let psi = random_indexed(&mut rng, 0.0, 1.0);
        let v = operator_norm(&c, &c, &psi, &SpectralOperator::identity(n)).unwrap();
        prop_assert!((v - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn two_point_closed_form_matches_operator(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 2);
        let psi = random_indexed(&mut rng, -1.0, 2.0);
        let s = 1.0 + rng.gen_range(1e-3..1e6);
        let t = 1.0 + rng.gen_range(1e-3..1e6);
        let tp = two_point_counterexample(&psi, s, t).unwrap();
        prop_assert!((tp.norm_ratio - tp.norm_ratio_operator).abs() <= 1e-12 * tp.norm_ratio);
    }

    #[test]
    fn exact_identities(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 3);
        let n = rng.gen_range(1..=128);
        let c = random_couple(&mut rng, n);
        let u = random_vector(&mut rng, n);
        let f = random_indexed(&mut rng, 0.0, 0.5);
        let g = random_indexed(&mut rng, 0.5, 1.0);
        let psi = random_indexed(&mut rng, 0.0, 1.0);
        prop_assert!(reiteration_check(&c, &f, &g, &psi, &u).unwrap().agrees(1e-12));
        prop_assert!(duality_check(&c, &psi, &u).unwrap().agrees(1e-12));

        let parts = rng.gen_range(1..=4);
        let cs: Vec<_> = (0..parts).map(|_| {
            let k = rng.gen_range(1..=32);
            random_couple(&mut rng, k)
        }).collect();
        let us: Vec<_> = cs.iter().map(|c| random_vector(&mut rng, c.dim())).collect();
        let cmp = product_norm_check(&cs, 1.0, &psi, &us).unwrap();
        prop_assert_eq!(cmp.lhs.to_bits(), cmp.rhs.to_bits());
    }

    #[test]
    fn embedding_chain(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 4);
        let n = rng.gen_range(1..=64);
        let c = random_couple(&mut rng, n);
        let u = random_vector(&mut rng, n);
        let psi = random_indexed(&mut rng, 0.05, 0.95);
        let w = c.weights(&psi).unwrap();
        let big_c = w.iter().map(|x| 1.0 / x).fold(0.0, f64::max);
        let big_c1 = w.iter().zip(c.eigenvalues()).map(|(x, l)| x / l).fold(0.0, f64::max);
        let n0 = norm_psi(&c, &ParamFn::one(), &u).unwrap();
        let npsi = norm_psi(&c, &psi, &u).unwrap();
        let n1 = norm_psi(&c, &ParamFn::power(1.0), &u).unwrap();
        prop_assert!(n0 <= big_c * npsi * (1.0 + 1e-12));
        prop_assert!(big_c * npsi <= big_c * big_c1 * n1 * (1.0 + 1e-12));
    }

    #[test]
    fn smaller_weights_give_smaller_norms(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 5);
        let n = rng.gen_range(1..=64);
        let c = random_couple(&mut rng, n);
        let u = random_vector(&mut rng, n);
        let psi = random_indexed(&mut rng, 0.0, 1.0);
        let chi = psi.clone() + random_indexed(&mut rng, 0.0, 1.0);
        let ok = c.eigenvalues().iter().all(|&l| psi.eval(l).unwrap() <= chi.eval(l).unwrap());
        prop_assert!(ok);
        prop_assert!(norm_psi(&c, &psi, &u).unwrap() <= norm_psi(&c, &chi, &u).unwrap());
    }
}
