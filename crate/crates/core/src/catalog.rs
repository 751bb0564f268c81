//! Seeded random parameter functions for the verification suites.
//!
//! Karamata amplitudes are kept small enough that `φ(λt)/φ(t)` stays within
//! `[0.95, 1.05]` at `t = 10⁹` for `λ ∈ {1/2, 2, 10}`.

use std::f64::consts::E;

use num_complex::Complex64;
use rand::Rng;

use crate::hormander::FourierDistribution;
use crate::param::{AlphaSpec, BetaSpec, KaramataForm, ParamFn};

/// Fixed Karamata data `(α, β, r)`.
pub fn karamata_catalog() -> Vec<(AlphaSpec, BetaSpec, f64)> {
    vec![
        (AlphaSpec::Zero, BetaSpec::Const { b: 0.0 }, 1.0),
        (AlphaSpec::Zero, BetaSpec::SinLogLog { b: 0.3 }, 1.0),
        (AlphaSpec::InvLog { a: 0.25 }, BetaSpec::Const { b: 0.0 }, E),
        (
            AlphaSpec::InvLog { a: -0.25 },
            BetaSpec::Const { b: 0.5 },
            2.0,
        ),
        (
            AlphaSpec::InvLog { a: 0.4 },
            BetaSpec::Step { b: 0.2, at: 50.0 },
            E,
        ),
        (
            AlphaSpec::InvPow { a: 0.5, p: 0.5 },
            BetaSpec::Const { b: 0.0 },
            1.0,
        ),
        (
            AlphaSpec::InvPow { a: -1.0, p: 1.0 },
            BetaSpec::SinLogLog { b: 0.2 },
            1.0,
        ),
        (AlphaSpec::SinLog { a: 0.3 }, BetaSpec::Const { b: -0.1 }, E),
        (
            AlphaSpec::SinLog { a: -0.3 },
            BetaSpec::SinLogLog { b: 0.1 },
            E,
        ),
    ]
}

pub fn karamata_members() -> Vec<ParamFn> {
    karamata_catalog()
        .into_iter()
        .map(|(a, b, r)| ParamFn::karamata(KaramataForm::new(a, b, r).expect("catalog entry")))
        .collect()
}

fn log_exponents<R: Rng>(rng: &mut R) -> Vec<f64> {
    let levels = rng.gen_range(1..=3);
    (0..levels).map(|_| rng.gen_range(-2.0..=2.0)).collect()
}

/// A quasislowly varying function: constant, logarithmic multiscale or
/// Karamata form, possibly multiplied by a second one.
pub fn random_qsv<R: Rng>(rng: &mut R) -> ParamFn {
    let leaf = |rng: &mut R| -> ParamFn {
        match rng.gen_range(0..10) {
            0 => ParamFn::one(),
            1 => ParamFn::constant(rng.gen_range(0.5..=2.0)).expect("positive"),
            2..=7 => ParamFn::log_multiscale(&log_exponents(rng)).expect("valid exponents"),
            _ => {
                let all = karamata_members();
                all[rng.gen_range(0..all.len())].clone()
            }
        }
    };
    let first = leaf(rng);
    if rng.gen_bool(0.25) {
        first * leaf(rng)
    } else {
        first
    }
}

/// `t^θ · φ(t)` with `θ` drawn from `[lo, hi]` and quasislowly varying `φ`;
/// declared index `θ`.
pub fn random_indexed<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> ParamFn {
    let theta = if lo == hi { lo } else { rng.gen_range(lo..=hi) };
    ParamFn::power(theta) * random_qsv(rng)
}

/// Eigenvalues drawn log-uniformly from `[lo, hi]`.
pub fn log_uniform<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|_| rng.gen_range(a..=b).exp().clamp(lo, hi))
        .collect()
}

/// Up to `max_modes` random modes in the band `|k_i| <= band` with
/// coefficients uniform in the unit square.
pub fn random_distribution<R: Rng>(
    rng: &mut R,
    n: usize,
    band: u64,
    max_modes: usize,
) -> FourierDistribution {
    let mut u = FourierDistribution::new(n, band).expect("n >= 1");
    let count = rng.gen_range(1..=max_modes.max(1));
    let b = band as i64;
    for _ in 0..count {
        let k: Vec<i64> = (0..n).map(|_| rng.gen_range(-b..=b)).collect();
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        u.set(k, c).expect("mode inside band");
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::geometric_grid;
    use crate::rng::instance_rng;

    #[test]
    fn catalog_members_are_declared_qsv() {
        for f in karamata_members() {
            assert!(f.is_declared_qsv());
        }
        let mut rng = instance_rng(1, 0);
        for _ in 0..200 {
            assert!(random_qsv(&mut rng).is_declared_qsv());
            let f = random_indexed(&mut rng, 0.0, 1.0);
            let theta = f.declared_index().unwrap();
            assert!((0.0..=1.0).contains(&theta));
        }
    }

    #[test]
    fn random_functions_are_positive_on_default_range() {
        let mut rng = instance_rng(2, 0);
        let grid = geometric_grid(1e-3, 1e9, 64);
        for _ in 0..100 {
            let f = random_indexed(&mut rng, 0.0, 1.0);
            for &t in &grid {
                let v = f.eval(t).unwrap();
                assert!(v > 0.0 && v.is_finite());
            }
        }
    }

    #[test]
    fn log_uniform_bounds() {
        let mut rng = instance_rng(3, 0);
        for l in log_uniform(&mut rng, 1000, 1.0, 1e8) {
            assert!((1.0..=1e8).contains(&l));
        }
    }
}
