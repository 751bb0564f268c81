use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::opnorm::{operator_norm, operator_norm_with, NormMethod};
use super::{
    check_dim, norm_psi, norm_psi_squared, weighted_norm, SpectralCouple, SpectralOperator,
    SpectralVector,
};
use crate::compare::Comparison;
use crate::error::{Error, Result};
use crate::param::{
    default_grid, dual_chi, is_interpolation_parameter_evidence, quasiconcavity_certificate,
    reiteration_omega, ParamFn,
};
use crate::rng::instance_rng;

/// Largest admissible `max_k f(λ_k)/g(λ_k)`.
pub const MAX_REITERATION_RATIO: f64 = 1e12;

/// Norm of `u` in `[X_f, X_g]_ψ` two ways: through the couple `(X_f, X_g)`
/// whose generating operator has eigenvalues `g(λ_k)/f(λ_k)`, and directly
/// in `X_ω` with `ω = f·ψ(g/f)`.
pub fn reiteration_check(
    c: &SpectralCouple,
    f: &ParamFn,
    g: &ParamFn,
    psi: &ParamFn,
    u: &SpectralVector,
) -> Result<Comparison> {
    check_dim(c, u)?;
    let fw = c.weights(f)?;
    let gw = c.weights(g)?;
    let worst = fw.iter().zip(&gw).map(|(a, b)| a / b).fold(0.0, f64::max);
    if !(worst <= MAX_REITERATION_RATIO) {
        return Err(Error::UnboundedRatio(worst));
    }
    let mu: Vec<f64> = fw.iter().zip(&gw).map(|(a, b)| b / a).collect();
    let r = mu.iter().copied().fold(f64::INFINITY, f64::min);
    let inner = SpectralCouple::new(mu, r)?;
    let image = SpectralVector(u.0.iter().zip(&fw).map(|(z, w)| z * *w).collect());
    let lhs = norm_psi(&inner, psi, &image)?;
    let rhs = norm_psi(c, &reiteration_omega(f, g, psi), u)?;
    Ok(Comparison::new(lhs, rhs))
}

/// Dual norm of `u` in `[X_1', X_0']_ψ` (weights `ψ(λ)/λ`) against the dual
/// norm of `[X_0, X_1]_χ` with `χ = t/ψ` (weights `1/χ(λ)`).
pub fn duality_check(c: &SpectralCouple, psi: &ParamFn, u: &SpectralVector) -> Result<Comparison> {
    check_dim(c, u)?;
    let chi = dual_chi(psi);
    let mut left = Vec::with_capacity(c.dim());
    let mut right = Vec::with_capacity(c.dim());
    for &l in c.eigenvalues() {
        left.push(psi.eval(l)? / l);
        right.push(1.0 / chi.eval(l)?);
    }
    Ok(Comparison::new(
        weighted_norm(&left, u),
        weighted_norm(&right, u),
    ))
}

/// Concatenation of couples sharing the lower bound `r`.
pub fn product_couple(cs: &[SpectralCouple], r: f64) -> Result<SpectralCouple> {
    if cs.is_empty() {
        return Err(Error::InvalidCouple("product of no couples".into()));
    }
    let min = cs
        .iter()
        .flat_map(|c| c.eigenvalues().iter().copied())
        .fold(f64::INFINITY, f64::min);
    if min < r {
        return Err(Error::NoCommonLowerBound { min, r });
    }
    let mut lambda = Vec::new();
    let mut blocks = Vec::new();
    for c in cs {
        lambda.extend_from_slice(c.eigenvalues());
        blocks.extend_from_slice(c.blocks());
    }
    let mut out = SpectralCouple::new(lambda, r)?;
    out.blocks = blocks;
    Ok(out)
}

/// Norm in the interpolated product against the `ℓ²` combination of the
/// factor norms. Both sides add the same block sums in the same order.
pub fn product_norm_check(
    cs: &[SpectralCouple],
    r: f64,
    psi: &ParamFn,
    us: &[SpectralVector],
) -> Result<Comparison> {
    if cs.len() != us.len() {
        return Err(Error::DimensionMismatch {
            expected: cs.len(),
            got: us.len(),
        });
    }
    let product = product_couple(cs, r)?;
    let joined = SpectralVector(us.iter().flat_map(|u| u.0.iter().copied()).collect());
    let lhs = norm_psi(&product, psi, &joined)?;
    let mut total = 0.0;
    for (c, u) in cs.iter().zip(us) {
        total += norm_psi_squared(c, psi, u)?;
    }
    Ok(Comparison::new(lhs, total.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPoint {
    /// `ψ(t)/ψ(s)`.
    pub norm_ratio: f64,
    /// Same quantity as the power-iteration norm of the weighted 2x2 operator.
    pub norm_ratio_operator: f64,
    /// `norm_ratio / max(1, t/s)`.
    pub bound_ratio: f64,
}

/// Couple `J = diag(s, t)` with the operator sending the first basis vector
/// to the second; its `X_ψ` norm is `ψ(t)/ψ(s)` while its `X_0` and `X_1`
/// norms are `1` and `t/s`.
pub fn two_point_counterexample(psi: &ParamFn, s: f64, t: f64) -> Result<TwoPoint> {
    if !(s > 1.0 && t > 1.0) {
        return Err(Error::InvalidCouple(format!(
            "two-point couple needs s, t > 1, got {s}, {t}"
        )));
    }
    let c = SpectralCouple::new(vec![s, t], 1.0)?;
    let zero = Complex64::new(0.0, 0.0);
    let op = SpectralOperator::new(2, 2, vec![zero, zero, Complex64::new(1.0, 0.0), zero])?;
    let norm_ratio = psi.eval(t)? / psi.eval(s)?;
    let norm_ratio_operator = operator_norm_with(&c, &c, psi, &op, NormMethod::PowerIteration)?;
    Ok(TwoPoint {
        norm_ratio,
        norm_ratio_operator,
        bound_ratio: norm_ratio / (t / s).max(1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub trials: usize,
    pub seed: u64,
    pub max_dim: usize,
    /// Restrict to square diagonal operators.
    pub diagonal: bool,
    /// Eigenvalues are drawn log-uniformly from `[1/m, spread/m]`.
    pub spread: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            trials: 500,
            seed: 0,
            max_dim: 6,
            diagonal: false,
            spread: 1e6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepReport {
    pub max_observed_c: f64,
    pub worst_trial: usize,
    /// Sampled quasiconcavity constant of `ψ` for comparison.
    pub c_estimate: f64,
}

fn random_couple<R: Rng>(rng: &mut R, n: usize, m: f64, spread: f64) -> Result<SpectralCouple> {
    let lo = 1.0 / m;
    let log_spread = spread.ln();
    let lambda = (0..n)
        .map(|_| lo * (rng.gen::<f64>() * log_spread).exp())
        .collect();
    SpectralCouple::new(lambda, lo)
}

fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Largest observed `‖T‖_ψ / max(‖T‖_0, ‖T‖_1)` over random couples with
/// embedding norms at most `m` and random operators.
pub fn uniform_bound_sweep(psi: &ParamFn, m: f64, opts: &SweepOptions) -> Result<SweepReport> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::NonPositiveParameter {
            name: "m",
            value: m,
        });
    }
    let evidence = is_interpolation_parameter_evidence(psi)?;
    if !evidence.passes() {
        return Err(Error::NotInterpolationParameter(psi.to_string()));
    }
    let c_estimate = quasiconcavity_certificate(psi, 0.0, &default_grid())?.c_estimate;
    let one = ParamFn::one();
    let id = ParamFn::power(1.0);
    let ratios: Vec<f64> = (0..opts.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = instance_rng(opts.seed, trial as u64);
            let nx = rng.gen_range(1..=opts.max_dim.max(1));
            let ny = if opts.diagonal {
                nx
            } else {
                rng.gen_range(1..=opts.max_dim.max(1))
            };
            let cx = random_couple(&mut rng, nx, m, opts.spread)?;
            let cy = random_couple(&mut rng, ny, m, opts.spread)?;
            let mut data = Vec::with_capacity(nx * ny);
            for i in 0..ny {
                for j in 0..nx {
                    let z = gaussian(&mut rng);
                    data.push(if opts.diagonal && i != j {
                        Complex64::new(0.0, 0.0)
                    } else {
                        z
                    });
                }
            }
            let t = SpectralOperator::new(ny, nx, data)?;
            let n_psi = operator_norm(&cx, &cy, psi, &t)?;
            let n0 = operator_norm(&cx, &cy, &one, &t)?;
            let n1 = operator_norm(&cx, &cy, &id, &t)?;
            let base = n0.max(n1);
            Ok(if base > 0.0 { n_psi / base } else { 0.0 })
        })
        .collect::<Result<_>>()?;
    let (mut worst_trial, mut max_observed_c) = (0, 0.0);
    for (i, &q) in ratios.iter().enumerate() {
        if q > max_observed_c {
            worst_trial = i;
            max_observed_c = q;
        }
    }
    Ok(SweepReport {
        max_observed_c,
        worst_trial,
        c_estimate,
    })
}
