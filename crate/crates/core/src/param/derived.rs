//! Parameters derived from other parameters: reiteration, duality, the
//! Sobolev-couple parameter, refined-scale targets and the spectral
//! parameter `φ_s` of an elliptic operator of order `m`.

use log::warn;

use super::certify::{geometric_grid, nested_extents, GROWTH_THRESHOLD};
use super::{AlphaSpec, BetaSpec, KaramataForm, ParamFn};
use crate::error::{Error, Result};

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonPositiveParameter { name, value })
    }
}

/// Sampled check that `num/den` stays bounded near `+∞`; logs a warning
/// otherwise. Returns whether the sample looked bounded.
fn warn_if_ratio_grows(num: &ParamFn, den: &ParamFn, what: &str) -> bool {
    let grid = geometric_grid(1.0, 1e9, 128);
    let mut running = 0.0f64;
    let mut prefix = Vec::with_capacity(grid.len());
    for &t in &grid {
        match (num.eval(t), den.eval(t)) {
            (Ok(a), Ok(b)) => running = running.max(a / b),
            _ => return true,
        }
        prefix.push(running);
    }
    let levels: Vec<f64> = nested_extents(&grid)
        .iter()
        .map(|&n| prefix[n - 1])
        .collect();
    let bounded = match levels.as_slice() {
        [.., prev, last] => last / prev <= GROWTH_THRESHOLD,
        _ => true,
    };
    if !bounded {
        warn!("{what} does not look bounded near +inf on the sample grid");
    }
    bounded
}

/// `ω(t) = f(t)·ψ(g(t)/f(t))`.
pub fn reiteration_omega(f: &ParamFn, g: &ParamFn, psi: &ParamFn) -> ParamFn {
    warn_if_ratio_grows(f, g, "f/g");
    f.clone() * ParamFn::compose(psi, &(g.clone() / f.clone()))
}

/// `χ(t) = t/ψ(t)`.
pub fn dual_chi(psi: &ParamFn) -> ParamFn {
    warn_if_ratio_grows(psi, &ParamFn::power(1.0), "psi(t)/t");
    ParamFn::power(1.0) / psi.clone()
}

/// `ψ(t) = t^{ε/(ε+δ)} φ(t^{1/(ε+δ)})` for `t >= 1` and `ψ(t) = φ(1)` below;
/// quasiregularly varying of index `ε/(ε+δ)` when `φ` is quasislowly varying.
pub fn interpolation_psi(phi: &ParamFn, eps: f64, delta: f64) -> Result<ParamFn> {
    positive("epsilon", eps)?;
    positive("delta", delta)?;
    Ok(ParamFn::composition34(phi, eps, delta))
}

/// Smoothness pair `(s, φ)` reached by interpolating between
/// `(s0, φ0)` and `(s1, φ1)` with `ψ(t) = t^θ χ(t)`:
/// `s = (1-θ)s0 + θ s1` and
/// `φ(t) = φ0^{1-θ}(t) φ1^θ(t) χ(t^{s1-s0} φ1(t)/φ0(t))`.
pub fn interpolated_index(
    phi0: &ParamFn,
    phi1: &ParamFn,
    s0: f64,
    s1: f64,
    theta: f64,
    chi: &ParamFn,
) -> Result<(f64, ParamFn)> {
    if s0 > s1 {
        return Err(Error::OrderViolation { s0, s1 });
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParamFn(format!(
            "theta must lie in (0, 1), got {theta}"
        )));
    }
    if s0 == s1 {
        warn_if_ratio_grows(phi0, phi1, "phi0/phi1");
    }
    let s = s0 + theta * (s1 - s0);
    let ratio = phi1.clone() / phi0.clone();
    let phi =
        phi0.powf(1.0 - theta) * phi1.powf(theta) * ParamFn::composition_qsv(chi, s1 - s0, &ratio);
    Ok((s, phi))
}

/// `φ_s(t) = t^{s/m} φ(t^{1/m})` for `t >= 1` and `φ(1)` below.
pub fn phi_s(phi: &ParamFn, s: f64, m: f64) -> Result<ParamFn> {
    positive("m", m)?;
    if !s.is_finite() {
        return Err(Error::InvalidParamFn("s must be finite".into()));
    }
    Ok(ParamFn::phi_s_node(phi, s, m))
}

pub fn karamata_build(alpha: AlphaSpec, beta: BetaSpec, r: f64) -> Result<ParamFn> {
    Ok(ParamFn::karamata(KaramataForm::new(alpha, beta, r)?))
}

/// `χ(t^θ φ(t))`, quasislowly varying for quasislowly varying `χ`, `φ`.
/// With `θ = 0` the inner `φ` must tend to infinity.
pub fn qsv_compose(chi: &ParamFn, theta: f64, phi: &ParamFn) -> Result<ParamFn> {
    if !(theta >= 0.0) || !theta.is_finite() {
        return Err(Error::InvalidParamFn(format!(
            "theta must be >= 0, got {theta}"
        )));
    }
    if theta == 0.0 {
        let grid = geometric_grid(1e3, 1e9, 7);
        let vals: Vec<f64> = grid.iter().filter_map(|&t| phi.eval(t).ok()).collect();
        if !vals.windows(2).all(|w| w[1] > w[0]) {
            warn!("qsv_compose with theta = 0: inner function does not appear to grow");
        }
    }
    Ok(ParamFn::composition_qsv(chi, theta, phi))
}
