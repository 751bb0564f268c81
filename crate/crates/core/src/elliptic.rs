//! Functional calculus of `A = 1 - Δ` on `Tⁿ`. Its eigenvalues are
//! `1 + |k|²` on the Fourier basis, the order is `m = 2` and the lower
//! bound is `r = 1`.

use serde::Serialize;

use crate::compare::Comparison;
use crate::error::{Error, Result};
use crate::hormander::{band_levels, bracket_sq, hnorm, FourierDistribution, SmoothnessIndex};
use crate::param::{geometric_grid, phi_s, ParamFn};

/// Largest sampled `1/φ` accepted when `s = 0`.
pub const INV_PHI_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticOperator {
    pub m: f64,
    pub r: f64,
}

impl Default for EllipticOperator {
    fn default() -> Self {
        EllipticOperator { m: 2.0, r: 1.0 }
    }
}

impl EllipticOperator {
    pub fn eigenvalue(&self, k: &[i64]) -> f64 {
        bracket_sq(k)
    }

    /// `c_k ↦ (1 + |k|²) c_k`.
    pub fn apply(&self, u: &FourierDistribution) -> FourierDistribution {
        u.multiply_by(bracket_sq)
    }

    /// `φ_s` for this operator's order.
    pub fn spectral_function(&self, idx: &SmoothnessIndex) -> Result<ParamFn> {
        phi_s(&idx.phi, idx.s, self.m)
    }

    /// `φ_s(A) u`.
    pub fn apply_calculus(
        &self,
        u: &FourierDistribution,
        idx: &SmoothnessIndex,
    ) -> Result<FourierDistribution> {
        let f = self.spectral_function(idx)?;
        map_modes(u, |k| f.eval(bracket_sq(k)))
    }

    /// `φ_s(A)^{-1} u`.
    pub fn invert_calculus(
        &self,
        u: &FourierDistribution,
        idx: &SmoothnessIndex,
    ) -> Result<FourierDistribution> {
        let f = self.spectral_function(idx)?;
        map_modes(u, |k| Ok(1.0 / f.eval(bracket_sq(k))?))
    }

    /// `‖φ_s(A) u‖_{L²}`.
    pub fn calculus_norm(&self, u: &FourierDistribution, idx: &SmoothnessIndex) -> Result<f64> {
        let f = self.spectral_function(idx)?;
        let mut sum = 0.0;
        for (k, c) in u.modes() {
            let w = f.eval(bracket_sq(k))?;
            sum += w * w * c.norm_sqr();
        }
        Ok(sum.sqrt())
    }

    /// Smallest integer `j >= 1` with `j·m > s` and the constant `c` in
    /// `φ_s(t) <= c·t^j` on the eigenvalues of the band.
    pub fn polynomial_bound(
        &self,
        idx: &SmoothnessIndex,
        n: usize,
        band: u64,
    ) -> Result<(u32, f64)> {
        let f = self.spectral_function(idx)?;
        let mut j = 1u32;
        while (j as f64) * self.m <= idx.s {
            j += 1;
        }
        let mut c = 0.0f64;
        for (sq, _) in band_levels(n, band) {
            let t = 1.0 + sq as f64;
            c = c.max(f.eval(t)? / t.powi(j as i32));
        }
        Ok((j, c))
    }
}

fn map_modes(
    u: &FourierDistribution,
    f: impl Fn(&[i64]) -> Result<f64>,
) -> Result<FourierDistribution> {
    let mut out = FourierDistribution::new(u.dim(), u.band())?;
    for (k, c) in u.modes() {
        out.set(k.clone(), c * f(k)?)?;
    }
    Ok(out)
}

/// Spectral norm `‖φ_s(A)u‖` against the Fourier norm of `H^{s,φ}`.
pub fn calculus_check(u: &FourierDistribution, idx: &SmoothnessIndex) -> Result<Comparison> {
    let a = EllipticOperator::default();
    Ok(Comparison::new(a.calculus_norm(u, idx)?, hnorm(u, idx)?))
}

/// `hnorm(Au, s, φ)` against `hnorm(u, s + m, φ)`.
pub fn lifting_check(
    a: &EllipticOperator,
    u: &FourierDistribution,
    idx: &SmoothnessIndex,
) -> Result<Comparison> {
    let lifted = SmoothnessIndex::new(idx.s + a.m, idx.phi.clone())?;
    Ok(Comparison::new(
        hnorm(&a.apply(u), idx)?,
        hnorm(u, &lifted)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphNorm {
    /// `(‖u‖² + ‖φ_s(A)u‖²)^{1/2}`.
    pub graph: f64,
    pub hn: f64,
    /// `graph / hn`, `1` for `u = 0`.
    pub ratio: f64,
    /// `(1 + 1/c²)^{1/2}` with `c = min φ_s` over the band.
    pub bound: f64,
    pub c: f64,
}

/// Graph norm of `φ_s(A)` against the `H^{s,φ}` norm for `s >= 0`.
pub fn graph_norm_check(u: &FourierDistribution, idx: &SmoothnessIndex) -> Result<GraphNorm> {
    if idx.s < 0.0 {
        return Err(Error::HypothesisViolation(format!(
            "graph norm needs s >= 0, got {}",
            idx.s
        )));
    }
    if idx.s == 0.0 {
        for t in geometric_grid(1.0, 1e9, 256) {
            let inv = 1.0 / idx.phi.eval(t)?;
            if inv > INV_PHI_LIMIT {
                return Err(Error::HypothesisViolation(format!(
                    "1/phi reaches {inv:e} at t = {t:e} with s = 0"
                )));
            }
        }
    }
    let a = EllipticOperator::default();
    let f = a.spectral_function(idx)?;
    let mut c = f64::INFINITY;
    for (sq, _) in band_levels(u.dim(), u.band()) {
        c = c.min(f.eval(1.0 + sq as f64)?);
    }
    let l2 = u.l2_norm();
    let calc = a.calculus_norm(u, idx)?;
    let graph = l2.hypot(calc);
    let hn = hnorm(u, idx)?;
    let ratio = if hn == 0.0 { 1.0 } else { graph / hn };
    Ok(GraphNorm {
        graph,
        hn,
        ratio,
        bound: (1.0 + 1.0 / (c * c)).sqrt(),
        c,
    })
}
