//! Adaptive Simpson quadrature.
//!
//! The interval is first split into panels of width at most [`PANEL_WIDTH`];
//! each panel is refined recursively with the Lyness stopping rule
//! `|S(left) + S(right) - S(whole)| <= 15 * eps`. The error budget is
//! relative to a coarse estimate of `∫|f|`, so integrands that cancel to
//! near zero do not force unbounded refinement.

use crate::error::{Error, Result};

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_DEPTH: u32 = 40;
const PANEL_WIDTH: f64 = 1.0;

#[derive(Debug, Clone, Copy)]
pub struct SimpsonConfig {
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for SimpsonConfig {
    fn default() -> Self {
        SimpsonConfig {
            rel_tol: DEFAULT_REL_TOL,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

#[inline]
fn simpson(h: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
    max_depth: u32,
) -> Result<f64> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(m - a, fa, flm, fm);
    let right = simpson(b - m, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * eps {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= max_depth {
        return Err(Error::QuadratureNonConvergence {
            lo: a,
            hi: b,
            depth: max_depth,
        });
    }
    let l = refine(
        f,
        a,
        fa,
        lm,
        flm,
        m,
        fm,
        left,
        0.5 * eps,
        depth + 1,
        max_depth,
    )?;
    let r = refine(
        f,
        m,
        fm,
        rm,
        frm,
        b,
        fb,
        right,
        0.5 * eps,
        depth + 1,
        max_depth,
    )?;
    Ok(l + r)
}

/// Integrates `f` over `[a, b]` (either orientation).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: SimpsonConfig) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, cfg).map(|v| -v);
    }
    let panels = ((b - a) / PANEL_WIDTH).ceil().max(1.0) as usize;
    let h = (b - a) / panels as f64;

    let mut nodes = Vec::with_capacity(panels);
    let mut scale = 0.0;
    for i in 0..panels {
        let lo = a + h * i as f64;
        let hi = if i + 1 == panels { b } else { lo + h };
        let mid = 0.5 * (lo + hi);
        let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
        scale += simpson(hi - lo, flo.abs(), fmid.abs(), fhi.abs());
        nodes.push((lo, flo, mid, fmid, hi, fhi));
    }
    let budget = cfg.rel_tol * scale.max(f64::MIN_POSITIVE);

    let mut total = 0.0;
    for (lo, flo, mid, fmid, hi, fhi) in nodes {
        let whole = simpson(hi - lo, flo, fmid, fhi);
        let eps = budget * (hi - lo) / (b - a);
        total += refine(
            &f,
            lo,
            flo,
            mid,
            fmid,
            hi,
            fhi,
            whole,
            eps,
            0,
            cfg.max_depth,
        )?;
    }
    Ok(total)
}
