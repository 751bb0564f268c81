//! Sampled evidence for membership and quasiconcavity conditions.
//!
//! The conditions are asymptotic, so every verdict here is evidence from a
//! finite grid, never a proof. Growth is judged on nested sub-grids: if the
//! statistic keeps increasing by more than [`GROWTH_THRESHOLD`] when the grid
//! extent grows, it is treated as unbounded.

use serde::Serialize;

use super::ParamFn;
use crate::error::{Error, Result};

pub const DEFAULT_GRID_POINTS: usize = 512;
pub const DEFAULT_GRID_LO: f64 = 1e-3;
pub const DEFAULT_GRID_HI: f64 = 1e9;
pub const GROWTH_THRESHOLD: f64 = 1.05;
pub const NESTED_LEVELS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// `n` points spaced geometrically over `[lo, hi]`, both ends included.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo);
    if n == 1 {
        return vec![lo];
    }
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo * (ratio * i as f64).exp()
            }
        })
        .collect()
}

pub fn default_grid() -> Vec<f64> {
    geometric_grid(DEFAULT_GRID_LO, DEFAULT_GRID_HI, DEFAULT_GRID_POINTS)
}

/// Prefix lengths of the sorted grid whose upper ends sit at geometric
/// fractions `lo·(hi/lo)^{j/NESTED_LEVELS}`, `j = 1..=NESTED_LEVELS`.
pub fn nested_extents(sorted: &[f64]) -> Vec<usize> {
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    (1..=NESTED_LEVELS)
        .map(|j| {
            if j == NESTED_LEVELS {
                return sorted.len();
            }
            let cut = lo * (hi / lo).powf(j as f64 / NESTED_LEVELS as f64);
            sorted.partition_point(|&x| x <= cut).max(1)
        })
        .collect()
}

fn stabilizes(levels: &[f64]) -> bool {
    match levels {
        [.., prev, last] => last / prev <= GROWTH_THRESHOLD,
        _ => true,
    }
}

fn sorted_grid(grid: &[f64], above: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = grid.iter().copied().filter(|&x| x > above).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

#[derive(Debug, Clone, Serialize)]
pub struct CompactMax {
    pub a: f64,
    pub b: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SetBReport {
    /// Max of `f` over each requested compact `[a, b]` (grid nodes plus ends).
    pub compact_max: Vec<CompactMax>,
    /// Sup of `1/f` over `[r, ∞) ∩ grid`.
    pub inv_sup: f64,
    /// `inv_sup` recomputed on nested sub-grids of increasing extent.
    pub nested_inv_sup: Vec<f64>,
    pub verdict: Verdict,
}

/// Sampled evidence for membership of `f` in the set of positive functions
/// bounded on compacts with `1/f` bounded near `+∞`.
pub fn check_set_b(
    f: &ParamFn,
    grid: &[f64],
    r: f64,
    compacts: &[(f64, f64)],
) -> Result<SetBReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut compact_max = Vec::with_capacity(compacts.len());
    for &(a, b) in compacts {
        let mut max = f.eval(a)?.max(f.eval(b)?);
        for &x in grid.iter().filter(|&&x| x >= a && x <= b) {
            max = max.max(f.eval(x)?);
        }
        compact_max.push(CompactMax { a, b, max });
    }

    let tail = sorted_grid(grid, r - r * f64::EPSILON);
    let (inv_sup, nested_inv_sup) = if tail.is_empty() {
        (0.0, Vec::new())
    } else {
        let inv: Vec<f64> = tail
            .iter()
            .map(|&x| f.eval(x).map(|v| 1.0 / v))
            .collect::<Result<_>>()?;
        let mut prefix_max = Vec::with_capacity(inv.len());
        let mut running = 0.0f64;
        for v in &inv {
            running = running.max(*v);
            prefix_max.push(running);
        }
        let nested: Vec<f64> = if tail.len() >= 2 {
            nested_extents(&tail)
                .iter()
                .map(|&n| prefix_max[n - 1])
                .collect()
        } else {
            vec![running]
        };
        (running, nested)
    };

    let finite = inv_sup.is_finite() && compact_max.iter().all(|c| c.max.is_finite());
    let verdict = if finite && stabilizes(&nested_inv_sup) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(SetBReport {
        compact_max,
        inv_sup,
        nested_inv_sup,
        verdict,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct QuasiconcavityCertificate {
    /// `max ψ(t) / (ψ(s) · max{1, t/s})` over ordered grid pairs.
    pub c_estimate: f64,
    /// The pair `(t, s)` attaining `c_estimate`.
    pub worst_pair: (f64, f64),
    /// `c_estimate` on nested sub-grids of increasing extent.
    pub nested_growth: Vec<f64>,
    /// `true` for quasiconcave evidence, `false` for violation evidence.
    pub quasiconcave: bool,
}

#[inline]
fn pair_ratio(pt: f64, t: f64, ps: f64, s: f64) -> f64 {
    pt / ps / (t / s).max(1.0)
}

/// Estimates the constant `c` in `ψ(t)/ψ(s) <= c·max{1, t/s}` on the grid
/// points above `r`.
pub fn quasiconcavity_certificate(
    psi: &ParamFn,
    r: f64,
    grid: &[f64],
) -> Result<QuasiconcavityCertificate> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let pts = sorted_grid(grid, r);
    if pts.len() < 2 {
        return Err(Error::InsufficientGrid {
            needed: 2,
            got: pts.len(),
        });
    }
    let vals: Vec<f64> = pts.iter().map(|&t| psi.eval(t)).collect::<Result<_>>()?;

    // best[i]: worst ratio over pairs whose larger index is i.
    let mut best = vec![(f64::NEG_INFINITY, (pts[0], pts[0])); pts.len()];
    for i in 1..pts.len() {
        for k in 0..i {
            let fwd = pair_ratio(vals[i], pts[i], vals[k], pts[k]);
            if fwd > best[i].0 {
                best[i] = (fwd, (pts[i], pts[k]));
            }
            let back = pair_ratio(vals[k], pts[k], vals[i], pts[i]);
            if back > best[i].0 {
                best[i] = (back, (pts[k], pts[i]));
            }
        }
    }
    let mut prefix = Vec::with_capacity(pts.len());
    let mut running = best[1];
    prefix.push(running);
    for b in &best[1..] {
        if b.0 > running.0 {
            running = *b;
        }
        prefix.push(running);
    }
    // prefix[n - 1] covers the first n points
    let at = |n: usize| prefix[n.max(2) - 1];

    let nested_growth: Vec<f64> = nested_extents(&pts).iter().map(|&n| at(n).0).collect();
    let (c_estimate, worst_pair) = at(pts.len());
    Ok(QuasiconcavityCertificate {
        c_estimate,
        worst_pair,
        quasiconcave: stabilizes(&nested_growth),
        nested_growth,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InterpolationEvidence {
    /// Declared quasiregularly varying with index in `(0, 1)`.
    ByConstruction {
        index: f64,
    },
    Certificate(QuasiconcavityCertificate),
}

impl InterpolationEvidence {
    pub fn passes(&self) -> bool {
        match self {
            InterpolationEvidence::ByConstruction { .. } => true,
            InterpolationEvidence::Certificate(c) => c.quasiconcave,
        }
    }
}

pub fn is_interpolation_parameter_evidence(psi: &ParamFn) -> Result<InterpolationEvidence> {
    if let Some(index) = psi.declared_index() {
        if index > 0.0 && index < 1.0 {
            return Ok(InterpolationEvidence::ByConstruction { index });
        }
    }
    quasiconcavity_certificate(psi, 0.0, &default_grid()).map(InterpolationEvidence::Certificate)
}
