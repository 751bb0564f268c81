use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::{rectify, ChartAtlas, CircleFunction};
use crate::error::{Error, Result};
use crate::hormander::{hnorm, SmoothnessIndex};

/// Largest relative change of the chart norm under `P → 2P`.
pub const REFINEMENT_TOLERANCE: f64 = 1e-2;

/// Relative size of a rectified piece admitted at the line grid ends.
pub const BOUNDARY_DECAY: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChartNorm {
    /// Value on the refined grid `2P`.
    pub value: f64,
    /// Value on the base grid `P`.
    pub coarse: f64,
    /// `|value - coarse| / value`.
    pub relative_change: f64,
}

/// Chart norm on the atlas's own line grid, without refinement.
///
/// Each piece `h` gets `‖h‖² = (2π)^{-1} ∫ ⟨ξ⟩^{2s} φ(⟨ξ⟩)² |ĥ(ξ)|² dξ`, with
/// `ĥ` approximated by the grid DFT and the integral by the frequency grid
/// `ξ_q = 2πq/R`.
pub fn chart_norm_at(atlas: &ChartAtlas, f: &CircleFunction, idx: &SmoothnessIndex) -> Result<f64> {
    let cfg = atlas.config();
    let p = cfg.line_points;
    let h = rectify(atlas, f)?;
    let fft = FftPlanner::new().plan_fft_forward(p);
    let dx = atlas.line_step();
    let mut weights = Vec::with_capacity(p / 2 + 1);
    for q in 0..=p / 2 {
        let xi = 2.0 * std::f64::consts::PI * q as f64 / cfg.line_length;
        let w = idx.weight_at((1.0 + xi * xi).sqrt())?;
        weights.push(w * w);
    }
    let mut total = 0.0;
    for piece in &h.pieces {
        let peak = piece.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let edge = piece[..2]
            .iter()
            .chain(&piece[p - 2..])
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if edge > BOUNDARY_DECAY * peak {
            return Err(Error::ResolutionTooLow(format!(
                "rectified piece reaches {edge:e} at the line grid ends"
            )));
        }
        let mut buf: Vec<Complex64> = piece.clone();
        fft.process(&mut buf);
        let sum: f64 = buf
            .iter()
            .enumerate()
            .map(|(q, c)| weights[q.min(p - q)] * c.norm_sqr())
            .sum();
        total += sum * dx * dx / cfg.line_length;
    }
    Ok(total.sqrt())
}

/// Chart norm with a `P → 2P` refinement estimate.
pub fn chart_norm(
    atlas: &ChartAtlas,
    f: &CircleFunction,
    idx: &SmoothnessIndex,
) -> Result<ChartNorm> {
    let coarse = chart_norm_at(atlas, f, idx)?;
    let fine_atlas = atlas.with_line_points(2 * atlas.config().line_points)?;
    let value = chart_norm_at(&fine_atlas, f, idx)?;
    let relative_change = if value == 0.0 {
        0.0
    } else {
        (value - coarse).abs() / value
    };
    if relative_change > REFINEMENT_TOLERANCE {
        return Err(Error::GridUnderResolved { relative_change });
    }
    Ok(ChartNorm {
        value,
        coarse,
        relative_change,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceStudy {
    pub ratios: Vec<f64>,
    pub ratio_min: f64,
    pub ratio_max: f64,
}

impl EquivalenceStudy {
    fn from_ratios(ratios: Vec<f64>) -> Self {
        let ratio_min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let ratio_max = ratios.iter().copied().fold(0.0, f64::max);
        EquivalenceStudy {
            ratios,
            ratio_min,
            ratio_max,
        }
    }

    /// `ratio_max / ratio_min`.
    pub fn spread(&self) -> f64 {
        self.ratio_max / self.ratio_min
    }
}

fn nonzero_family(family: &[CircleFunction]) -> Result<()> {
    if family.is_empty() {
        return Err(Error::HypothesisViolation("empty function family".into()));
    }
    Ok(())
}

/// Ratios `chart_norm(f) / hnorm(f)` over the family.
pub fn equivalence_study(
    atlas: &ChartAtlas,
    family: &[CircleFunction],
    idx: &SmoothnessIndex,
) -> Result<EquivalenceStudy> {
    nonzero_family(family)?;
    let mut ratios = Vec::with_capacity(family.len());
    for f in family {
        let h = hnorm(&f.to_spectral()?, idx)?;
        if h == 0.0 {
            return Err(Error::HypothesisViolation("zero function in family".into()));
        }
        ratios.push(chart_norm(atlas, f, idx)?.value / h);
    }
    Ok(EquivalenceStudy::from_ratios(ratios))
}

/// Ratios of the chart norms of two atlases over the family.
pub fn atlas_comparison(
    first: &ChartAtlas,
    second: &ChartAtlas,
    family: &[CircleFunction],
    idx: &SmoothnessIndex,
) -> Result<EquivalenceStudy> {
    nonzero_family(family)?;
    let mut ratios = Vec::with_capacity(family.len());
    for f in family {
        let b = chart_norm(second, f, idx)?.value;
        if b == 0.0 {
            return Err(Error::HypothesisViolation("zero function in family".into()));
        }
        ratios.push(chart_norm(first, f, idx)?.value / b);
    }
    Ok(EquivalenceStudy::from_ratios(ratios))
}
