use num_complex::Complex64;

use super::{ChartAtlas, CircleFunction};
use crate::error::{Error, Result};

/// Largest admissible energy fraction of a chart piece outside `supp η_j`.
pub const LEAK_TOLERANCE: f64 = 1e-8;

/// Pair `(h_1, h_2)` sampled on the line grid of an atlas.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPieces {
    pub pieces: [Vec<Complex64>; 2],
}

impl ChartPieces {
    pub fn zeros(p: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); p];
        ChartPieces {
            pieces: [z.clone(), z],
        }
    }
}

/// `f ↦ ((χ_1 f)∘α_1, (χ_2 f)∘α_2)` on the line grid.
pub fn rectify(atlas: &ChartAtlas, f: &CircleFunction) -> Result<ChartPieces> {
    if let CircleFunction::Samples(v) = f {
        if v.len() != atlas.config().circle_points {
            return Err(Error::DimensionMismatch {
                expected: atlas.config().circle_points,
                got: v.len(),
            });
        }
    }
    let ev = f.evaluator()?;
    let xs = atlas.line_grid();
    let mut out = ChartPieces::zeros(xs.len());
    for (j, piece) in out.pieces.iter_mut().enumerate() {
        for (h, &x) in piece.iter_mut().zip(&xs) {
            if x.abs() > atlas.core() {
                continue;
            }
            let theta = atlas.chart(j, x);
            let chi = atlas.partition(j, theta);
            if chi > 0.0 {
                *h = ev.eval(theta) * chi;
            }
        }
    }
    Ok(out)
}

/// `(h_1, h_2) ↦ Σ_j (η_j h_j)∘α_j^{-1}`, extended by zero and sampled on
/// the circle grid. Off-node values use local Lagrange interpolation.
pub fn sew(atlas: &ChartAtlas, h: &ChartPieces) -> Result<CircleFunction> {
    let cfg = atlas.config();
    let p = cfg.line_points;
    let outer = atlas.core() + cfg.cutoff_width;
    let xs = atlas.line_grid();
    for (j, piece) in h.pieces.iter().enumerate() {
        if piece.len() != p {
            return Err(Error::DimensionMismatch {
                expected: p,
                got: piece.len(),
            });
        }
        let total: f64 = piece.iter().map(|c| c.norm_sqr()).sum();
        let outside: f64 = piece
            .iter()
            .zip(&xs)
            .filter(|(_, x)| x.abs() >= outer)
            .map(|(c, _)| c.norm_sqr())
            .sum();
        if total > 0.0 && outside / total > LEAK_TOLERANCE {
            return Err(Error::SupportLeak {
                chart: j + 1,
                fraction: outside / total,
            });
        }
    }
    let half = cfg.line_length / 2.0;
    let dx = atlas.line_step();
    let order = cfg.interp_order;
    let samples = atlas
        .circle_grid()
        .into_iter()
        .map(|theta| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, piece) in h.pieces.iter().enumerate() {
                let Some(x) = atlas.chart_inverse(j, theta) else {
                    continue;
                };
                let eta = atlas.cutoff(x);
                if eta > 0.0 {
                    acc += lagrange(piece, (x + half) / dx, order) * eta;
                }
            }
            acc
        })
        .collect();
    Ok(CircleFunction::Samples(samples))
}

/// Interpolates grid values `v[i]` at fractional index `pos` from the
/// `order` nearest nodes; nodes off the grid count as zero.
fn lagrange(v: &[Complex64], pos: f64, order: usize) -> Complex64 {
    let start = pos.floor() as i64 - (order as i64) / 2 + 1;
    let nearest = pos.round();
    if (pos - nearest).abs() < 1e-12 {
        return v.get(nearest as usize).copied().unwrap_or_default();
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..order as i64 {
        let node = start + i;
        if node < 0 || node as usize >= v.len() {
            continue;
        }
        let mut w = 1.0;
        for k in 0..order as i64 {
            if k != i {
                let other = (start + k) as f64;
                w *= (pos - other) / ((node - start - k) as f64);
            }
        }
        acc += v[node as usize] * w;
    }
    acc
}
