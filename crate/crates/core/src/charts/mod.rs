//! Two-chart atlas on the circle `S¹ = ℝ/2πℤ`.
//!
//! Chart `j` is `α_j(x) = θ_j + L·tanh(x/L)`, mapping `ℝ` onto the open arc
//! of half-width `L` around `θ_j`. The partition of unity is
//! `χ_j = b_j/(b_1 + b_2)` with `b_j(θ) = exp(-1/(1 - (d_j/ρ)²))`, where
//! `d_j` is the angular distance to `θ_j`. On the line, `η_j` equals one on
//! `α_j^{-1}(supp χ_j) = [-a, a]`, `a = L·atanh(ρ/L)`, and falls to zero
//! smoothly over a further width `w`.

mod circle;
mod norm;
mod operators;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use circle::CircleFunction;
pub use norm::{
    atlas_comparison, chart_norm, chart_norm_at, equivalence_study, ChartNorm, EquivalenceStudy,
    BOUNDARY_DECAY, REFINEMENT_TOLERANCE,
};
pub use operators::{rectify, sew, ChartPieces, LEAK_TOLERANCE};

use crate::error::{Error, Result};

/// `exp(-1/(1 - y²))` for `|y| < 1`, zero otherwise.
pub fn bump(y: f64) -> f64 {
    if y.abs() < 1.0 {
        (-1.0 / (1.0 - y * y)).exp()
    } else {
        0.0
    }
}

/// Smooth step: `0` for `y <= 0`, `1` for `y >= 1`.
pub fn smooth_step(y: f64) -> f64 {
    let g = |v: f64| if v > 0.0 { (-1.0 / v).exp() } else { 0.0 };
    let (p, q) = (g(y), g(1.0 - y));
    p / (p + q)
}

/// Representative of `d` in `(-π, π]`.
pub fn wrap_angle(d: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = d.rem_euclid(two_pi);
    if r > PI {
        r -= two_pi;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AtlasConfig {
    pub centers: [f64; 2],
    /// Half-width `L` of each chart arc.
    pub half_width: f64,
    /// Support radius `ρ` of the partition bumps.
    pub support_radius: f64,
    /// Width `w` of the cutoff transition on the line.
    pub cutoff_width: f64,
    /// Circle grid size `M`.
    pub circle_points: usize,
    /// Length `R` of the line grid.
    pub line_length: f64,
    /// Number of line grid points `P`.
    pub line_points: usize,
    /// Points used by the local interpolation in `sew`.
    pub interp_order: usize,
}

impl Default for AtlasConfig {
    fn default() -> Self {
        AtlasConfig {
            centers: [0.0, PI],
            half_width: 0.75 * PI,
            support_radius: 0.65 * PI,
            cutoff_width: 1.0,
            circle_points: 4096,
            line_length: 64.0,
            line_points: 8192,
            interp_order: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartAtlas {
    cfg: AtlasConfig,
    /// `a = L·atanh(ρ/L)`.
    core: f64,
}

impl ChartAtlas {
    pub fn new(cfg: AtlasConfig) -> Result<Self> {
        let (l, rho, w) = (cfg.half_width, cfg.support_radius, cfg.cutoff_width);
        if !(l > 0.0 && l < PI) {
            return Err(Error::InvalidAtlas(format!(
                "half width must lie in (0, π), got {l}"
            )));
        }
        if !(rho > 0.0 && rho < l) {
            return Err(Error::InvalidAtlas(format!(
                "support radius {rho} must lie in (0, {l})"
            )));
        }
        if !(w > 0.0) || cfg.centers.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidAtlas(
                "cutoff width and centers must be finite, width > 0".into(),
            ));
        }
        let gap = wrap_angle(cfg.centers[1] - cfg.centers[0]).abs();
        let farthest = PI - gap / 2.0;
        if farthest >= rho {
            return Err(Error::InvalidAtlas(format!(
                "bumps of radius {rho} do not cover the circle (a point lies {farthest} from both centers)"
            )));
        }
        if cfg.circle_points < 16 || cfg.line_points < 16 {
            return Err(Error::ResolutionTooLow(
                "grids need at least 16 points".into(),
            ));
        }
        if cfg.interp_order < 2 || cfg.interp_order > 16 {
            return Err(Error::InvalidAtlas(
                "interpolation order must lie in 2..=16".into(),
            ));
        }
        let cell = 2.0 * PI / cfg.circle_points as f64;
        if l - rho < 2.0 * cell {
            return Err(Error::ResolutionTooLow(format!(
                "support margin {} is below two circle cells ({cell})",
                l - rho
            )));
        }
        let core = l * (rho / l).atanh();
        let dx = cfg.line_length / cfg.line_points as f64;
        if core + w + 2.0 * dx >= cfg.line_length / 2.0 {
            return Err(Error::ResolutionTooLow(format!(
                "line grid of length {} does not contain the cutoff support {}",
                cfg.line_length,
                core + w
            )));
        }
        Ok(ChartAtlas { cfg, core })
    }

    pub fn config(&self) -> &AtlasConfig {
        &self.cfg
    }

    pub fn with_line_points(&self, p: usize) -> Result<Self> {
        ChartAtlas::new(AtlasConfig {
            line_points: p,
            ..self.cfg
        })
    }

    /// Half-length `a` of `α_j^{-1}(supp χ_j)`.
    pub fn core(&self) -> f64 {
        self.core
    }

    pub fn chart(&self, j: usize, x: f64) -> f64 {
        let l = self.cfg.half_width;
        self.cfg.centers[j] + l * (x / l).tanh()
    }

    /// `α_j^{-1}(θ)` when `θ` lies in the chart arc.
    pub fn chart_inverse(&self, j: usize, theta: f64) -> Option<f64> {
        let l = self.cfg.half_width;
        let d = wrap_angle(theta - self.cfg.centers[j]);
        (d.abs() < l).then(|| l * (d / l).atanh())
    }

    fn raw_bump(&self, j: usize, theta: f64) -> f64 {
        bump(wrap_angle(theta - self.cfg.centers[j]) / self.cfg.support_radius)
    }

    /// `χ_j(θ)`.
    pub fn partition(&self, j: usize, theta: f64) -> f64 {
        let b = [self.raw_bump(0, theta), self.raw_bump(1, theta)];
        b[j] / (b[0] + b[1])
    }

    /// `η_j(x)`; identical for both charts.
    pub fn cutoff(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax <= self.core {
            1.0
        } else {
            smooth_step(1.0 - (ax - self.core) / self.cfg.cutoff_width)
        }
    }

    pub fn circle_grid(&self) -> Vec<f64> {
        let m = self.cfg.circle_points;
        (0..m).map(|i| 2.0 * PI * i as f64 / m as f64).collect()
    }

    pub fn line_step(&self) -> f64 {
        self.cfg.line_length / self.cfg.line_points as f64
    }

    pub fn line_grid(&self) -> Vec<f64> {
        let dx = self.line_step();
        let half = self.cfg.line_length / 2.0;
        (0..self.cfg.line_points)
            .map(|i| -half + dx * i as f64)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_sums_to_one() {
        for cfg in [
            AtlasConfig::default(),
            AtlasConfig {
                centers: [0.3, PI + 0.3],
                ..AtlasConfig::default()
            },
        ] {
            let atlas = ChartAtlas::new(cfg).unwrap();
            for th in atlas.circle_grid() {
                let s = atlas.partition(0, th) + atlas.partition(1, th);
                assert!((s - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn supports_sit_inside_charts() {
        let atlas = ChartAtlas::new(AtlasConfig::default()).unwrap();
        let cfg = atlas.config();
        let cell = 2.0 * PI / cfg.circle_points as f64;
        for j in 0..2 {
            for th in atlas.circle_grid() {
                let d = wrap_angle(th - cfg.centers[j]).abs();
                if atlas.partition(j, th) > 0.0 {
                    assert!(d < cfg.support_radius);
                    assert!(cfg.half_width - d >= 2.0 * cell);
                }
            }
        }
    }

    #[test]
    fn cutoff_is_one_on_pulled_back_support() {
        let atlas = ChartAtlas::new(AtlasConfig::default()).unwrap();
        for x in atlas.line_grid() {
            for j in 0..2 {
                if atlas.partition(j, atlas.chart(j, x)) > 0.0 {
                    assert_eq!(atlas.cutoff(x), 1.0);
                }
            }
            if x.abs() >= atlas.core() + atlas.config().cutoff_width {
                assert_eq!(atlas.cutoff(x), 0.0);
            }
        }
    }

    #[test]
    fn chart_inverse_round_trip() {
        let atlas = ChartAtlas::new(AtlasConfig::default()).unwrap();
        for &x in &[-5.0, -0.3, 0.0, 1.7, 4.0] {
            for j in 0..2 {
                let back = atlas.chart_inverse(j, atlas.chart(j, x)).unwrap();
                assert!((back - x).abs() < 1e-10);
            }
        }
        assert!(atlas.chart_inverse(0, PI).is_none());
    }

    #[test]
    fn rejects_bad_atlases() {
        let base = AtlasConfig::default();
        let no_cover = AtlasConfig {
            support_radius: 0.45 * PI,
            ..base
        };
        assert!(matches!(
            ChartAtlas::new(no_cover),
            Err(Error::InvalidAtlas(_))
        ));
        let thin = AtlasConfig {
            support_radius: 0.7499 * PI,
            ..base
        };
        assert!(matches!(
            ChartAtlas::new(thin),
            Err(Error::ResolutionTooLow(_))
        ));
        let short = AtlasConfig {
            line_length: 8.0,
            ..base
        };
        assert!(matches!(
            ChartAtlas::new(short),
            Err(Error::ResolutionTooLow(_))
        ));
    }

    #[test]
    fn smooth_step_limits() {
        assert_eq!(smooth_step(-1.0), 0.0);
        assert_eq!(smooth_step(1.0), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
    }
}
