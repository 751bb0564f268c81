use serde::Serialize;

/// Two independently computed values that should agree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub lhs: f64,
    pub rhs: f64,
}

impl Comparison {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Comparison { lhs, rhs }
    }

    /// `|lhs - rhs| / max(|lhs|, |rhs|, 1)`.
    pub fn scaled_diff(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.lhs.abs().max(self.rhs.abs()).max(1.0)
    }

    /// `|lhs - rhs| / max(|lhs|, |rhs|)`, zero when both vanish.
    pub fn rel_diff(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.lhs - self.rhs).abs() / scale
        }
    }

    pub fn agrees(&self, rel_tol: f64) -> bool {
        self.rel_diff() <= rel_tol
    }
}
