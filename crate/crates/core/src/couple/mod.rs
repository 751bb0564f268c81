//! Finite diagonal model of an admissible Hilbert couple.
//!
//! The generating operator `J` is diagonal with eigenvalues `λ_k >= r`, so
//! `‖u‖_{X_ψ} = ‖ψ(J)u‖_{X_0} = (Σ ψ(λ_k)² |u_k|²)^{1/2}`.

mod checks;
mod opnorm;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use checks::{
    duality_check, product_couple, product_norm_check, reiteration_check, two_point_counterexample,
    uniform_bound_sweep, SweepOptions, SweepReport, TwoPoint,
};
pub use opnorm::{operator_norm, operator_norm_with, NormMethod, POWER_MAX_ITER, POWER_TOL};

use crate::error::{Error, Result};
use crate::param::ParamFn;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCouple {
    lambda: Vec<f64>,
    r: f64,
    /// Lengths of consecutive blocks; norms are summed per block first.
    blocks: Vec<usize>,
}

impl SpectralCouple {
    pub fn new(lambda: Vec<f64>, r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::NonPositiveParameter {
                name: "r",
                value: r,
            });
        }
        if lambda.is_empty() {
            return Err(Error::InvalidCouple(
                "a couple needs at least one eigenvalue".into(),
            ));
        }
        if let Some(&bad) = lambda.iter().find(|&&l| !(l >= r) || !l.is_finite()) {
            return Err(Error::InvalidCouple(format!(
                "eigenvalue {bad} below r = {r}"
            )));
        }
        let n = lambda.len();
        Ok(SpectralCouple {
            lambda,
            r,
            blocks: vec![n],
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.lambda
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// `ψ(λ_k)` for every eigenvalue.
    pub fn weights(&self, psi: &ParamFn) -> Result<Vec<f64>> {
        self.lambda.iter().map(|&l| psi.eval(l)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector(pub Vec<Complex64>);

impl SpectralVector {
    pub fn zeros(n: usize) -> Self {
        SpectralVector(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn from_parts(re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch {
                expected: re.len(),
                got: im.len(),
            });
        }
        Ok(SpectralVector(
            re.iter()
                .zip(im)
                .map(|(&a, &b)| Complex64::new(a, b))
                .collect(),
        ))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Dense `rows x cols` complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralOperator {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl SpectralOperator {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidCouple(
                "operator entries must be finite".into(),
            ));
        }
        Ok(SpectralOperator { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        SpectralOperator {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }
}

/// Plain serialized form `{"lambda": [...], "r": .., "u_re": [...], "u_im": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupleData {
    pub lambda: Vec<f64>,
    pub r: f64,
    #[serde(default)]
    pub u_re: Vec<f64>,
    #[serde(default)]
    pub u_im: Vec<f64>,
}

impl CoupleData {
    pub fn into_parts(self) -> Result<(SpectralCouple, SpectralVector)> {
        let c = SpectralCouple::new(self.lambda, self.r)?;
        let im = if self.u_im.is_empty() {
            vec![0.0; self.u_re.len()]
        } else {
            self.u_im
        };
        let u = SpectralVector::from_parts(&self.u_re, &im)?;
        check_dim(&c, &u)?;
        Ok((c, u))
    }

    pub fn from_parts(c: &SpectralCouple, u: &SpectralVector) -> Self {
        CoupleData {
            lambda: c.lambda.clone(),
            r: c.r,
            u_re: u.0.iter().map(|z| z.re).collect(),
            u_im: u.0.iter().map(|z| z.im).collect(),
        }
    }
}

fn check_dim(c: &SpectralCouple, u: &SpectralVector) -> Result<()> {
    if c.dim() != u.len() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            got: u.len(),
        });
    }
    Ok(())
}

/// Per-block sums of `(w_k |u_k|)²`, then the sum of the block sums.
fn blocked_square_sum(blocks: &[usize], weights: &[f64], u: &SpectralVector) -> f64 {
    let mut start = 0;
    let mut total = 0.0;
    for &len in blocks {
        let mut block = 0.0;
        for k in start..start + len {
            let a = weights[k] * u.0[k].norm();
            block += a * a;
        }
        total += block;
        start += len;
    }
    total
}

/// `Σ ψ(λ_k)² |u_k|²`, summed block by block.
pub fn norm_psi_squared(c: &SpectralCouple, psi: &ParamFn, u: &SpectralVector) -> Result<f64> {
    check_dim(c, u)?;
    let w = c.weights(psi)?;
    Ok(blocked_square_sum(&c.blocks, &w, u))
}

pub fn norm_psi(c: &SpectralCouple, psi: &ParamFn, u: &SpectralVector) -> Result<f64> {
    Ok(norm_psi_squared(c, psi, u)?.sqrt())
}

/// Weighted norm with explicit weights.
pub(crate) fn weighted_norm(weights: &[f64], u: &SpectralVector) -> f64 {
    blocked_square_sum(&[weights.len()], weights, u).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmbeddingConstants {
    /// `max_k ψ(λ_k)/χ(λ_k)`, the norm of `X_χ ↪ X_ψ`.
    pub norm_bound: f64,
    pub argmax: usize,
    /// Same maximum over eigenvalues at or above the median.
    pub tail_sup: f64,
}

pub fn embedding_constants(
    c: &SpectralCouple,
    chi: &ParamFn,
    psi: &ParamFn,
) -> Result<EmbeddingConstants> {
    let ratios: Vec<f64> = c
        .lambda
        .iter()
        .map(|&l| Ok(psi.eval(l)? / chi.eval(l)?))
        .collect::<Result<_>>()?;
    let (mut argmax, mut norm_bound) = (0, ratios[0]);
    for (k, &q) in ratios.iter().enumerate() {
        if q > norm_bound {
            argmax = k;
            norm_bound = q;
        }
    }
    let mut sorted = c.lambda.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[(sorted.len() - 1) / 2];
    let tail_sup = c
        .lambda
        .iter()
        .zip(&ratios)
        .filter(|(&l, _)| l >= median)
        .map(|(_, &q)| q)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(EmbeddingConstants {
        norm_bound,
        argmax,
        tail_sup,
    })
}
