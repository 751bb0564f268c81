//! `‖T‖_{X_ψ→Y_ψ} = σ_max(D_Y T D_X^{-1})` with `D = diag ψ(λ)`.

use num_complex::Complex64;

use super::{SpectralCouple, SpectralOperator};
use crate::error::{Error, Result};
use crate::param::ParamFn;

pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    /// Closed form when the smaller Gram matrix is at most 2x2, power
    /// iteration otherwise.
    Auto,
    PowerIteration,
}

pub fn operator_norm(
    cx: &SpectralCouple,
    cy: &SpectralCouple,
    psi: &ParamFn,
    t: &SpectralOperator,
) -> Result<f64> {
    operator_norm_with(cx, cy, psi, t, NormMethod::Auto)
}

pub fn operator_norm_with(
    cx: &SpectralCouple,
    cy: &SpectralCouple,
    psi: &ParamFn,
    t: &SpectralOperator,
    method: NormMethod,
) -> Result<f64> {
    if t.rows() != cy.dim() {
        return Err(Error::DimensionMismatch {
            expected: cy.dim(),
            got: t.rows(),
        });
    }
    if t.cols() != cx.dim() {
        return Err(Error::DimensionMismatch {
            expected: cx.dim(),
            got: t.cols(),
        });
    }
    let wx = cx.weights(psi)?;
    let wy = cy.weights(psi)?;
    let (rows, cols) = (t.rows(), t.cols());
    let mut m = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            m.push(t.get(i, j) * (wy[i] / wx[j]));
        }
    }
    let gram = smaller_gram(&m, rows, cols);
    let n = rows.min(cols);
    let sigma2 = match method {
        NormMethod::Auto if n <= 2 => gram_closed_form(&gram, n),
        _ => top_eigenvalue(&gram, n)?,
    };
    Ok(sigma2.max(0.0).sqrt())
}

/// `MᴴM` or `MMᴴ`, whichever is smaller; both share the nonzero spectrum.
fn smaller_gram(m: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    if cols <= rows {
        let mut g = vec![zero; cols * cols];
        for a in 0..cols {
            for b in a..cols {
                let mut s = zero;
                for i in 0..rows {
                    s += m[i * cols + a].conj() * m[i * cols + b];
                }
                g[a * cols + b] = s;
                g[b * cols + a] = s.conj();
            }
        }
        g
    } else {
        let mut g = vec![zero; rows * rows];
        for a in 0..rows {
            for b in a..rows {
                let mut s = zero;
                for j in 0..cols {
                    s += m[a * cols + j] * m[b * cols + j].conj();
                }
                g[a * rows + b] = s;
                g[b * rows + a] = s.conj();
            }
        }
        g
    }
}

fn gram_closed_form(g: &[Complex64], n: usize) -> f64 {
    match n {
        0 => 0.0,
        1 => g[0].re,
        _ => {
            let (a, d, b) = (g[0].re, g[3].re, g[1]);
            let half_gap = 0.5 * (a - d);
            0.5 * (a + d) + half_gap.hypot(b.norm())
        }
    }
}

fn mat_vec(g: &[Complex64], n: usize, v: &[Complex64], out: &mut [Complex64]) {
    for i in 0..n {
        let row = &g[i * n..(i + 1) * n];
        out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
    norm
}

/// Largest eigenvalue of a Hermitian positive semidefinite matrix by power
/// iteration, stopping on the relative change of the Rayleigh quotient.
fn top_eigenvalue(g: &[Complex64], n: usize) -> Result<f64> {
    if n == 0 || g.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return Ok(0.0);
    }
    let mut v: Vec<Complex64> = (0..n)
        .map(|j| {
            let x = j as f64;
            Complex64::new(
                1.0 + (0.754_877_666 * x).fract(),
                0.25 * (0.569_840_291 * x).fract(),
            )
        })
        .collect();
    normalize(&mut v);
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    mat_vec(g, n, &v, &mut w);
    if w.iter().all(|z| z.norm_sqr() == 0.0) {
        let j = (0..n)
            .max_by(|&a, &b| g[a * n + a].re.total_cmp(&g[b * n + b].re))
            .unwrap_or(0);
        v = (0..n).map(|i| g[i * n + j]).collect();
        normalize(&mut v);
    }

    let mut prev = f64::NAN;
    let mut change = f64::INFINITY;
    for _ in 0..POWER_MAX_ITER {
        mat_vec(g, n, &v, &mut w);
        let rho: f64 = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum();
        if rho <= 0.0 {
            return Ok(0.0);
        }
        change = (rho - prev).abs() / rho;
        if change <= POWER_TOL {
            return Ok(rho);
        }
        prev = rho;
        v.copy_from_slice(&w);
        normalize(&mut v);
    }
    Err(Error::PowerIterationStall {
        iterations: POWER_MAX_ITER,
        change,
    })
}
