use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::hormander::FourierDistribution;

/// Smooth function on `S¹`, either as Fourier coefficients or as samples
/// `f(2πm/M)`, `m = 0..M`.
#[derive(Debug, Clone, PartialEq)]
pub enum CircleFunction {
    Spectral(FourierDistribution),
    Samples(Vec<Complex64>),
}

impl CircleFunction {
    pub fn spectral(u: FourierDistribution) -> Result<Self> {
        if u.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: u.dim(),
            });
        }
        Ok(CircleFunction::Spectral(u))
    }

    /// `c·e^{ikθ}`.
    pub fn mode(k: i64, c: Complex64) -> Result<Self> {
        Self::spectral(FourierDistribution::single_mode(&[k], c)?)
    }

    /// Samples on the `m`-point grid. Spectral inputs need `m > 2K`.
    pub fn to_samples(&self, m: usize) -> Result<Vec<Complex64>> {
        match self {
            CircleFunction::Samples(v) => {
                if v.len() != m {
                    return Err(Error::DimensionMismatch {
                        expected: m,
                        got: v.len(),
                    });
                }
                Ok(v.clone())
            }
            CircleFunction::Spectral(u) => {
                if (m as u64) <= 2 * u.band() {
                    return Err(Error::ResolutionTooLow(format!(
                        "{m} samples cannot carry band {}",
                        u.band()
                    )));
                }
                let mut buf = vec![Complex64::new(0.0, 0.0); m];
                for (k, c) in u.modes() {
                    buf[k[0].rem_euclid(m as i64) as usize] = *c;
                }
                FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
                Ok(buf)
            }
        }
    }

    /// Coefficients for `|k| <= (M-1)/2`; spectral inputs are returned as is.
    pub fn to_spectral(&self) -> Result<FourierDistribution> {
        match self {
            CircleFunction::Spectral(u) => Ok(u.clone()),
            CircleFunction::Samples(v) => {
                let m = v.len();
                if m == 0 {
                    return Err(Error::EmptyGrid);
                }
                let band = ((m - 1) / 2) as u64;
                let mut buf = v.clone();
                FftPlanner::new().plan_fft_forward(m).process(&mut buf);
                let mut u = FourierDistribution::new(1, band)?;
                let scale = 1.0 / m as f64;
                for k in -(band as i64)..=(band as i64) {
                    let c = buf[k.rem_euclid(m as i64) as usize] * scale;
                    if c != Complex64::new(0.0, 0.0) {
                        u.set(vec![k], c)?;
                    }
                }
                Ok(u)
            }
        }
    }

    /// Evaluator `θ ↦ f(θ)`; sample inputs go through their coefficients,
    /// dropping those below `1e-17` of the largest.
    pub(crate) fn evaluator(&self) -> Result<Evaluator> {
        let u = self.to_spectral()?;
        let max = u.modes().map(|(_, c)| c.norm()).fold(0.0, f64::max);
        let coeffs: Vec<(i64, Complex64)> = u
            .modes()
            .filter(|(_, c)| c.norm() > 1e-17 * max)
            .map(|(k, c)| (k[0], *c))
            .collect();
        Ok(Evaluator::new(coeffs))
    }

    pub fn eval(&self, theta: f64) -> Result<Complex64> {
        Ok(self.evaluator()?.eval(theta))
    }
}

/// Horner evaluation of `Σ c_k z^k` at `z = e^{iθ}`.
pub(crate) struct Evaluator {
    low: i64,
    dense: Vec<Complex64>,
}

impl Evaluator {
    fn new(coeffs: Vec<(i64, Complex64)>) -> Self {
        let low = coeffs.iter().map(|(k, _)| *k).min().unwrap_or(0);
        let high = coeffs.iter().map(|(k, _)| *k).max().unwrap_or(0);
        let mut dense = vec![Complex64::new(0.0, 0.0); (high - low + 1) as usize];
        for (k, c) in coeffs {
            dense[(k - low) as usize] = c;
        }
        Evaluator { low, dense }
    }

    pub(crate) fn eval(&self, theta: f64) -> Complex64 {
        let z = Complex64::cis(theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.dense.iter().rev() {
            acc = acc * z + c;
        }
        acc * Complex64::cis(self.low as f64 * theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::random_distribution;
    use crate::rng::instance_rng;
    use std::f64::consts::PI;

    #[test]
    fn spectral_sample_round_trip() {
        let mut rng = instance_rng(11, 0);
        for _ in 0..20 {
            let u = random_distribution(&mut rng, 1, 32, 40);
            let f = CircleFunction::spectral(u.clone()).unwrap();
            let back = CircleFunction::Samples(f.to_samples(65).unwrap())
                .to_spectral()
                .unwrap();
            for k in -32..=32i64 {
                assert!((back.get(&[k]) - u.get(&[k])).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn samples_match_direct_sum() {
        let mut rng = instance_rng(12, 0);
        let u = random_distribution(&mut rng, 1, 8, 10);
        let f = CircleFunction::spectral(u.clone()).unwrap();
        let s = f.to_samples(32).unwrap();
        for (m, v) in s.iter().enumerate() {
            let th = 2.0 * PI * m as f64 / 32.0;
            let direct: Complex64 = u
                .modes()
                .map(|(k, c)| c * Complex64::cis(k[0] as f64 * th))
                .sum();
            assert!((v - direct).norm() <= 1e-13);
            assert!((f.eval(th).unwrap() - direct).norm() <= 1e-13);
        }
    }

    #[test]
    fn band_must_fit_grid() {
        let f = CircleFunction::mode(8, Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(f.to_samples(16), Err(Error::ResolutionTooLow(_))));
        assert!(f.to_samples(17).is_ok());
        let torus = FourierDistribution::new(2, 3).unwrap();
        assert!(CircleFunction::spectral(torus).is_err());
    }
}
