//! Integral representation of quasislowly varying functions,
//! `φ(t) = exp(β(t) + ∫_r^t α(τ)/τ dτ)` for `t >= r`.
//!
//! Below `r` the value is frozen at `exp(β(r))` so that the function is
//! total on `(0, ∞)`.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use super::quadrature::{self, SimpsonConfig};
use crate::error::{Error, Result};

/// Continuous `α: [r, ∞) → ℝ` with `α(t) → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlphaSpec {
    Zero,
    /// `a / ln τ`
    InvLog {
        a: f64,
    },
    /// `a / τ^p`, `p > 0`
    InvPow {
        a: f64,
        p: f64,
    },
    /// `a · sin(ln τ) / ln τ`
    SinLog {
        a: f64,
    },
}

/// Bounded `β: [r, ∞) → ℝ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BetaSpec {
    Const {
        b: f64,
    },
    /// `b · sin(ln ln(t + e))`
    SinLogLog {
        b: f64,
    },
    /// `0` below `at`, `b` from `at` on.
    Step {
        b: f64,
        at: f64,
    },
}

impl AlphaSpec {
    pub fn eval(&self, tau: f64) -> f64 {
        match *self {
            AlphaSpec::Zero => 0.0,
            AlphaSpec::InvLog { a } => a / tau.ln(),
            AlphaSpec::InvPow { a, p } => a * tau.powf(-p),
            AlphaSpec::SinLog { a } => {
                let l = tau.ln();
                a * l.sin() / l
            }
        }
    }

    /// Declared amplitude `|a|`.
    pub fn amplitude(&self) -> f64 {
        match *self {
            AlphaSpec::Zero => 0.0,
            AlphaSpec::InvLog { a } | AlphaSpec::InvPow { a, .. } | AlphaSpec::SinLog { a } => {
                a.abs()
            }
        }
    }

    fn validate(&self, r: f64) -> Result<()> {
        let finite = match *self {
            AlphaSpec::Zero => true,
            AlphaSpec::InvLog { a } | AlphaSpec::SinLog { a } => {
                if r <= 1.0 {
                    return Err(Error::InvalidParamFn(format!(
                        "logarithmic alpha needs r > 1, got r = {r}"
                    )));
                }
                a.is_finite()
            }
            AlphaSpec::InvPow { a, p } => {
                if !(p > 0.0) {
                    return Err(Error::NonPositiveParameter {
                        name: "p",
                        value: p,
                    });
                }
                a.is_finite() && p.is_finite()
            }
        };
        if finite {
            Ok(())
        } else {
            Err(Error::InvalidParamFn(
                "alpha parameters must be finite".into(),
            ))
        }
    }
}

impl BetaSpec {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            BetaSpec::Const { b } => b,
            BetaSpec::SinLogLog { b } => b * (t + E).ln().ln().sin(),
            BetaSpec::Step { b, at } => {
                if t >= at {
                    b
                } else {
                    0.0
                }
            }
        }
    }

    /// Declared bound on `sup |β|`.
    pub fn bound(&self) -> f64 {
        match *self {
            BetaSpec::Const { b } | BetaSpec::SinLogLog { b } | BetaSpec::Step { b, .. } => b.abs(),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            BetaSpec::Const { b } | BetaSpec::SinLogLog { b } => b.is_finite(),
            BetaSpec::Step { b, at } => b.is_finite() && at.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParamFn(
                "beta parameters must be finite".into(),
            ))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KaramataForm {
    pub alpha: AlphaSpec,
    pub beta: BetaSpec,
    pub r: f64,
}

impl KaramataForm {
    pub fn new(alpha: AlphaSpec, beta: BetaSpec, r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::NonPositiveParameter {
                name: "r",
                value: r,
            });
        }
        alpha.validate(r)?;
        beta.validate()?;
        Ok(KaramataForm { alpha, beta, r })
    }

    /// `∫_r^t α(τ)/τ dτ`, computed as `∫_{ln r}^{ln t} α(e^u) du`.
    pub fn log_integral(&self, t: f64) -> Result<f64> {
        if t <= self.r || matches!(self.alpha, AlphaSpec::Zero) {
            return Ok(0.0);
        }
        let alpha = self.alpha;
        quadrature::integrate(
            move |u| alpha.eval(u.exp()),
            self.r.ln(),
            t.ln(),
            SimpsonConfig::default(),
        )
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if t <= self.r {
            return Ok(self.beta.eval(self.r).exp());
        }
        Ok((self.beta.eval(t) + self.log_integral(t)?).exp())
    }
}
