//! Positive parameter functions on the semiaxis `(0, ∞)`.
//!
//! A [`ParamFn`] is an immutable expression tree. Leaves are constants,
//! powers, logarithmic multiscales and Karamata integral forms; inner nodes
//! combine them algebraically or through the fixed compositions used to
//! build interpolation parameters. Every tree carries a *declared*
//! regular-variation index, propagated structurally, so results about
//! regularly varying parameters can be applied by construction.

mod certify;
mod derived;
mod expr;
pub mod karamata;
pub mod quadrature;

use std::fmt;
use std::ops::{Add, Div, Mul};
use std::sync::Arc;

pub use certify::{
    check_set_b, default_grid, geometric_grid, is_interpolation_parameter_evidence, nested_extents,
    quasiconcavity_certificate, CompactMax, InterpolationEvidence, QuasiconcavityCertificate,
    SetBReport, Verdict, DEFAULT_GRID_HI, DEFAULT_GRID_LO, DEFAULT_GRID_POINTS, GROWTH_THRESHOLD,
    NESTED_LEVELS,
};
pub use derived::{
    dual_chi, interpolated_index, interpolation_psi, karamata_build, phi_s, qsv_compose,
    reiteration_omega,
};
pub use expr::parse;
pub use karamata::{AlphaSpec, BetaSpec, KaramataForm};

use crate::error::{Error, Result};

/// Maximum nesting depth of iterated logarithms in a multiscale leaf.
pub const MAX_LOG_LEVELS: usize = 3;

/// Tower `exp(exp(...exp(1)))` with `levels` exponentials; shifting the
/// argument by it keeps every iterated logarithm `>= 1` for `t >= 0`.
fn log_shift(levels: usize) -> f64 {
    (0..levels).fold(1.0, |acc, _| f64::exp(acc))
}

#[derive(Debug)]
pub enum Node {
    Constant(f64),
    Power(f64),
    /// `Π_i (ln_i(t + shift))^{r_i}` with `ln_i` the i-fold logarithm.
    LogMultiscale(Vec<f64>),
    Karamata(KaramataForm),
    Product(ParamFn, ParamFn),
    Quotient(ParamFn, ParamFn),
    RealPower(ParamFn, f64),
    Sum(ParamFn, ParamFn),
    /// `outer(inner(t))`
    Compose(ParamFn, ParamFn),
    /// `t^{ε/(ε+δ)} φ(t^{1/(ε+δ)})` for `t >= 1`, `φ(1)` below.
    Composition34 {
        phi: ParamFn,
        eps: f64,
        delta: f64,
    },
    /// `χ(t^θ φ(t))`
    CompositionQsv {
        chi: ParamFn,
        theta: f64,
        phi: ParamFn,
    },
    /// `t^{s/m} φ(t^{1/m})` for `t >= 1`, `φ(1)` below.
    PhiS {
        phi: ParamFn,
        s: f64,
        m: f64,
    },
    /// `inner(max(t, t0))`
    LowCutoffClamp {
        inner: ParamFn,
        t0: f64,
    },
}

/// Immutable, cheaply clonable parameter function.
#[derive(Debug, Clone)]
pub struct ParamFn(Arc<Node>);

impl ParamFn {
    fn from_node(node: Node) -> Self {
        ParamFn(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::NonPositiveParameter {
                name: "c",
                value: c,
            });
        }
        Ok(Self::from_node(Node::Constant(c)))
    }

    pub fn one() -> Self {
        Self::from_node(Node::Constant(1.0))
    }

    pub fn power(theta: f64) -> Self {
        assert!(theta.is_finite(), "power exponent must be finite");
        Self::from_node(Node::Power(theta))
    }

    pub fn log_multiscale(exponents: &[f64]) -> Result<Self> {
        if exponents.is_empty() || exponents.len() > MAX_LOG_LEVELS {
            return Err(Error::InvalidParamFn(format!(
                "log multiscale takes 1..={MAX_LOG_LEVELS} exponents, got {}",
                exponents.len()
            )));
        }
        if exponents.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidParamFn("log exponents must be finite".into()));
        }
        Ok(Self::from_node(Node::LogMultiscale(exponents.to_vec())))
    }

    pub fn karamata(form: KaramataForm) -> Self {
        Self::from_node(Node::Karamata(form))
    }

    pub fn powf(&self, sigma: f64) -> Self {
        assert!(sigma.is_finite(), "real power must be finite");
        Self::from_node(Node::RealPower(self.clone(), sigma))
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: &ParamFn, inner: &ParamFn) -> Self {
        Self::from_node(Node::Compose(outer.clone(), inner.clone()))
    }

    pub fn clamp_below(&self, t0: f64) -> Result<Self> {
        if !(t0 > 0.0) || !t0.is_finite() {
            return Err(Error::NonPositiveParameter {
                name: "t0",
                value: t0,
            });
        }
        Ok(Self::from_node(Node::LowCutoffClamp {
            inner: self.clone(),
            t0,
        }))
    }

    pub(crate) fn composition34(phi: &ParamFn, eps: f64, delta: f64) -> Self {
        Self::from_node(Node::Composition34 {
            phi: phi.clone(),
            eps,
            delta,
        })
    }

    pub(crate) fn composition_qsv(chi: &ParamFn, theta: f64, phi: &ParamFn) -> Self {
        Self::from_node(Node::CompositionQsv {
            chi: chi.clone(),
            theta,
            phi: phi.clone(),
        })
    }

    pub(crate) fn phi_s_node(phi: &ParamFn, s: f64, m: f64) -> Self {
        Self::from_node(Node::PhiS {
            phi: phi.clone(),
            s,
            m,
        })
    }

    /// Value at `t > 0`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::NonPositiveArgument(t));
        }
        let v = self.eval_raw(t)?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { t })
        }
    }

    fn eval_raw(&self, t: f64) -> Result<f64> {
        Ok(match self.node() {
            Node::Constant(c) => *c,
            Node::Power(theta) => t.powf(*theta),
            Node::LogMultiscale(rs) => {
                let mut level = t + log_shift(rs.len());
                let mut acc = 1.0;
                for r in rs {
                    level = level.ln();
                    acc *= level.powf(*r);
                }
                acc
            }
            Node::Karamata(k) => k.eval(t)?,
            Node::Product(a, b) => a.eval(t)? * b.eval(t)?,
            Node::Quotient(a, b) => a.eval(t)? / b.eval(t)?,
            Node::RealPower(a, sigma) => a.eval(t)?.powf(*sigma),
            Node::Sum(a, b) => a.eval(t)? + b.eval(t)?,
            Node::Compose(outer, inner) => outer.eval(inner.eval(t)?)?,
            Node::Composition34 { phi, eps, delta } => {
                if t < 1.0 {
                    phi.eval(1.0)?
                } else {
                    let total = eps + delta;
                    t.powf(eps / total) * phi.eval(t.powf(1.0 / total))?
                }
            }
            Node::CompositionQsv { chi, theta, phi } => chi.eval(t.powf(*theta) * phi.eval(t)?)?,
            Node::PhiS { phi, s, m } => {
                if t < 1.0 {
                    phi.eval(1.0)?
                } else {
                    t.powf(s / m) * phi.eval(t.powf(1.0 / m))?
                }
            }
            Node::LowCutoffClamp { inner, t0 } => inner.eval(t.max(*t0))?,
        })
    }

    /// Declared index of (quasi)regular variation at `+∞`, if the
    /// construction determines one. `Some(0.0)` means quasislowly varying.
    pub fn declared_index(&self) -> Option<f64> {
        match self.node() {
            Node::Constant(_) | Node::LogMultiscale(_) | Node::Karamata(_) => Some(0.0),
            Node::Power(theta) => Some(*theta),
            Node::Product(a, b) => Some(a.declared_index()? + b.declared_index()?),
            Node::Quotient(a, b) => Some(a.declared_index()? - b.declared_index()?),
            Node::RealPower(a, sigma) => Some(a.declared_index()? * sigma),
            Node::Sum(a, b) => Some(a.declared_index()?.max(b.declared_index()?)),
            Node::Compose(outer, inner) => {
                let inner_index = inner.declared_index()?;
                if inner_index > 0.0 {
                    Some(outer.declared_index()? * inner_index)
                } else {
                    None
                }
            }
            Node::Composition34 { phi, eps, delta } => {
                (phi.declared_index()? == 0.0).then(|| eps / (eps + delta))
            }
            Node::CompositionQsv { chi, phi, .. } => {
                (chi.declared_index()? == 0.0 && phi.declared_index()? == 0.0).then_some(0.0)
            }
            Node::PhiS { phi, s, m } => (phi.declared_index()? == 0.0).then(|| s / m),
            Node::LowCutoffClamp { inner, .. } => inner.declared_index(),
        }
    }

    pub fn is_declared_qsv(&self) -> bool {
        self.declared_index() == Some(0.0)
    }
}

impl Mul for ParamFn {
    type Output = ParamFn;
    fn mul(self, rhs: ParamFn) -> ParamFn {
        ParamFn::from_node(Node::Product(self, rhs))
    }
}

impl Div for ParamFn {
    type Output = ParamFn;
    fn div(self, rhs: ParamFn) -> ParamFn {
        ParamFn::from_node(Node::Quotient(self, rhs))
    }
}

impl Add for ParamFn {
    type Output = ParamFn;
    fn add(self, rhs: ParamFn) -> ParamFn {
        ParamFn::from_node(Node::Sum(self, rhs))
    }
}

impl fmt::Display for ParamFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Constant(c) => write!(f, "const({c:?})"),
            Node::Power(theta) => write!(f, "pow({theta:?})"),
            Node::LogMultiscale(rs) => {
                write!(f, "logms(")?;
                for (i, r) in rs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{r:?}")?;
                }
                write!(f, ")")
            }
            Node::Karamata(k) => {
                write!(f, "karamata(alpha=")?;
                match k.alpha {
                    AlphaSpec::Zero => write!(f, "zero")?,
                    AlphaSpec::InvLog { a } => write!(f, "inv_log({a:?})")?,
                    AlphaSpec::InvPow { a, p } => write!(f, "inv_pow({a:?},{p:?})")?,
                    AlphaSpec::SinLog { a } => write!(f, "sin_log({a:?})")?,
                }
                write!(f, ",beta=")?;
                match k.beta {
                    BetaSpec::Const { b } => write!(f, "const({b:?})")?,
                    BetaSpec::SinLogLog { b } => write!(f, "sin_loglog({b:?})")?,
                    BetaSpec::Step { b, at } => write!(f, "step({b:?},{at:?})")?,
                }
                write!(f, ",r={:?})", k.r)
            }
            Node::Product(a, b) => write!(f, "({a})*({b})"),
            Node::Quotient(a, b) => write!(f, "({a})/({b})"),
            Node::RealPower(a, sigma) => write!(f, "({a})^({sigma:?})"),
            Node::Sum(a, b) => write!(f, "({a})+({b})"),
            Node::Compose(outer, inner) => write!(f, "compose({outer},{inner})"),
            Node::Composition34 { phi, eps, delta } => {
                write!(f, "interp({phi},{eps:?},{delta:?})")
            }
            Node::CompositionQsv { chi, theta, phi } => write!(f, "qsv({chi},{theta:?},{phi})"),
            Node::PhiS { phi, s, m } => write!(f, "phis({phi},{s:?},{m:?})"),
            Node::LowCutoffClamp { inner, t0 } => write!(f, "clamp({inner},{t0:?})"),
        }
    }
}
