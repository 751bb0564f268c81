use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument must be positive, got {0}")]
    NonPositiveArgument(f64),

    #[error("evaluation at t = {t} produced a non-finite or non-positive value")]
    NonFinite { t: f64 },

    #[error("adaptive quadrature did not converge on [{lo}, {hi}] within depth {depth}")]
    QuadratureNonConvergence { lo: f64, hi: f64, depth: u32 },

    #[error("sample grid is empty")]
    EmptyGrid,

    #[error("sample grid needs at least {needed} points, got {got}")]
    InsufficientGrid { needed: usize, got: usize },

    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("smoothness order violated: s0 = {s0} > s1 = {s1}")]
    OrderViolation { s0: f64, s1: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error(
        "power iteration stalled after {iterations} iterations (last relative change {change:e})"
    )]
    PowerIterationStall { iterations: usize, change: f64 },

    #[error("ratio f/g on the spectrum reaches {0:e}, exceeding the admissible bound")]
    UnboundedRatio(f64),

    #[error(
        "couples have no common lower spectral bound: eigenvalue {min} below declared r = {r}"
    )]
    NoCommonLowerBound { min: f64, r: f64 },

    #[error("invalid couple: {0}")]
    InvalidCouple(String),

    #[error("invalid parameter function: {0}")]
    InvalidParamFn(String),

    #[error("invalid Fourier distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid chart atlas: {0}")]
    InvalidAtlas(String),

    #[error("grid resolution too low: {0}")]
    ResolutionTooLow(String),

    #[error(
        "support leak in chart {chart}: relative mass {fraction:e} outside the cutoff support"
    )]
    SupportLeak { chart: usize, fraction: f64 },

    #[error("grid under-resolved: refinement changes the value by {relative_change:e}")]
    GridUnderResolved { relative_change: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("not an interpolation parameter: {0}")]
    NotInterpolationParameter(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("expression parse error at column {column}: {message}")]
    ExpressionParse { column: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
