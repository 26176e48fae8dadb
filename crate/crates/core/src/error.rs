//! Error taxonomy shared by all analysis stages.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode surfaced by the library.
///
/// Analysis stages never silently repair their inputs: out-of-domain
/// parameters, uncovered partition points, non-converged solves and
/// low-quality fits are all reported so callers can audit them.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Parameter values violate a hard constraint (finiteness, sign, range).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A point inside the regularity domain matched no subregion, or more
    /// than one, under the printed inequalities. Should be impossible; kept
    /// so an implementation fault is audited rather than masked.
    #[error("boundary ambiguity at (alpha={alpha}, beta={beta}, gamma={gamma}): matched {matched:?}")]
    AmbiguousBoundary {
        alpha: f64,
        beta: f64,
        gamma: f64,
        matched: Vec<String>,
    },

    /// The partition inequalities leave this point uncovered.
    #[error("no partition cell covers (alpha={alpha}, beta={beta}, gamma={gamma})")]
    NoCell { alpha: f64, beta: f64, gamma: f64 },

    /// Two or more partition cells claim the same point (partition fault).
    #[error("partition cells overlap at (alpha={alpha}, beta={beta}, gamma={gamma}): {cells:?}")]
    CellOverlap {
        alpha: f64,
        beta: f64,
        gamma: f64,
        cells: Vec<String>,
    },

    /// A polynomial decay order evaluated to a non-positive or non-finite
    /// value, signalling a label/parameter mismatch.
    #[error("decay order {order} is not a positive finite number")]
    NonPositiveOrder { order: f64 },

    /// A quartic coefficient left the representable floating-point range.
    #[error("coefficient overflow building the characteristic quartic at mu = {mu:e}")]
    Overflow { mu: f64 },

    /// The root solver exhausted its iteration budget.
    #[error("root solve did not converge: best relative residual {residual:e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    /// A power-law fit fell below the required quality gate.
    #[error("power-law fit rejected: {0}")]
    PoorFit(String),

    /// Not enough data points for a meaningful fit.
    #[error("insufficient data: {got} points, need at least {need}")]
    InsufficientData { got: usize, need: usize },

    /// A repeated leading balance could not be resolved by shifting.
    #[error("degenerate leading balance: {0}")]
    DegenerateBalance(String),

    /// Branch refinement ran out of budget before the real part emerged.
    #[error("expansion depth exhausted: {0}")]
    DepthExhausted(String),

    /// In-cell asymptotic signatures disagree between two sample points.
    #[error("asymptotic signature mismatch: {0}")]
    SignatureMismatch(String),

    /// `i*lambda` is numerically an eigenvalue of the weighted modal matrix.
    #[error("singular mode: sigma_min = {sigma_min:e} at mu = {mu:e}, lambda = {lambda:e}")]
    SingularMode { sigma_min: f64, mu: f64, lambda: f64 },

    /// A resolvent curve is unusable for a verdict comparison.
    #[error("inconclusive fit: {0}")]
    InconclusiveFit(String),

    /// No spectral model is registered under the requested name.
    #[error("unknown spectral model '{name}'; known models: {known}")]
    UnknownModel { name: String, known: String },
}
