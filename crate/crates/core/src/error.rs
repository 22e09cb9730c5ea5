use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Lévy index {0} is outside the admissible range 1 < α ≤ 2")]
    AlphaOutOfRange(f64),

    #[error("operands carry different Lévy indices ({0} vs {1})")]
    AlphaMismatch(f64, f64),

    #[error("operands disagree on the envelope flag")]
    EnvelopeMismatch,

    #[error("cannot evaluate at k = {k}: {reason}")]
    Evaluation { k: f64, reason: &'static str },

    #[error("state index {n} exceeds the configured maximum {max}")]
    StateIndexTooLarge { n: usize, max: usize },

    #[error("no closed-form energy is available for n = {0} (only 0, 1, 2)")]
    NoClosedForm(usize),

    #[error("denominator of a rational power sum is the zero sum")]
    ZeroDenominator,

    #[error("every sample point was excluded")]
    EmptyCurve,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("expected a state in the {expected} representation")]
    WrongRepresentation { expected: &'static str },

    #[error("Riesz derivative order {0} is outside (0, 2]")]
    RieszOrderOutOfRange(f64),

    #[error("state is not resolved on the grid: |φ(k_max)| / max|φ| = {0:e}")]
    Truncation(f64),
}
