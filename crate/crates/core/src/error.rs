use thiserror::Error;

/// Errors raised by the stability kernel.
#[derive(Debug, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected} points, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: expected d = {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite coordinate {value} at position {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    /// The requested scaling direction has a divergent stabilizer series.
    #[error(
        "divergent series: {mode} scaling requires the {condition} \
         (power controls: {requirement}), but r = {r}"
    )]
    DivergentSeries {
        mode: &'static str,
        condition: &'static str,
        requirement: &'static str,
        r: f64,
    },

    /// r = 1 is the stability threshold; no finite coefficient exists there.
    #[error(
        "r = 1 is the stability threshold: power controls with exponent 1 do not \
         certify a unique multiadditive approximant; run the `threshold` command \
         for the explicit counterexamples"
    )]
    StabilityThreshold,

    /// An assumed inequality failed at a concrete sampled point.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("dyadic scaling overflow: |2^{k} x| exceeds 2^{limit}; shrink the input range")]
    RangeOverflow { k: usize, limit: i32 },

    #[error(
        "scalar counterexample requested with n = 1: the product construction needs \
         n >= 2; evaluate the bounded counterexample function directly"
    )]
    ScalarCounterexample,

    #[error("no violation witness found for the candidate (is it additive, and is eps correct?)")]
    WitnessNotFound,

    #[error("witness depth {depth} exceeds double-precision range (max {max})")]
    WitnessDepthOverflow { depth: u64, max: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
