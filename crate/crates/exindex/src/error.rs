//! Error type shared across the crate.

use thiserror::Error;

/// Failure modes of the estimation pipeline.
///
/// Estimator errors (`EmptyGaps` … `NegativeDiscriminant`) signal that a
/// threshold/parameter combination is infeasible for the data at hand; the
/// threshold-selection scan records them as skips instead of aborting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("time series needs at least 2 values, got {0}")]
    SeriesTooShort(usize),

    #[error("non-finite value at position {0} (1-based)")]
    NonFiniteValue(usize),

    #[error("quantile level must lie strictly inside (0,1), got {0}")]
    InvalidQuantile(f64),

    #[error("only {n_u} exceedance(s) above the threshold; at least 2 required")]
    TooFewExceedances { n_u: usize },

    #[error("no inter-exceedance gaps (L = 0)")]
    EmptyGaps,

    #[error("estimator denominator is zero")]
    DegenerateDenominator,

    #[error("all K-gaps are zero: K too large for this threshold")]
    ZeroNormalizedSum,

    #[error("no non-zero K-gaps (N_C = 0)")]
    NoClusters,

    #[error("k = {k} outside the feasible range [1, {max}]")]
    BadK { k: usize, max: usize },

    #[error("discriminant {0} is negative beyond rounding slack")]
    NegativeDiscriminant(f64),

    #[error("theta must lie in (0,1], got {0}")]
    InvalidTheta(f64),

    #[error("statistic anchor is degenerate (model survival vanished)")]
    NonFiniteStatistic,

    #[error("need at least k+1 ≥ 2 ascending order statistics, got {0}")]
    TooFewOrderStatistics(usize),

    #[error("reference cdf saturates at the conditioning order statistic")]
    DegenerateTail,

    #[error("discrepancy equation/inequality has no solutions on the grid")]
    NoSolutions,

    #[error("no plateau of the required length in the smoothed curve")]
    NoPlateau,

    #[error("invalid process parameters: {0}")]
    InvalidParams(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("config line {line}: {msg}")]
    ConfigSyntax { line: usize, msg: String },
}

pub type Result<T> = core::result::Result<T, Error>;
