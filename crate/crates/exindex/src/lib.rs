//! Extremal-index estimation for stationary time series.
//!
//! The extremal index θ ∈ (0,1] measures how extremes of a stationary
//! sequence cluster: 1/θ is the mean cluster size, and θ = 1 corresponds to
//! independent-like extremes. This crate estimates θ from the inter-exceedance
//! times above a high threshold and selects that threshold automatically by
//! checking the fitted cluster model with a Cramér–von Mises–Smirnov
//! goodness-of-fit statistic.
//!
//! The pieces, bottom to top:
//!
//! - [`series`] / [`gaps`]: validated input series, exceedance times,
//!   inter-exceedance gaps and their K-gap censoring.
//! - [`estimators`]: the intervals, K-gaps, and pinned-cluster-count (K = 0)
//!   moment estimators.
//! - [`cvm`]: the discrepancy statistic, its small-sample correction, the
//!   limit law of ∫₀¹B²(t)dt (CDF, density, quantiles), and a tail
//!   goodness-of-fit statistic.
//! - [`selection`]: the threshold-selection algorithm — scan a quantile
//!   grid, accept levels where the statistic meets its reference value, and
//!   aggregate the accepted estimates — plus a plateau-finding baseline.
//! - [`simulate`]: seeded, reproducible generators for the stationary
//!   processes commonly used to benchmark θ estimators.
//! - [`config`]: plain-text key-value parsing for selection configs and
//!   process specs.
//! - [`rng`]: the counter-based generator behind all sampling; seeds are
//!   portable across platforms and thread counts.
//!
//! Everything numeric is generic over the scalar type via [`Float`]
//! (`f32` or `f64`); the [`Series`], [`Estimate`], and [`Selection`] aliases
//! fix the common double-precision choice.
//!
//! ```
//! use exindex::selection::{run_algorithm, Mode, SelectionConfig};
//! use exindex::simulate::{simulate, ProcessSpec};
//!
//! let spec = ProcessSpec::Armax { alpha: 0.75 };
//! let series = simulate::<f64>(&spec, 20_000, 7).unwrap();
//! let cfg = SelectionConfig { mode: Mode::Inequality, ..Default::default() };
//! let result = run_algorithm(&series, &cfg).unwrap();
//! let theta = result.theta1.unwrap();
//! assert!(theta > 0.0 && theta <= 1.0);
//! ```

pub mod config;
pub mod cvm;
pub mod error;
pub mod estimators;
pub mod float;
pub mod gaps;
pub mod rng;
pub mod selection;
pub mod series;
pub mod simulate;

pub use cvm::{
    cms_cdf, cms_mode, cms_pdf, cms_quantile, discrepancy_statistic, small_sample_correct,
    tail_gof_statistic, DiscrepancyStatistic, DELTA1, DELTA2,
};
pub use error::{Error, Result};
pub use estimators::{
    intervals_estimator, k0_estimator, kgaps_estimator, EstimatorSpec, ThetaEstimate,
};
pub use float::Float;
pub use gaps::{GapSample, KGapSample};
pub use selection::{
    plateau_a1, run_algorithm, scan_thresholds, solve_discrepancy, EstimatorChoice, KRule, Mode,
    PilotSpec, SelectionConfig, SelectionResult, StatTheta,
};
pub use series::TimeSeries;
pub use simulate::{simulate, Marginal, ProcessSpec};

/// Double-precision series, the common instantiation.
pub type Series = TimeSeries<f64>;
/// Double-precision point estimate.
pub type Estimate = ThetaEstimate<f64>;
/// Double-precision selection outcome.
pub type Selection = SelectionResult<f64>;
