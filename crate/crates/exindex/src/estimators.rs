//! Extremal-index point estimators at a fixed threshold.

use crate::error::{Error, Result};
use crate::float::{fc, fu, Float};
use crate::gaps::{GapSample, KGapSample};

/// Which estimator produced a value, with its tuning parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorSpec {
    /// Moment estimator on raw inter-exceedance times.
    Intervals,
    /// Maximum-likelihood estimator on K-gaps.
    KGaps { k: u64 },
    /// K-gaps at K=0 with the cluster count pinned to `k` instead of counted.
    K0 { k: usize },
}

impl core::fmt::Display for EstimatorSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::Intervals => write!(f, "intervals"),
            Self::KGaps { k } => write!(f, "kgaps:{k}"),
            Self::K0 { k } => write!(f, "k0:{k}"),
        }
    }
}

/// A point estimate of the extremal index at one threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaEstimate<F: Float> {
    /// Estimate in (0,1].
    pub value: F,
    pub estimator: EstimatorSpec,
    pub threshold: F,
    /// Gap count the estimate is based on.
    pub l: usize,
    /// True when the raw formula value exceeded 1 and was capped.
    pub clipped: bool,
}

/// Intervals estimator from raw inter-exceedance times.
///
/// Two-branch moment formula: with all gaps ≤ 2 steps,
/// `min(1, 2(ΣT)² / (L·ΣT²))`; otherwise the length-bias-adjusted
/// `min(1, 2(Σ(T−1))² / (L·Σ(T−1)(T−2)))`. Returns the estimate and whether
/// the cap at 1 was hit. Sums are accumulated exactly in integers and
/// converted once.
pub fn intervals_theta<F: Float>(t: &[u64]) -> Result<(F, bool)> {
    let l = t.len();
    if l == 0 {
        return Err(Error::EmptyGaps);
    }
    let (num, den) = if t.iter().all(|&ti| ti <= 2) {
        let sum: u128 = t.iter().map(|&ti| ti as u128).sum();
        let sum_sq: u128 = t.iter().map(|&ti| (ti as u128) * (ti as u128)).sum();
        (2.0 * (sum as f64) * (sum as f64), l as f64 * sum_sq as f64)
    } else {
        let sum: u128 = t.iter().map(|&ti| (ti - 1) as u128).sum();
        // (T−1)(T−2) is 0 for T ∈ {1,2} and positive beyond, so u128 is safe
        let sum_pr: u128 = t
            .iter()
            .map(|&ti| (ti - 1) as u128 * (ti.saturating_sub(2)) as u128)
            .sum();
        (2.0 * (sum as f64) * (sum as f64), l as f64 * sum_pr as f64)
    };
    if den == 0.0 {
        return Err(Error::DegenerateDenominator);
    }
    let raw = num / den;
    Ok((fc(raw.min(1.0)), raw > 1.0))
}

/// K-gaps likelihood estimator from its sufficient statistics: gap count L,
/// non-zero gap count N_C, and the normalized-gap sum c.
///
/// Evaluates `0.5·(R − √(R² − 4b/c))` with `R = (a+b)/c + 1`, `a = L − N_C`,
/// `b = 2·N_C`. The discriminant equals `((a+b)/c − 1)² + 4a/c ≥ 0`; values
/// in `[−1e−12, 0)` are rounding and clamp to zero, anything lower is an
/// error. The root can exceed 1 only by rounding and is capped, flagged.
pub fn kgaps_theta<F: Float>(l: usize, n_c: usize, c: F) -> Result<(F, bool)> {
    debug_assert!(n_c <= l);
    if n_c == 0 {
        return Err(Error::NoClusters);
    }
    if !(c > F::zero()) {
        return Err(Error::ZeroNormalizedSum);
    }
    let a = fu::<F>(l - n_c);
    let b = fu::<F>(2 * n_c);
    let r = (a + b) / c + F::one();
    let mut disc = r * r - fc::<F>(4.0) * b / c;
    if disc < F::zero() {
        if disc >= fc(-1e-12) {
            disc = F::zero();
        } else {
            return Err(Error::NegativeDiscriminant(disc.to_f64().unwrap_or(f64::NAN)));
        }
    }
    let raw = fc::<F>(0.5) * (r - disc.sqrt());
    if raw > F::one() {
        Ok((F::one(), true))
    } else {
        Ok((raw, false))
    }
}

pub fn intervals_estimator<F: Float>(g: &GapSample<F>) -> Result<ThetaEstimate<F>> {
    let (value, clipped) = intervals_theta(g.t())?;
    Ok(ThetaEstimate {
        value,
        estimator: EstimatorSpec::Intervals,
        threshold: g.threshold(),
        l: g.l(),
        clipped,
    })
}

pub fn kgaps_estimator<F: Float>(kg: &KGapSample<F>) -> Result<ThetaEstimate<F>> {
    let (value, clipped) = kgaps_theta(kg.l(), kg.n_c(), kg.normalized_sum())?;
    Ok(ThetaEstimate {
        value,
        estimator: EstimatorSpec::KGaps { k: kg.k() },
        threshold: kg.threshold(),
        l: kg.l(),
        clipped,
    })
}

/// K-gaps at K=0 with the cluster count pinned to `k`: the normalizing sum
/// runs over all L normalized gaps while a = L−k, b = 2k.
pub fn k0_estimator<F: Float>(g: &GapSample<F>, k: usize) -> Result<ThetaEstimate<F>> {
    let l = g.l();
    if k == 0 || k > l {
        return Err(Error::BadK { k, max: l });
    }
    let c: F = g.y().iter().copied().sum();
    let (value, clipped) = kgaps_theta(l, k, c)?;
    Ok(ThetaEstimate {
        value,
        estimator: EstimatorSpec::K0 { k },
        threshold: g.threshold(),
        l,
        clipped,
    })
}
