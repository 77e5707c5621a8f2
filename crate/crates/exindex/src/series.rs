//! Time-series container, empirical quantile thresholds, exceedance positions.

use crate::error::{Error, Result};
use crate::float::Float;

/// A validated sample: at least two observations, all finite.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<F: Float> {
    values: Vec<F>,
}

impl<F: Float> TimeSeries<F> {
    pub fn new(values: Vec<F>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::SeriesTooShort(values.len()));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(pos + 1));
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false: construction requires n ≥ 2.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    /// Ascending copy of the sample.
    pub fn sorted(&self) -> Vec<F> {
        let mut v = self.values.clone();
        v.sort_unstable_by(|a, b| a.partial_cmp(b).expect("values validated finite"));
        v
    }

    /// Empirical quantile: the order statistic X_{⌈q·n⌉,n}, no interpolation.
    ///
    /// The returned threshold is always an observed value, so N_u ≥ 1 holds
    /// for every level q < 1 under the strict exceedance rule.
    pub fn quantile_threshold(&self, q: f64) -> Result<F> {
        order_statistic(&self.sorted(), q)
    }

    /// 1-based positions i with X_i > u, strictly increasing.
    pub fn exceedance_indices(&self, u: F) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, &x)| (x > u).then_some(i + 1))
            .collect()
    }
}

/// X_{⌈q·n⌉,n} from an ascending sample.
///
/// The rank ⌈q·n⌉ is computed as ceil(q·n − 1e−9) so levels that hit an
/// integer rank exactly are not pushed one slot up by round-off
/// (0.9·10 evaluates to 9.000000000000002), then clamped to [1, n].
pub fn order_statistic<F: Float>(sorted: &[F], q: f64) -> Result<F> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidQuantile(q));
    }
    debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
    let n = sorted.len();
    let rank = ((q * n as f64 - 1e-9).ceil() as usize).clamp(1, n);
    Ok(sorted[rank - 1])
}
