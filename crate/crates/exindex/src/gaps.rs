//! Exceedance bookkeeping: inter-exceedance times, normalized gaps, K-gaps.

use crate::error::{Error, Result};
use crate::float::{fu, Float};
use crate::series::TimeSeries;

/// Gap structure of a series above one threshold.
///
/// Positions are 1-based. `t[i] = s[i+1] − s[i]` are the raw inter-exceedance
/// times (each ≥ 1) and `y[i] = (N_u/n)·t[i]` their normalized counterparts;
/// both are kept in observation order.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSample<F: Float> {
    threshold: F,
    n: usize,
    indices: Vec<usize>,
    t: Vec<u64>,
    y: Vec<F>,
}

impl<F: Float> GapSample<F> {
    pub fn from_series(series: &TimeSeries<F>, u: F) -> Result<Self> {
        Self::from_indices(series.exceedance_indices(u), series.len(), u)
    }

    /// Build directly from 1-based exceedance positions.
    ///
    /// Panics if the positions are not strictly increasing within [1, n];
    /// returns `TooFewExceedances` when fewer than two positions are given.
    pub fn from_indices(indices: Vec<usize>, n: usize, threshold: F) -> Result<Self> {
        assert!(
            indices.windows(2).all(|w| w[0] < w[1]),
            "exceedance positions must be strictly increasing"
        );
        assert!(
            indices.first().is_none_or(|&s| s >= 1) && indices.last().is_none_or(|&s| s <= n),
            "exceedance positions must lie in [1, n]"
        );
        if indices.len() < 2 {
            return Err(Error::TooFewExceedances { n_u: indices.len() });
        }
        let fbar = fu::<F>(indices.len()) / fu::<F>(n);
        let t: Vec<u64> = indices.windows(2).map(|w| (w[1] - w[0]) as u64).collect();
        let y: Vec<F> = t
            .iter()
            .map(|&ti| fbar * F::from_u64(ti).expect("gap fits the scalar type"))
            .collect();
        Ok(Self { threshold, n, indices, t, y })
    }

    pub fn threshold(&self) -> F {
        self.threshold
    }

    /// Length of the originating series.
    pub fn series_len(&self) -> usize {
        self.n
    }

    /// 1-based exceedance positions S₁ < … < S_{N_u}.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Exceedance count N_u.
    pub fn n_u(&self) -> usize {
        self.indices.len()
    }

    /// Gap count L = N_u − 1.
    pub fn l(&self) -> usize {
        self.t.len()
    }

    /// Raw inter-exceedance times, observation order.
    pub fn t(&self) -> &[u64] {
        &self.t
    }

    /// Normalized gaps (N_u/n)·T_i, observation order.
    pub fn y(&self) -> &[F] {
        &self.y
    }

    /// Normalized gaps sorted ascending.
    pub fn sorted_y(&self) -> Vec<F> {
        let mut v = self.y.clone();
        v.sort_unstable_by(|a, b| a.partial_cmp(b).expect("normalized gaps are finite"));
        v
    }

    /// Empirical exceedance rate F̄(u) = N_u/n.
    pub fn fbar(&self) -> F {
        fu::<F>(self.n_u()) / fu::<F>(self.n)
    }
}

/// K-gaps of a `GapSample`: raw times with the first K steps forgiven.
#[derive(Debug, Clone, PartialEq)]
pub struct KGapSample<F: Float> {
    threshold: F,
    k: u64,
    s_k: Vec<u64>,
    normalized: Vec<F>,
    n_c: usize,
}

impl<F: Float> KGapSample<F> {
    pub fn from_gaps(g: &GapSample<F>, k: u64) -> Self {
        let fbar = g.fbar();
        let s_k: Vec<u64> = g.t().iter().map(|&ti| ti.saturating_sub(k)).collect();
        let normalized: Vec<F> = s_k
            .iter()
            .map(|&si| fbar * F::from_u64(si).expect("gap fits the scalar type"))
            .collect();
        let n_c = s_k.iter().filter(|&&si| si > 0).count();
        Self { threshold: g.threshold(), k, s_k, normalized, n_c }
    }

    pub fn threshold(&self) -> F {
        self.threshold
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Gap count L (clipped gaps included).
    pub fn l(&self) -> usize {
        self.s_k.len()
    }

    /// Raw K-gaps max(T_i − K, 0), observation order.
    pub fn s_k(&self) -> &[u64] {
        &self.s_k
    }

    /// Normalized K-gaps F̄(u)·max(T_i − K, 0), observation order.
    pub fn normalized(&self) -> &[F] {
        &self.normalized
    }

    /// Normalized K-gaps sorted ascending (zeros included).
    pub fn sorted_normalized(&self) -> Vec<F> {
        let mut v = self.normalized.clone();
        v.sort_unstable_by(|a, b| a.partial_cmp(b).expect("normalized gaps are finite"));
        v
    }

    /// Count of non-zero K-gaps N_C.
    pub fn n_c(&self) -> usize {
        self.n_c
    }

    /// Σ F̄(u)·S_K_i, the normalizing sum of the likelihood.
    pub fn normalized_sum(&self) -> F {
        self.normalized.iter().copied().sum()
    }
}
