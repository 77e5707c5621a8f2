//! Automatic threshold selection: scan a quantile grid, fit the conditional
//! cluster model at each level, and accept the levels where the discrepancy
//! statistic meets its reference value — by equation (stat = δ₁, crossing
//! detection) or by inequality (stat ≤ δ₂). Accepted levels are aggregated
//! into three summary estimates: the mean over solutions and the values at
//! the smallest and largest solution thresholds.
//!
//! A moving-average plateau finder over the estimate-vs-threshold curve is
//! included as a baseline selector.

use std::collections::{BTreeMap, BTreeSet};

use crate::cvm::{discrepancy_statistic, small_sample_correct, DELTA1, DELTA2};
use crate::error::{Error, Result};
use crate::estimators::{
    intervals_estimator, k0_estimator, kgaps_estimator, EstimatorSpec, ThetaEstimate,
};
use crate::float::{fc, fu, Float};
use crate::gaps::{GapSample, KGapSample};
use crate::series::{order_statistic, TimeSeries};

/// Rule mapping (gap count L, pilot estimate θ̂₀) to the statistic depth k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KRule {
    /// k = ⌊θ̂₀·L⌋, with k = L−1 when θ̂₀ = 1.
    PilotL,
    /// k = min(⌊θ̂₀·L⌋, ⌊√L⌋).
    MinPilotSqrt,
    /// k = ⌊(ln L)²⌋.
    LogSquared,
    /// k = ⌊s·L⌋ for a fixed fraction s (s ≥ 1 behaves like θ̂₀ = 1).
    FixedTheta(f64),
}

/// How solution levels are recognized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// stat = δ₁ up to `tolerance`, plus sign-change detection on the grid.
    Equation,
    /// stat ≤ δ₂ pointwise.
    Inequality,
}

/// Which θ feeds the fitted model inside the discrepancy statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatTheta {
    /// The pilot estimate (default).
    Pilot,
    /// The candidate estimator's own value at the level.
    Candidate,
}

/// Estimator producing the pilot estimate θ̂₀; restricted to variants that
/// need no depth parameter themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PilotSpec {
    Intervals,
    KGaps { k: u64 },
}

/// Candidate estimator evaluated at each grid level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorChoice {
    Intervals,
    /// K-gaps at one fixed K.
    KGaps { k: u64 },
    /// K-gaps with every K in an inclusive range as a separate candidate;
    /// each feasible (level, K) pair enters the solution search on its own.
    KGapsScan { lo: u64, hi: u64 },
    /// K=0 gaps with pinned cluster count: the k-rule value, or a fixed one.
    K0 { k: Option<usize> },
}

/// Full parameterization of the threshold-selection algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionConfig {
    /// Quantile levels scanned, strictly increasing inside (0,1).
    pub levels: Vec<f64>,
    pub mode: Mode,
    /// Equation-mode reference value (mode of the ω² law).
    pub delta1: f64,
    /// Inequality-mode reference value (upper ω² quantile).
    pub delta2: f64,
    pub k_rule: KRule,
    pub estimator: EstimatorChoice,
    pub pilot: PilotSpec,
    pub stat_theta: StatTheta,
    /// Direct-hit tolerance for equation mode (0 = crossings only).
    pub tolerance: f64,
    /// Bandwidth fraction of the plateau baseline.
    pub w: f64,
}

/// The canonical scan grid: 0.90 to 0.995 in steps of 0.005.
pub fn default_levels() -> Vec<f64> {
    (0..20).map(|i| 0.90 + 0.005 * i as f64).collect()
}

impl Default for SelectionConfig {
    fn default() -> Self {
        Self {
            levels: default_levels(),
            mode: Mode::Equation,
            delta1: DELTA1,
            delta2: DELTA2,
            k_rule: KRule::PilotL,
            estimator: EstimatorChoice::Intervals,
            pilot: PilotSpec::Intervals,
            stat_theta: StatTheta::Pilot,
            tolerance: 0.0,
            w: 0.25,
        }
    }
}

impl SelectionConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.levels.is_empty() {
            return fail("at least one quantile level is required".into());
        }
        if self.levels.iter().any(|&q| !(q > 0.0 && q < 1.0)) {
            return fail("quantile levels must lie strictly inside (0,1)".into());
        }
        if self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return fail("quantile levels must be strictly increasing".into());
        }
        if !(self.delta1 > 0.0) || !(self.delta2 > 0.0) {
            return fail(format!(
                "reference values must be positive, got delta1={} delta2={}",
                self.delta1, self.delta2
            ));
        }
        if !(self.tolerance >= 0.0) || !self.tolerance.is_finite() {
            return fail(format!("tolerance must be a finite non-negative value, got {}", self.tolerance));
        }
        if let KRule::FixedTheta(s) = self.k_rule {
            if !(s > 0.0) || !s.is_finite() {
                return fail(format!("fixed k-rule fraction must be positive, got {s}"));
            }
        }
        match self.estimator {
            EstimatorChoice::KGapsScan { lo, hi } if lo > hi => {
                return fail(format!("K scan range is empty: {lo}..{hi}"));
            }
            EstimatorChoice::K0 { k: Some(0) } => {
                return fail("pinned cluster count must be at least 1".into());
            }
            _ => {}
        }
        if !(self.w > 0.0 && self.w < 1.0) {
            return fail(format!("plateau bandwidth fraction must lie in (0,1), got {}", self.w));
        }
        Ok(())
    }
}

/// Depth k for the discrepancy statistic, clamped to [1, L−1].
pub fn select_k(rule: KRule, l: usize, pilot_theta: f64) -> usize {
    debug_assert!(l >= 2);
    let lf = l as f64;
    // ⌊s·L⌋ with a nudge so exact integer products are not pushed down
    let scaled = |s: f64| -> usize {
        if s >= 1.0 {
            l - 1
        } else {
            (s * lf + 1e-9).floor() as usize
        }
    };
    let raw = match rule {
        KRule::PilotL => scaled(pilot_theta),
        KRule::MinPilotSqrt => scaled(pilot_theta).min((lf.sqrt() + 1e-9).floor() as usize),
        KRule::LogSquared => (lf.ln().powi(2) + 1e-9).floor() as usize,
        KRule::FixedTheta(s) => scaled(s),
    };
    raw.clamp(1, l - 1)
}

/// One evaluated (level, K) pair of the grid scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate<F: Float> {
    pub q: f64,
    /// Threshold: the order statistic at level `q`.
    pub u: F,
    pub n_u: usize,
    pub l: usize,
    /// Statistic depth chosen by the k-rule.
    pub k: usize,
    /// K-gap parameter of the candidate estimator, when it has one.
    pub kgap: Option<u64>,
    /// Pilot estimate θ̂₀ at this level.
    pub pilot: F,
    /// Candidate estimate θ̂(u).
    pub theta: F,
    /// Discrepancy statistic (small-sample corrected when L < 40).
    pub stat: F,
    pub corrected: bool,
    /// The candidate estimator hit its cap at 1.
    pub clipped: bool,
}

/// Why a (level, K) pair produced no candidate.
#[derive(Debug, Clone, PartialEq)]
pub enum SkipReason {
    /// Fewer than two exceedances above the level's threshold.
    TooFewExceedances { n_u: usize },
    /// No feasible statistic depth (L < 2).
    TooFewGaps { l: usize },
    /// The level's order statistic ties the previous level's; merged.
    DuplicateThreshold,
    Pilot(Error),
    Estimator(Error),
    Statistic(Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Skipped {
    pub q: f64,
    /// K under scan when the skip is specific to one K.
    pub kgap: Option<u64>,
    pub reason: SkipReason,
}

/// Output of the grid scan: evaluated candidates in (level, K) order plus a
/// record of everything that could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct Scan<F: Float> {
    pub candidates: Vec<Candidate<F>>,
    pub skipped: Vec<Skipped>,
}

/// Evaluate every quantile level (and K, for a K-scan) of the grid.
///
/// Infeasible levels are recorded as skips, never raised. Panics if `cfg`
/// fails [`SelectionConfig::validate`]; [`run_algorithm`] reports the same
/// condition as an error instead.
pub fn scan_thresholds<F: Float>(series: &TimeSeries<F>, cfg: &SelectionConfig) -> Scan<F> {
    cfg.validate().expect("selection config must be valid");
    let sorted = series.sorted();
    let mut scan = Scan { candidates: Vec::new(), skipped: Vec::new() };
    let mut prev_u: Option<F> = None;
    for &q in &cfg.levels {
        let u = order_statistic(&sorted, q).expect("levels validated");
        let skip = |reason: SkipReason| Skipped { q, kgap: None, reason };
        if prev_u == Some(u) {
            scan.skipped.push(skip(SkipReason::DuplicateThreshold));
            continue;
        }
        prev_u = Some(u);
        let g = match GapSample::from_series(series, u) {
            Ok(g) => g,
            Err(Error::TooFewExceedances { n_u }) => {
                scan.skipped.push(skip(SkipReason::TooFewExceedances { n_u }));
                continue;
            }
            Err(e) => {
                scan.skipped.push(skip(SkipReason::Estimator(e)));
                continue;
            }
        };
        let l = g.l();
        if l < 2 {
            scan.skipped.push(skip(SkipReason::TooFewGaps { l }));
            continue;
        }
        let pilot_result = match cfg.pilot {
            PilotSpec::Intervals => intervals_estimator(&g),
            PilotSpec::KGaps { k } => kgaps_estimator(&KGapSample::from_gaps(&g, k)),
        };
        let pilot = match pilot_result {
            Ok(e) => e.value,
            Err(e) => {
                scan.skipped.push(skip(SkipReason::Pilot(e)));
                continue;
            }
        };
        let k = select_k(cfg.k_rule, l, pilot.to_f64().expect("estimates are finite"));

        let kgap_values: Vec<Option<u64>> = match cfg.estimator {
            EstimatorChoice::Intervals | EstimatorChoice::K0 { .. } => vec![None],
            EstimatorChoice::KGaps { k } => vec![Some(k)],
            EstimatorChoice::KGapsScan { lo, hi } => (lo..=hi).map(Some).collect(),
        };
        for kgap in kgap_values {
            let skip = |reason: SkipReason| Skipped { q, kgap, reason };
            let (estimate, stat_input): (Result<ThetaEstimate<F>>, Vec<F>) = match kgap {
                None => {
                    let est = match cfg.estimator {
                        EstimatorChoice::Intervals => intervals_estimator(&g),
                        EstimatorChoice::K0 { k: pinned } => k0_estimator(&g, pinned.unwrap_or(k)),
                        _ => unreachable!("kgap is Some for K-gap estimators"),
                    };
                    (est, g.sorted_y())
                }
                Some(kv) => {
                    let kg = KGapSample::from_gaps(&g, kv);
                    let input = kg.sorted_normalized();
                    (kgaps_estimator(&kg), input)
                }
            };
            let estimate = match estimate {
                Ok(e) => e,
                Err(e) => {
                    scan.skipped.push(skip(SkipReason::Estimator(e)));
                    continue;
                }
            };
            let model_theta = match cfg.stat_theta {
                StatTheta::Pilot => pilot,
                StatTheta::Candidate => estimate.value,
            };
            let stat = match discrepancy_statistic(&stat_input, k, model_theta) {
                Ok(s) => small_sample_correct(s),
                Err(e) => {
                    scan.skipped.push(skip(SkipReason::Statistic(e)));
                    continue;
                }
            };
            scan.candidates.push(Candidate {
                q,
                u,
                n_u: g.n_u(),
                l,
                k,
                kgap,
                pilot,
                theta: estimate.value,
                stat: stat.value,
                corrected: stat.corrected,
                clipped: estimate.clipped,
            });
        }
    }
    scan
}

/// Solution set plus the three aggregate estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult<F: Float> {
    /// Accepted candidates, ordered by threshold, then K.
    pub solutions: Vec<Candidate<F>>,
    /// Mean candidate estimate over all solutions.
    pub theta1: Option<F>,
    /// Candidate estimate at the smallest solution threshold.
    pub theta2: Option<F>,
    /// Candidate estimate at the largest solution threshold.
    pub theta3: Option<F>,
}

impl<F: Float> SelectionResult<F> {
    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }
}

fn aggregate<F: Float>(solutions: Vec<Candidate<F>>) -> SelectionResult<F> {
    if solutions.is_empty() {
        return SelectionResult { solutions, theta1: None, theta2: None, theta3: None };
    }
    let sum = solutions.iter().map(|c| c.theta).fold(F::zero(), |a, b| a + b);
    let theta1 = sum / fu::<F>(solutions.len());
    // candidates are ordered by (level, K), so the first entry realizes the
    // smallest threshold with the smallest K; ties at the largest threshold
    // are broken toward the smallest K by scanning from the front
    let theta2 = solutions[0].theta;
    let max_u = solutions[solutions.len() - 1].u;
    let theta3 = solutions.iter().find(|c| c.u == max_u).expect("nonempty").theta;
    SelectionResult { solutions, theta1: Some(theta1), theta2: Some(theta2), theta3: Some(theta3) }
}

/// Pick solutions out of a scan.
///
/// Equation mode treats each K track independently: a candidate is a solution
/// when |stat − δ₁| ≤ tolerance, or when the sign of stat − δ₁ changes
/// between consecutive candidates of the track (the endpoint with the smaller
/// deviation wins; exact ties go to the lower level). Inequality mode accepts
/// every candidate with stat ≤ δ₂. Duplicates are merged; an empty solution
/// set yields empty aggregates rather than an error.
pub fn solve_discrepancy<F: Float>(scan: &Scan<F>, cfg: &SelectionConfig) -> SelectionResult<F> {
    let mut chosen: BTreeSet<usize> = BTreeSet::new();
    match cfg.mode {
        Mode::Inequality => {
            let d2 = fc::<F>(cfg.delta2);
            for (i, c) in scan.candidates.iter().enumerate() {
                if c.stat <= d2 {
                    chosen.insert(i);
                }
            }
        }
        Mode::Equation => {
            let d1 = fc::<F>(cfg.delta1);
            let tol = fc::<F>(cfg.tolerance);
            let mut tracks: BTreeMap<Option<u64>, Vec<usize>> = BTreeMap::new();
            for (i, c) in scan.candidates.iter().enumerate() {
                tracks.entry(c.kgap).or_default().push(i);
            }
            for indices in tracks.values() {
                for &i in indices {
                    if (scan.candidates[i].stat - d1).abs() <= tol {
                        chosen.insert(i);
                    }
                }
                for w in indices.windows(2) {
                    let (i, j) = (w[0], w[1]);
                    let si = scan.candidates[i].stat - d1;
                    let sj = scan.candidates[j].stat - d1;
                    if si * sj < F::zero() {
                        chosen.insert(if sj.abs() < si.abs() { j } else { i });
                    }
                }
            }
        }
    }
    aggregate(chosen.iter().map(|&i| scan.candidates[i]).collect())
}

/// Scan the grid and solve; errors with `NoSolutions` when nothing qualifies.
pub fn run_algorithm<F: Float>(
    series: &TimeSeries<F>,
    cfg: &SelectionConfig,
) -> Result<SelectionResult<F>> {
    cfg.validate()?;
    let scan = scan_thresholds(series, cfg);
    let result = solve_discrepancy(&scan, cfg);
    if result.is_empty() {
        return Err(Error::NoSolutions);
    }
    Ok(result)
}

/// A stable stretch found in a smoothed estimate curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plateau<F: Float> {
    /// Mean of the smoothed values along the winning run.
    pub value: F,
    /// Index into the raw curve of the run's central point.
    pub center: usize,
    /// Run length in smoothed points.
    pub len: usize,
}

/// Find the longest stable run of the curve after centered moving-average
/// smoothing.
///
/// The bandwidth is d = ⌊w·G⌋ (G = curve length), clamped so the window
/// 2d+1 fits; successive smoothed values belong to one run when they differ
/// by at most 2·σ/√G, with σ the population deviation of the raw curve. The
/// first longest run wins; it must span at least max(2, ⌊√M⌋) of the M
/// smoothed points, otherwise `NoPlateau`.
pub fn plateau_from_curve<F: Float>(curve: &[F], w: f64) -> Result<Plateau<F>> {
    let g = curve.len();
    if g < 3 {
        return Err(Error::NoPlateau);
    }
    let d = ((w * g as f64 + 1e-9).floor() as usize).min((g - 1) / 2);
    let m = g - 2 * d;
    let window = fu::<F>(2 * d + 1);
    let smoothed: Vec<F> = (0..m)
        .map(|j| {
            let mut s = F::zero();
            for &v in &curve[j..j + 2 * d + 1] {
                s = s + v;
            }
            s / window
        })
        .collect();

    let gf = fu::<F>(g);
    let mean = curve.iter().fold(F::zero(), |a, &b| a + b) / gf;
    let var = curve.iter().fold(F::zero(), |a, &b| a + (b - mean) * (b - mean)) / gf;
    let band = fc::<F>(2.0) * var.sqrt() / gf.sqrt();

    let mut best_start = 0usize;
    let mut best_len = 1usize;
    let mut start = 0usize;
    for j in 1..m {
        if !((smoothed[j] - smoothed[j - 1]).abs() <= band) {
            start = j;
        }
        let len = j - start + 1;
        if len > best_len {
            best_len = len;
            best_start = start;
        }
    }
    let required = 2.max(((m as f64).sqrt() + 1e-9).floor() as usize);
    if best_len < required {
        return Err(Error::NoPlateau);
    }
    let run = &smoothed[best_start..best_start + best_len];
    let value = run.iter().fold(F::zero(), |a, &b| a + b) / fu::<F>(best_len);
    Ok(Plateau { value, center: best_start + (best_len - 1) / 2 + d, len: best_len })
}

/// Plateau baseline over the estimate-vs-threshold curve.
///
/// Evaluates the intervals estimator at each level's threshold (duplicate
/// thresholds and infeasible levels are dropped), then finds the plateau of
/// that curve. The returned estimate carries the threshold and gap count of
/// the plateau's central grid point. Panics on levels outside (0,1).
pub fn plateau_a1<F: Float>(
    series: &TimeSeries<F>,
    levels: &[f64],
    w: f64,
) -> Result<ThetaEstimate<F>> {
    let sorted = series.sorted();
    let mut curve: Vec<F> = Vec::new();
    let mut meta: Vec<(F, usize)> = Vec::new();
    let mut prev_u: Option<F> = None;
    for &q in levels {
        let u = order_statistic(&sorted, q).expect("levels must lie in (0,1)");
        if prev_u == Some(u) {
            continue;
        }
        prev_u = Some(u);
        let Ok(g) = GapSample::from_series(series, u) else { continue };
        let Ok(e) = intervals_estimator(&g) else { continue };
        curve.push(e.value);
        meta.push((u, g.l()));
    }
    let p = plateau_from_curve(&curve, w)?;
    let (threshold, l) = meta[p.center];
    Ok(ThetaEstimate {
        value: p.value,
        estimator: EstimatorSpec::Intervals,
        threshold,
        l,
        clipped: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::{simulate, Marginal, ProcessSpec};

    #[test]
    fn depth_rules_match_hand_arithmetic() {
        assert_eq!(select_k(KRule::PilotL, 100, 0.5), 50);
        assert_eq!(select_k(KRule::PilotL, 100, 1.0), 99);
        assert_eq!(select_k(KRule::LogSquared, 100, 0.3), 21);
        assert_eq!(select_k(KRule::MinPilotSqrt, 100, 0.5), 10);
        assert_eq!(select_k(KRule::MinPilotSqrt, 100, 0.05), 5);
        assert_eq!(select_k(KRule::FixedTheta(0.75), 100, 0.2), 75);
        assert_eq!(select_k(KRule::FixedTheta(1.5), 100, 0.2), 99);
        // exact products must not be floored down by round-off: 0.7·10 < 7 in fp
        assert_eq!(select_k(KRule::PilotL, 10, 0.7), 7);
    }

    #[test]
    fn depth_is_clamped_to_the_feasible_range() {
        assert_eq!(select_k(KRule::PilotL, 10, 0.001), 1);
        assert_eq!(select_k(KRule::LogSquared, 2, 0.5), 1);
        assert_eq!(select_k(KRule::LogSquared, 1000, 0.5), 47);
        assert_eq!(select_k(KRule::PilotL, 10, 0.999), 9);
    }

    #[test]
    fn default_grid_shape() {
        let levels = default_levels();
        assert_eq!(levels.len(), 20);
        assert!((levels[0] - 0.90).abs() < 1e-12);
        assert!((levels[19] - 0.995).abs() < 1e-12);
        assert!(levels.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn config_validation_rejects_bad_fields() {
        assert!(SelectionConfig::default().validate().is_ok());
        let mut c = SelectionConfig::default();
        c.levels = vec![0.9, 0.9];
        assert!(c.validate().is_err());
        let mut c = SelectionConfig::default();
        c.levels = vec![1.5];
        assert!(c.validate().is_err());
        let mut c = SelectionConfig::default();
        c.delta1 = 0.0;
        assert!(c.validate().is_err());
        let mut c = SelectionConfig::default();
        c.tolerance = -0.1;
        assert!(c.validate().is_err());
        let mut c = SelectionConfig::default();
        c.estimator = EstimatorChoice::KGapsScan { lo: 5, hi: 2 };
        assert!(c.validate().is_err());
        let mut c = SelectionConfig::default();
        c.estimator = EstimatorChoice::K0 { k: Some(0) };
        assert!(c.validate().is_err());
        let mut c = SelectionConfig::default();
        c.k_rule = KRule::FixedTheta(0.0);
        assert!(c.validate().is_err());
        let mut c = SelectionConfig::default();
        c.w = 1.0;
        assert!(c.validate().is_err());
    }

    fn ramp_series() -> TimeSeries<f64> {
        TimeSeries::new((1..=50).map(f64::from).collect()).unwrap()
    }

    #[test]
    fn scan_records_candidates_and_reasons() {
        // u at q=0.90 is 45 → five exceedances at the tail positions
        let cfg = SelectionConfig {
            levels: vec![0.90, 0.92, 0.96, 0.98, 0.995],
            mode: Mode::Inequality,
            ..SelectionConfig::default()
        };
        let scan = scan_thresholds(&ramp_series(), &cfg);
        let qs: Vec<f64> = scan.candidates.iter().map(|c| c.q).collect();
        assert_eq!(qs, vec![0.90, 0.92]);
        for c in &scan.candidates {
            assert!(c.stat.is_finite());
            assert!(c.k >= 1 && c.k <= c.l - 1);
            assert!(c.theta > 0.0 && c.theta <= 1.0);
            assert!(c.corrected, "L < 40 here, so the correction must apply");
        }
        assert_eq!(scan.skipped.len(), 3);
        assert_eq!(scan.skipped[0].reason, SkipReason::TooFewGaps { l: 1 }); // q=0.96, N_u=2
        assert_eq!(
            scan.skipped[1].reason,
            SkipReason::TooFewExceedances { n_u: 1 } // q=0.98, u=49
        );
        assert_eq!(
            scan.skipped[2].reason,
            SkipReason::TooFewExceedances { n_u: 0 } // q=0.995, u=50
        );
    }

    #[test]
    fn tied_order_statistics_are_merged() {
        let mut values: Vec<f64> = (1..=20).map(f64::from).collect();
        for v in values.iter_mut().skip(14) {
            *v = 15.0;
        }
        let series = TimeSeries::new(values).unwrap();
        let cfg = SelectionConfig {
            levels: vec![0.75, 0.80, 0.90],
            ..SelectionConfig::default()
        };
        let scan = scan_thresholds(&series, &cfg);
        assert!(scan
            .skipped
            .iter()
            .any(|s| s.reason == SkipReason::DuplicateThreshold));
        let mut thresholds: Vec<f64> = scan.candidates.iter().map(|c| c.u).collect();
        thresholds.dedup();
        assert_eq!(thresholds.len(), scan.candidates.len());
    }

    fn candidate(q: f64, u: f64, theta: f64, stat: f64, kgap: Option<u64>) -> Candidate<f64> {
        Candidate {
            q,
            u,
            n_u: 50,
            l: 49,
            k: 10,
            kgap,
            pilot: theta,
            theta,
            stat,
            corrected: false,
            clipped: false,
        }
    }

    fn scan_of(candidates: Vec<Candidate<f64>>) -> Scan<f64> {
        Scan { candidates, skipped: Vec::new() }
    }

    #[test]
    fn inequality_mode_accepts_pointwise() {
        let scan = scan_of(vec![
            candidate(0.90, 1.0, 0.3, 0.2, None),
            candidate(0.92, 2.0, 0.5, 3.0, None),
            candidate(0.94, 3.0, 0.7, 1.0, None),
        ]);
        let cfg = SelectionConfig { mode: Mode::Inequality, ..SelectionConfig::default() };
        let r = solve_discrepancy(&scan, &cfg);
        assert_eq!(r.len(), 2);
        assert_eq!(r.theta1, Some(0.5));
        assert_eq!(r.theta2, Some(0.3)); // smallest threshold
        assert_eq!(r.theta3, Some(0.7)); // largest threshold
    }

    #[test]
    fn inequality_mode_can_come_up_empty() {
        let scan = scan_of(vec![
            candidate(0.90, 1.0, 0.3, 2.0, None),
            candidate(0.92, 2.0, 0.5, 3.0, None),
        ]);
        let cfg = SelectionConfig { mode: Mode::Inequality, ..SelectionConfig::default() };
        let r = solve_discrepancy(&scan, &cfg);
        assert!(r.is_empty());
        assert_eq!(r.theta1, None);
    }

    #[test]
    fn equation_mode_takes_the_closer_crossing_endpoint() {
        // sign pattern +,−,+,+ around δ₁=0.05: two crossings
        let scan = scan_of(vec![
            candidate(0.90, 1.0, 0.2, 0.2, None),
            candidate(0.92, 2.0, 0.4, 0.04, None),
            candidate(0.94, 3.0, 0.6, 0.06, None),
            candidate(0.96, 4.0, 0.8, 0.3, None),
        ]);
        let cfg = SelectionConfig { mode: Mode::Equation, ..SelectionConfig::default() };
        let r = solve_discrepancy(&scan, &cfg);
        let qs: Vec<f64> = r.solutions.iter().map(|c| c.q).collect();
        assert_eq!(qs, vec![0.92, 0.94]);

        // both crossings prefer the same middle level: deduplicated
        let scan = scan_of(vec![
            candidate(0.90, 1.0, 0.2, 0.2, None),
            candidate(0.92, 2.0, 0.4, 0.04, None),
            candidate(0.94, 3.0, 0.6, 0.08, None),
            candidate(0.96, 4.0, 0.8, 0.3, None),
        ]);
        let r = solve_discrepancy(&scan, &cfg);
        let qs: Vec<f64> = r.solutions.iter().map(|c| c.q).collect();
        assert_eq!(qs, vec![0.92]);
    }

    #[test]
    fn equation_mode_tolerance_hits_do_not_double_count() {
        let scan = scan_of(vec![
            candidate(0.90, 1.0, 0.2, 0.049, None),
            candidate(0.92, 2.0, 0.4, 0.2, None),
        ]);
        let cfg = SelectionConfig {
            mode: Mode::Equation,
            tolerance: 0.002,
            ..SelectionConfig::default()
        };
        let r = solve_discrepancy(&scan, &cfg);
        assert_eq!(r.len(), 1);
        assert_eq!(r.solutions[0].q, 0.90);
    }

    #[test]
    fn equation_mode_tracks_each_k_separately() {
        let scan = scan_of(vec![
            candidate(0.90, 1.0, 0.2, 0.04, Some(0)),
            candidate(0.90, 1.0, 0.3, 0.2, Some(1)),
            candidate(0.92, 2.0, 0.4, 0.06, Some(0)),
            candidate(0.92, 2.0, 0.5, 0.3, Some(1)),
        ]);
        let cfg = SelectionConfig { mode: Mode::Equation, ..SelectionConfig::default() };
        let r = solve_discrepancy(&scan, &cfg);
        // only the K=0 track crosses; 0.06 deviates less than 0.04 in fp
        assert_eq!(r.len(), 1);
        assert_eq!(r.solutions[0].kgap, Some(0));
        assert_eq!(r.solutions[0].q, 0.92);
    }

    #[test]
    fn aggregates_break_threshold_ties_toward_small_k() {
        let scan = scan_of(vec![
            candidate(0.90, 1.0, 0.25, 0.2, Some(0)),
            candidate(0.90, 1.0, 0.5, 0.2, Some(1)),
            candidate(0.92, 2.0, 0.75, 0.2, Some(0)),
            candidate(0.92, 2.0, 0.5, 0.2, Some(1)),
        ]);
        let cfg = SelectionConfig { mode: Mode::Inequality, ..SelectionConfig::default() };
        let r = solve_discrepancy(&scan, &cfg);
        assert_eq!(r.len(), 4);
        assert_eq!(r.theta1, Some(0.5));
        assert_eq!(r.theta2, Some(0.25)); // min u, K=0
        assert_eq!(r.theta3, Some(0.75)); // max u, K=0
    }

    #[test]
    fn algorithm_is_deterministic_and_bounded_on_simulated_data() {
        let spec = ProcessSpec::Armax { alpha: 0.25 };
        let series = simulate::<f64>(&spec, 5000, 4242).unwrap();
        let cfg = SelectionConfig { mode: Mode::Inequality, ..SelectionConfig::default() };
        let a = run_algorithm(&series, &cfg).unwrap();
        let b = run_algorithm(&series, &cfg).unwrap();
        assert_eq!(a, b);
        let t1 = a.theta1.unwrap();
        assert!(t1 > 0.0 && t1 <= 1.0);
        assert!(!a.solutions.is_empty());
    }

    #[test]
    fn no_solutions_surfaces_as_an_error() {
        let series = simulate::<f64>(
            &ProcessSpec::Iid { marginal: Marginal::Uniform },
            2000,
            7,
        )
        .unwrap();
        // a level leaving a single exceedance: every candidate is skipped
        let cfg = SelectionConfig {
            levels: vec![0.9995],
            mode: Mode::Inequality,
            ..SelectionConfig::default()
        };
        assert_eq!(run_algorithm(&series, &cfg).unwrap_err(), Error::NoSolutions);
    }

    #[test]
    fn plateau_of_a_constant_curve_is_the_constant() {
        let curve = vec![0.5; 20];
        let p = plateau_from_curve(&curve, 0.25).unwrap();
        assert_eq!(p.value, 0.5);
        assert_eq!(p.len, 10); // G−2d = 20−10 smoothed points, all in one run
    }

    #[test]
    fn plateau_rejects_a_steep_short_ramp() {
        // band 2σ/√3 ≈ 0.943·c is smaller than the step c
        assert_eq!(
            plateau_from_curve(&[0.0, 1.0, 2.0], 0.25).unwrap_err(),
            Error::NoPlateau
        );
        assert_eq!(plateau_from_curve(&[0.5f64; 2], 0.25).unwrap_err(), Error::NoPlateau);
    }

    #[test]
    fn plateau_picks_the_first_longest_run() {
        // w small enough that no smoothing happens (d=0)
        let curve = [0.0, 0.0, 0.0, 10.0, 10.1];
        let p = plateau_from_curve(&curve, 0.05).unwrap();
        assert_eq!(p.value, 0.0);
        assert_eq!(p.len, 3);
        assert_eq!(p.center, 1);

        // two equally long runs: the first one wins
        let curve = [0.0, 0.0, 5.0, 5.0];
        let p = plateau_from_curve(&curve, 0.05).unwrap();
        assert_eq!(p.value, 0.0);
    }

    #[test]
    fn plateau_baseline_runs_on_simulated_data() {
        let spec = ProcessSpec::Armax { alpha: 0.5 };
        let series = simulate::<f64>(&spec, 20_000, 99).unwrap();
        let est = plateau_a1(&series, &default_levels(), 0.25).unwrap();
        assert!(est.value > 0.0 && est.value <= 1.0);
        assert_eq!(est.estimator, EstimatorSpec::Intervals);
        assert!(est.l > 0);
    }
}
