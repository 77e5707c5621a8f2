//! Seeded generators for the benchmark processes, each with a closed-form
//! extremal index.
//!
//! All recursions run in `f64` and are converted to the target scalar type
//! once per value; a non-finite draw (possible only after conversion to a
//! narrower type) surfaces as a validation error. Sampling is by inversion
//! of [`CounterRng`](crate::rng::CounterRng) uniforms, so a realization is a
//! pure function of `(spec, n, seed)` — bit-identical across runs, platforms
//! with the same libm, and thread counts.

use crate::error::{Error, Result};
use crate::float::{fc, Float};
use crate::rng::CounterRng;
use crate::series::TimeSeries;

/// Warm-up length for the recursions without a closed-form stationary start.
pub const DEFAULT_BURN_IN: usize = 1000;

/// Marginal distribution of an independent sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Marginal {
    /// CDF exp(−1/x), x > 0.
    Frechet,
    Uniform,
    Exponential,
    Gaussian,
    Cauchy,
    /// P(Z > x) = x^(−alpha), x ≥ 1.
    Pareto { alpha: f64 },
}

impl core::fmt::Display for Marginal {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::Frechet => write!(f, "frechet"),
            Self::Uniform => write!(f, "uniform"),
            Self::Exponential => write!(f, "exponential"),
            Self::Gaussian => write!(f, "gaussian"),
            Self::Cauchy => write!(f, "cauchy"),
            Self::Pareto { alpha } => write!(f, "pareto:{alpha}"),
        }
    }
}

/// A stationary process with a known extremal index.
#[derive(Debug, Clone, PartialEq)]
pub enum ProcessSpec {
    /// Moving maximum X_t = max_i w_i·Z_{t−i} of standard Fréchet noise;
    /// weights sum to 1, θ = max w_i.
    MovingMax { weights: Vec<f64> },
    /// Max-autoregression X_t = max(α·X_{t−1}, (1−α)·Z_t), Fréchet noise,
    /// θ = 1 − α; the stationary marginal is standard Fréchet.
    Armax { alpha: f64 },
    /// X_j = X_{j−1}/r + ε_j with ε uniform on {0, 1/r, …, (r−1)/r};
    /// stationary marginal U(0,1), θ = 1 − 1/r.
    ArUniformPlus { r: u32 },
    /// X_j = −X_{j−1}/r + ε_j with ε uniform on {1/r, …, 1};
    /// θ = 1 − 1/r².
    ArUniformMinus { r: u32 },
    /// Two-term moving average X_i = p·Z_{i−2} + q·Z_{i−1} + Z_i of
    /// Pareto(tail) noise; θ = (1 + p^tail + q^tail)⁻¹.
    Ma2 { p: f64, q: f64, tail: f64 },
    /// X_j = 0.7·X_{j−1} + Cauchy noise; θ = 0.3.
    ArCauchy { burn_in: usize },
    /// X_j = 0.95·X_{j−1} − 0.89·X_{j−2} + Pareto(2) noise; θ = 0.25.
    ArPareto2 { burn_in: usize },
    /// GARCH(1,1): σ²_j = a + λ·X²_{j−1} + β·σ²_{j−1}, X_j = σ_j·Z_j with
    /// Gaussian Z and (a, λ, β) = (1e−6, 0.25, 0.7); θ = 0.447.
    Garch11 { burn_in: usize },
    /// Independent draws; θ = 1 for any marginal.
    Iid { marginal: Marginal },
}

impl ProcessSpec {
    pub fn ar_cauchy() -> Self {
        Self::ArCauchy { burn_in: DEFAULT_BURN_IN }
    }

    pub fn ar_pareto2() -> Self {
        Self::ArPareto2 { burn_in: DEFAULT_BURN_IN }
    }

    pub fn garch11() -> Self {
        Self::Garch11 { burn_in: DEFAULT_BURN_IN }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParams(msg));
        match self {
            Self::MovingMax { weights } => {
                if weights.is_empty() {
                    return fail("moving-max needs at least one weight".into());
                }
                if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
                    return fail("moving-max weights must be finite and non-negative".into());
                }
                let sum: f64 = weights.iter().sum();
                if (sum - 1.0).abs() > 1e-12 {
                    return fail(format!("moving-max weights must sum to 1, got {sum}"));
                }
                Ok(())
            }
            Self::Armax { alpha } => {
                if !(0.0..1.0).contains(alpha) {
                    return fail(format!("armax alpha must lie in [0,1), got {alpha}"));
                }
                Ok(())
            }
            Self::ArUniformPlus { r } | Self::ArUniformMinus { r } => {
                if *r < 2 {
                    return fail(format!("uniform AR needs r ≥ 2, got {r}"));
                }
                Ok(())
            }
            Self::Ma2 { p, q, tail } => {
                if !(*p > 0.0) || !p.is_finite() {
                    return fail(format!("ma2 needs p > 0, got {p}"));
                }
                if !(0.0..1.0).contains(q) {
                    return fail(format!("ma2 needs 0 ≤ q < 1, got {q}"));
                }
                if !(*tail > 0.0) || !tail.is_finite() {
                    return fail(format!("ma2 needs a positive tail index, got {tail}"));
                }
                Ok(())
            }
            Self::Iid { marginal: Marginal::Pareto { alpha } } => {
                if !(*alpha > 0.0) || !alpha.is_finite() {
                    return fail(format!("pareto needs a positive tail index, got {alpha}"));
                }
                Ok(())
            }
            Self::ArCauchy { .. } | Self::ArPareto2 { .. } | Self::Garch11 { .. } | Self::Iid { .. } => {
                Ok(())
            }
        }
    }

    /// The closed-form extremal index of the process.
    pub fn true_theta(&self) -> f64 {
        match self {
            Self::MovingMax { weights } => weights.iter().copied().fold(0.0, f64::max),
            Self::Armax { alpha } => 1.0 - alpha,
            Self::ArUniformPlus { r } => 1.0 - 1.0 / *r as f64,
            Self::ArUniformMinus { r } => 1.0 - 1.0 / (*r as f64 * *r as f64),
            Self::Ma2 { p, q, tail } => 1.0 / (1.0 + p.powf(*tail) + q.powf(*tail)),
            Self::ArCauchy { .. } => 0.3,
            Self::ArPareto2 { .. } => 0.25,
            Self::Garch11 { .. } => 0.447,
            Self::Iid { .. } => 1.0,
        }
    }

    /// Compact stable identifier used in report headers and logs.
    pub fn label(&self) -> String {
        fn join(ws: &[f64]) -> String {
            ws.iter().map(|w| format!("{w}")).collect::<Vec<_>>().join(";")
        }
        match self {
            Self::MovingMax { weights } => format!("mm({})", join(weights)),
            Self::Armax { alpha } => format!("armax({alpha})"),
            Self::ArUniformPlus { r } => format!("aru+({r})"),
            Self::ArUniformMinus { r } => format!("aru-({r})"),
            Self::Ma2 { p, q, tail } => format!("ma2({p};{q};{tail})"),
            Self::ArCauchy { .. } => "arcauchy".into(),
            Self::ArPareto2 { .. } => "ar2pareto".into(),
            Self::Garch11 { .. } => "garch11".into(),
            Self::Iid { marginal } => format!("iid({marginal})"),
        }
    }
}

fn draw_marginal(rng: &mut CounterRng, marginal: Marginal) -> f64 {
    match marginal {
        Marginal::Frechet => rng.frechet(),
        Marginal::Uniform => rng.uniform(),
        Marginal::Exponential => rng.exponential(),
        Marginal::Gaussian => rng.gaussian(),
        Marginal::Cauchy => rng.cauchy(),
        Marginal::Pareto { alpha } => rng.pareto(alpha),
    }
}

/// Generate a length-n realization of the process, deterministically in
/// `(spec, n, seed)`.
pub fn simulate<F: Float>(spec: &ProcessSpec, n: usize, seed: u64) -> Result<TimeSeries<F>> {
    spec.validate()?;
    if n < 2 {
        return Err(Error::SeriesTooShort(n));
    }
    let mut rng = CounterRng::new(seed);
    let mut out: Vec<f64> = Vec::with_capacity(n);
    match spec {
        ProcessSpec::MovingMax { weights } => {
            let m = weights.len() - 1;
            let z: Vec<f64> = (0..n + m).map(|_| rng.frechet()).collect();
            for t in 0..n {
                let mut x = f64::NEG_INFINITY;
                for (i, &w) in weights.iter().enumerate() {
                    x = x.max(w * z[t + m - i]);
                }
                out.push(x);
            }
        }
        ProcessSpec::Armax { alpha } => {
            let mut x = rng.frechet();
            for _ in 0..n {
                x = (alpha * x).max((1.0 - alpha) * rng.frechet());
                out.push(x);
            }
        }
        ProcessSpec::ArUniformPlus { r } => {
            let rf = *r as f64;
            let mut x = rng.uniform();
            for _ in 0..n {
                x = x / rf + rng.below(*r) as f64 / rf;
                out.push(x);
            }
        }
        ProcessSpec::ArUniformMinus { r } => {
            let rf = *r as f64;
            let mut x = rng.uniform();
            for _ in 0..n {
                x = -x / rf + (rng.below(*r) + 1) as f64 / rf;
                out.push(x);
            }
        }
        ProcessSpec::Ma2 { p, q, tail } => {
            let z: Vec<f64> = (0..n + 2).map(|_| rng.pareto(*tail)).collect();
            for i in 0..n {
                out.push(p * z[i] + q * z[i + 1] + z[i + 2]);
            }
        }
        ProcessSpec::ArCauchy { burn_in } => {
            let mut x = 0.0;
            for _ in 0..*burn_in {
                x = 0.7 * x + rng.cauchy();
            }
            for _ in 0..n {
                x = 0.7 * x + rng.cauchy();
                out.push(x);
            }
        }
        ProcessSpec::ArPareto2 { burn_in } => {
            let (mut x1, mut x2) = (0.0, 0.0);
            for step in 0..burn_in + n {
                let x = 0.95 * x1 - 0.89 * x2 + rng.pareto(2.0);
                x2 = x1;
                x1 = x;
                if step >= *burn_in {
                    out.push(x);
                }
            }
        }
        ProcessSpec::Garch11 { burn_in } => {
            const A: f64 = 1e-6;
            const LAMBDA: f64 = 0.25;
            const BETA: f64 = 0.7;
            let mut var = A / (1.0 - LAMBDA - BETA);
            let mut x = var.sqrt() * rng.gaussian();
            for _ in 0..*burn_in {
                var = A + LAMBDA * x * x + BETA * var;
                x = var.sqrt() * rng.gaussian();
            }
            for _ in 0..n {
                var = A + LAMBDA * x * x + BETA * var;
                x = var.sqrt() * rng.gaussian();
                out.push(x);
            }
        }
        ProcessSpec::Iid { marginal } => {
            for _ in 0..n {
                out.push(draw_marginal(&mut rng, *marginal));
            }
        }
    }
    TimeSeries::new(out.into_iter().map(|v| fc::<F>(v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sim(spec: &ProcessSpec, n: usize, seed: u64) -> TimeSeries<f64> {
        simulate(spec, n, seed).unwrap()
    }

    #[test]
    fn closed_form_theta_values() {
        let mm = ProcessSpec::MovingMax { weights: vec![0.5, 0.3, 0.15, 0.05] };
        assert_eq!(mm.true_theta(), 0.5);
        assert_eq!(ProcessSpec::Armax { alpha: 0.25 }.true_theta(), 0.75);
        assert_eq!(ProcessSpec::ArUniformPlus { r: 2 }.true_theta(), 0.5);
        assert_eq!(ProcessSpec::ArUniformMinus { r: 5 }.true_theta(), 0.96);
        let s = 1.0 / core::f64::consts::SQRT_2;
        let ma2 = ProcessSpec::Ma2 { p: s, q: s, tail: 2.0 };
        assert!((ma2.true_theta() - 0.5).abs() < 1e-12);
        assert_eq!(ProcessSpec::ar_cauchy().true_theta(), 0.3);
        assert_eq!(ProcessSpec::ar_pareto2().true_theta(), 0.25);
        assert_eq!(ProcessSpec::garch11().true_theta(), 0.447);
        assert_eq!(ProcessSpec::Iid { marginal: Marginal::Gaussian }.true_theta(), 1.0);
    }

    #[test]
    fn parameter_validation() {
        assert!(ProcessSpec::MovingMax { weights: vec![0.8, 0.1, 0.08] }
            .validate()
            .is_err());
        assert!(ProcessSpec::MovingMax { weights: vec![] }.validate().is_err());
        assert!(ProcessSpec::Armax { alpha: 1.0 }.validate().is_err());
        assert!(ProcessSpec::Armax { alpha: -0.1 }.validate().is_err());
        assert!(ProcessSpec::ArUniformPlus { r: 1 }.validate().is_err());
        assert!(ProcessSpec::Ma2 { p: 0.0, q: 0.5, tail: 2.0 }.validate().is_err());
        assert!(ProcessSpec::Ma2 { p: 0.5, q: 1.0, tail: 2.0 }.validate().is_err());
        assert!(ProcessSpec::Iid { marginal: Marginal::Pareto { alpha: 0.0 } }
            .validate()
            .is_err());
        assert!(simulate::<f64>(&ProcessSpec::Armax { alpha: 0.5 }, 1, 7).is_err());
    }

    #[test]
    fn realizations_are_deterministic_in_the_seed() {
        let spec = ProcessSpec::Armax { alpha: 0.75 };
        let a = sim(&spec, 500, 42);
        let b = sim(&spec, 500, 42);
        assert_eq!(a, b);
        let c = sim(&spec, 500, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn degenerate_moving_max_is_iid_frechet() {
        let mm = sim(&ProcessSpec::MovingMax { weights: vec![1.0] }, 300, 9);
        let iid = sim(&ProcessSpec::Iid { marginal: Marginal::Frechet }, 300, 9);
        assert_eq!(mm, iid);
    }

    #[test]
    fn uniform_autoregressions_stay_in_range_with_uniform_mean() {
        let s = sim(&ProcessSpec::ArUniformPlus { r: 2 }, 100_000, 11);
        assert!(s.values().iter().all(|&x| (0.0..=1.0).contains(&x)));
        let mean: f64 = s.values().iter().sum::<f64>() / s.len() as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean = {mean}");

        let s = sim(&ProcessSpec::ArUniformMinus { r: 5 }, 50_000, 12);
        let mean: f64 = s.values().iter().sum::<f64>() / s.len() as f64;
        // stationary mean of X = −X/r + E[ε] with E[ε]=(r+1)/(2r): (r+1)/(2(r+1)) = 1/2
        assert!((mean - 0.5).abs() < 0.01, "mean = {mean}");
    }

    #[test]
    fn garch_paths_stay_finite_at_scale() {
        let s = sim(&ProcessSpec::garch11(), 100_000, 13);
        assert!(s.values().iter().all(|x| x.is_finite()));
        // paper parameters keep the process tightly scaled around zero
        let max = s.values().iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        assert!(max < 1.0, "unexpectedly large excursion {max}");
    }

    #[test]
    fn moving_max_marginal_is_frechet_when_weights_sum_to_one() {
        // P(max_i w_i Z_i ≤ x) = exp(−Σw_i/x) = exp(−1/x)
        let spec = ProcessSpec::MovingMax { weights: vec![0.5, 0.3, 0.15, 0.05] };
        let s = sim(&spec, 40_000, 21);
        for x in [0.5, 1.0, 3.0] {
            let emp = s.values().iter().filter(|&&v| v <= x).count() as f64 / s.len() as f64;
            let want = (-1.0f64 / x).exp();
            assert!((emp - want).abs() < 0.015, "x={x}: {emp} vs {want}");
        }
    }

    #[test]
    fn ma2_values_sit_above_the_pareto_support_floor() {
        let spec = ProcessSpec::Ma2 { p: 0.5, q: 0.25, tail: 2.0 };
        let s = sim(&spec, 5_000, 31);
        // each value is p·z₁ + q·z₂ + z₃ with every z ≥ 1
        assert!(s.values().iter().all(|&x| x >= 0.5 + 0.25 + 1.0));
    }

    #[test]
    fn labels_are_stable() {
        assert_eq!(
            ProcessSpec::MovingMax { weights: vec![0.5, 0.5] }.label(),
            "mm(0.5;0.5)"
        );
        assert_eq!(ProcessSpec::Armax { alpha: 0.75 }.label(), "armax(0.75)");
        assert_eq!(ProcessSpec::ArUniformPlus { r: 2 }.label(), "aru+(2)");
        assert_eq!(ProcessSpec::garch11().label(), "garch11");
        assert_eq!(
            ProcessSpec::Iid { marginal: Marginal::Pareto { alpha: 2.0 } }.label(),
            "iid(pareto:2)"
        );
    }

    #[test]
    fn single_precision_conversion_round_trips() {
        let spec = ProcessSpec::Armax { alpha: 0.5 };
        let s64 = sim(&spec, 100, 5);
        let s32 = simulate::<f32>(&spec, 100, 5).unwrap();
        for (a, b) in s64.values().iter().zip(s32.values()) {
            assert!((*a - *b as f64).abs() <= a.abs() * 1e-6);
        }
    }
}
