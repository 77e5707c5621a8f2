//! Kolmogorov–Smirnov helpers for the benchmark and verification commands.

use exindex::simulate::Marginal;

/// One-sample KS distance sup|F_n − F| for unsorted data.
pub fn ks_statistic(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(((i + 1) as f64 / n - f).abs());
        d = d.max((f - i as f64 / n).abs());
    }
    d
}

/// Asymptotic Kolmogorov tail Q(λ) = 2Σ_{j≥1}(−1)^{j−1}exp(−2j²λ²).
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0f64;
    let mut sign = 1.0f64;
    for j in 1..200 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Asymptotic p-value of a one-sample KS distance.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    kolmogorov_q(d * (n as f64).sqrt())
}

/// CDF of a marginal distribution, for goodness-of-fit nulls.
pub fn marginal_cdf(m: Marginal, x: f64) -> f64 {
    match m {
        Marginal::Frechet => {
            if x <= 0.0 {
                0.0
            } else {
                (-1.0 / x).exp()
            }
        }
        Marginal::Uniform => x.clamp(0.0, 1.0),
        Marginal::Exponential => {
            if x <= 0.0 {
                0.0
            } else {
                1.0 - (-x).exp()
            }
        }
        Marginal::Gaussian => 0.5 * erfc_approx(-x / std::f64::consts::SQRT_2),
        Marginal::Cauchy => 0.5 + x.atan() / std::f64::consts::PI,
        Marginal::Pareto { alpha } => {
            if x <= 1.0 {
                0.0
            } else {
                1.0 - x.powf(-alpha)
            }
        }
    }
}

/// ~1e−7 accurate complementary error function (Abramowitz–Stegun 7.1.26
/// applied to |z| with symmetry), good enough for goodness-of-fit nulls.
fn erfc_approx(z: f64) -> f64 {
    let x = z.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    let tail = poly * (-x * x).exp();
    if z >= 0.0 {
        tail
    } else {
        2.0 - tail
    }
}
