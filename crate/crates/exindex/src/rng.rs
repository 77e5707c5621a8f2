//! Counter-based pseudo-random generator and the inverse-CDF samplers used
//! by the process simulators.
//!
//! The generator is the splitmix64 stream in counter form: output `i` of seed
//! `s` is
//!
//! ```text
//! out(s, i) = finalize(s + (i+1)·0x9E3779B97F4A7C15)        (mod 2^64)
//! finalize(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//!              z ^= z >> 27; z *= 0x94D049BB133111EB;
//!              z ^= z >> 31
//! ```
//!
//! The formula is fixed so that seeds are portable across implementations;
//! any language can reproduce a stream from `(seed, counter)` alone, and
//! random access by counter makes parallel replication cheap. Uniform draws
//! are `((out >> 12) + 0.5)·2⁻⁵²`, which lies strictly inside (0,1) — the
//! inversion samplers below require the open interval.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent stream seed from a master seed.
///
/// `derive(s, i) = finalize(s + GOLDEN·finalize(i + GOLDEN))` (wrapping).
/// Used for per-replication seeds: replication `i` of master seed `s` draws
/// from `CounterRng::new(derive(s, i))`.
#[inline]
pub fn derive(seed: u64, stream: u64) -> u64 {
    finalize(seed.wrapping_add(GOLDEN.wrapping_mul(finalize(stream.wrapping_add(GOLDEN)))))
}

/// Deterministic counter-based generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterRng {
    seed: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    /// Raw output at an arbitrary counter position (random access).
    #[inline]
    pub fn at(seed: u64, counter: u64) -> u64 {
        finalize(seed.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN)))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let v = Self::at(self.seed, self.counter);
        self.counter += 1;
        v
    }

    /// Uniform draw strictly inside (0,1), on a 2⁻⁵² grid.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 12) as f64 + 0.5) * (1.0 / 4_503_599_627_370_496.0)
    }

    /// Standard Fréchet via inversion: `Z = -1/ln U`, cdf `exp(-1/x)`.
    #[inline]
    pub fn frechet(&mut self) -> f64 {
        -1.0 / self.uniform().ln()
    }

    /// Pareto with tail index `alpha` via inversion: `Z = U^(-1/alpha)`, support `x ≥ 1`.
    #[inline]
    pub fn pareto(&mut self, alpha: f64) -> f64 {
        self.uniform().powf(-1.0 / alpha)
    }

    /// Standard exponential via inversion.
    #[inline]
    pub fn exponential(&mut self) -> f64 {
        -self.uniform().ln()
    }

    /// Standard Cauchy via inversion: `tan(π(U - 1/2))`.
    #[inline]
    pub fn cauchy(&mut self) -> f64 {
        (core::f64::consts::PI * (self.uniform() - 0.5)).tan()
    }

    /// Standard Gaussian by Box–Muller; consumes exactly two uniforms.
    #[inline]
    pub fn gaussian(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * core::f64::consts::PI * u2).cos()
    }

    /// Uniform draw from `{0, 1, ..., r-1}`.
    #[inline]
    pub fn below(&mut self, r: u32) -> u32 {
        debug_assert!(r > 0);
        (((self.uniform() * r as f64) as u32).min(r - 1)) as u32
    }
}
