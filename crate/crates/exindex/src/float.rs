//! Scalar abstraction for the numeric core.
//!
//! Every data-facing computation (gaps, estimators, statistics, simulation)
//! is generic over [`Float`], so the same code runs in `f32` or `f64`.
//! Meta-parameters that are not sample data — quantile levels, reference
//! constants of the limit distribution, k-rules — stay `f64` throughout.

use num_traits::{FromPrimitive, ToPrimitive};

/// Scalar type of a time series and everything derived from it.
pub trait Float:
    num_traits::Float
    + FromPrimitive
    + ToPrimitive
    + core::fmt::Debug
    + core::fmt::Display
    + core::iter::Sum
    + Send
    + Sync
    + 'static
{
}

impl Float for f32 {}
impl Float for f64 {}

/// Convert an `f64` constant into `F`.
///
/// Panics only if `F` cannot represent any rounding of the value, which
/// cannot happen for finite inputs with the provided impls.
#[inline]
pub(crate) fn fc<F: Float>(x: f64) -> F {
    F::from_f64(x).expect("finite f64 constant must convert")
}

/// Convert a count into `F` exactly (counts in this crate stay far below 2^52).
#[inline]
pub(crate) fn fu<F: Float>(n: usize) -> F {
    F::from_usize(n).expect("count must convert")
}
