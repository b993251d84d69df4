//! Trapezoidal time averages over sampled signals.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One trapezoid panel between two samples.
#[inline]
pub fn panel<T: Scalar>(t0: T, v0: T, t1: T, v1: T) -> T {
    (v0 + v1) * (t1 - t0) * T::lit(0.5)
}

/// Trapezoidal integral of `values` sampled at `times`.
pub fn trapezoid<T: Scalar>(times: &[T], values: &[T]) -> T {
    debug_assert_eq!(times.len(), values.len());
    let mut acc = T::zero();
    for i in 1..times.len() {
        acc = acc + panel(times[i - 1], values[i - 1], times[i], values[i]);
    }
    acc
}

/// Integral divided by the covered duration.
pub fn time_average<T: Scalar>(times: &[T], values: &[T]) -> Result<T> {
    if times.len() < 2 {
        return Err(Error::Validation("time average needs at least 2 samples".into()));
    }
    let duration = times[times.len() - 1] - times[0];
    if duration <= T::zero() {
        return Err(Error::Validation("non-positive duration".into()));
    }
    Ok(trapezoid(times, values) / duration)
}
