//! Sample means, autocovariances, the marginal empirical variance, and the
//! lag-windowed spectral variance estimator.
//!
//! For a series `h_0..h_{n-1}` the spectral estimator is
//!
//! ```text
//! V_n = sum_{|l| < b} w(l) * rho(l),
//! rho(l) = (1/n) * sum_{k=0}^{n-l-1} (h_k - mean)(h_{k+l} - mean),
//! ```
//!
//! with divisor `n` (not `n - l`) and the full-sample mean in every lag term.
//! The lag window is trapezoidal: flat at 1 up to half the truncation point,
//! then linear down to zero.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Arithmetic mean with compensated summation.
pub fn sample_mean(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput {
            context: "sample_mean of empty series",
        });
    }
    Ok(compensated_sum(values) / values.len() as f64)
}

/// Sample autocovariance at lag `lag`, with `rho(-l) = rho(l)`.
///
/// Divides by the full series length `n` and centers every term by the
/// full-sample mean.
pub fn sample_autocovariance(values: &[f64], lag: isize) -> Result<f64> {
    let n = values.len();
    if n == 0 {
        return Err(Error::EmptyInput {
            context: "autocovariance of empty series",
        });
    }
    let l = lag.unsigned_abs();
    if l >= n {
        return Err(Error::LagOutOfRange { lag: l, len: n });
    }
    let mean = sample_mean(values)?;
    Ok(lag_sum(values, mean, l) / n as f64)
}

/// Compensated sum of centered cross products at lag `l`.
fn lag_sum(values: &[f64], mean: f64, l: usize) -> f64 {
    let n = values.len();
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in 0..n - l {
        let x = (values[k] - mean) * (values[k + l] - mean);
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Symmetric trapezoidal lag window with truncation point `b`.
///
/// Weights are 1 for `|l| <= b/2`, fall linearly to 0 at `|l| = b`, and
/// vanish beyond.
#[derive(Debug, Clone, PartialEq)]
pub struct LagWindow {
    truncation: usize,
    weights: Vec<f64>,
}

impl LagWindow {
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Window weight at a (possibly negative) lag.
    pub fn weight(&self, lag: isize) -> f64 {
        let l = lag.unsigned_abs();
        if l < self.truncation {
            self.weights[l]
        } else {
            0.0
        }
    }
}

/// Build the trapezoidal lag window for truncation point `truncation >= 2`.
pub fn make_lag_window(truncation: usize) -> Result<LagWindow> {
    if truncation < 2 {
        return Err(Error::InvalidParameter {
            context: "truncation point must be at least 2",
        });
    }
    let weights = (0..truncation)
        .map(|l| {
            let y = l as f64 / truncation as f64;
            if y <= 0.5 {
                1.0
            } else {
                2.0 * (1.0 - y)
            }
        })
        .collect();
    Ok(LagWindow {
        truncation,
        weights,
    })
}

/// Lag-windowed spectral variance estimate of a series.
///
/// `O(n * b)` via the autocovariance path; lags are accumulated in ascending
/// order for determinism.
pub fn spectral_variance(values: &[f64], window: &LagWindow) -> Result<f64> {
    let n = values.len();
    if window.truncation >= n {
        return Err(Error::TruncationTooLarge {
            truncation: window.truncation,
            len: n,
        });
    }
    let mean = sample_mean(values)?;
    let mut total = 0.0;
    for l in 0..window.truncation {
        let rho = lag_sum(values, mean, l) / n as f64;
        let factor = if l == 0 { 1.0 } else { 2.0 };
        total += factor * window.weights[l] * rho;
    }
    Ok(total)
}

/// Unbiased marginal sample variance (divisor `n - 1`).
pub fn empirical_variance(values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InvalidParameter {
            context: "variance needs at least two observations",
        });
    }
    let mean = sample_mean(values)?;
    let ss = lag_sum(values, mean, 0);
    Ok(ss / (n - 1) as f64)
}

/// Default truncation point `2 * ceil(log n / log(1/contraction))`, clamped
/// to `[2, n-1]`.
///
/// `contraction` is the per-step contraction rate of the chain's transition
/// kernel; values near 1 force the clamp to `n - 1` and emit a warning.
pub fn default_truncation(n: usize, contraction: f64) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            context: "series length must be at least 2",
        });
    }
    if !(contraction > 0.0 && contraction < 1.0) {
        return Err(Error::InvalidParameter {
            context: "contraction rate must lie strictly inside (0, 1)",
        });
    }
    let ratio = (n as f64).ln() / (1.0 / contraction).ln();
    let b = 2.0 * ratio.ceil();
    let upper = n - 1;
    let b = if b.is_finite() { b as usize } else { upper };
    if b > upper {
        log::warn!(
            "truncation point {b} clamped to {upper}; contraction {contraction} too close to 1 \
             for series length {n}"
        );
        return Ok(upper);
    }
    Ok(b.max(2))
}
