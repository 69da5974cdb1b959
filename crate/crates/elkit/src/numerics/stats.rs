//! Summary statistics shared by the simulation harness and the tests.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub mean: f64,
    /// Divisor n-1; zero when fewer than two values.
    pub variance: f64,
    pub count: usize,
}

/// Mean and n-1 variance of a nonempty slice.
pub fn summarize(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::domain("summarize requires at least one value"));
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let variance = if n >= 2 {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    Ok(Summary {
        mean,
        variance,
        count: n,
    })
}

/// Median (average of the two middle order statistics for even counts).
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::domain("median requires at least one value"));
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = v.len();
    if n % 2 == 1 {
        Ok(v[n / 2])
    } else {
        Ok(0.5 * (v[n / 2 - 1] + v[n / 2]))
    }
}

/// Empirical quantile with linear interpolation between order statistics.
pub fn quantile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::domain("quantile requires at least one value"));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::domain(format!(
            "quantile level must be in [0,1] (got {q})"
        )));
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    Ok(v[lo] + frac * (v[hi] - v[lo]))
}
