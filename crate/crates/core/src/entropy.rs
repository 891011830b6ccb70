//! Pixel approximate entropy: approximate entropy of a chart after its
//! ordinates are snapped to the canvas pixel rows.

use crate::error::{Result, StenoError};
use crate::series::TimeSeries;
use crate::stroke::CanvasSpec;

pub const DEFAULT_WINDOW: usize = 2;
pub const DEFAULT_TOLERANCE: f64 = 0.2;

/// Maps the ordinate range onto integer rows `0..height`.
pub fn quantize_to_pixels(series: &TimeSeries, canvas: &CanvasSpec) -> Vec<f64> {
    let (lo, hi) = series.min_max();
    let rows = canvas.height.round().max(1.0);
    if hi <= lo {
        return vec![0.0; series.len()];
    }
    let scale = (rows - 1.0) / (hi - lo);
    series.ys().iter().map(|y| ((y - lo) * scale).round()).collect()
}

/// PAE with embedding window `m` and tolerance `r_fraction · σ_pixels`.
///
/// A constant series scores 0. The result is clamped at 0 (finite-sample
/// ApEn can dip a hair below zero).
pub fn pixel_approximate_entropy(
    series: &TimeSeries,
    canvas: &CanvasSpec,
    m: usize,
    r_fraction: f64,
) -> Result<f64> {
    if !(r_fraction >= 0.0 && r_fraction.is_finite()) {
        return Err(StenoError::Parameter(format!(
            "tolerance fraction must be finite and nonnegative, got {r_fraction}"
        )));
    }
    let px = quantize_to_pixels(series, canvas);
    let sd = std_dev(&px);
    if sd == 0.0 {
        return Ok(0.0);
    }
    Ok(approximate_entropy(&px, m, r_fraction * sd)?.max(0.0))
}

/// Approximate entropy `Φ^m(r) − Φ^{m+1}(r)` with Chebyshev distance and
/// self-matches counted.
pub fn approximate_entropy(x: &[f64], m: usize, r: f64) -> Result<f64> {
    let n = x.len();
    if m == 0 {
        return Err(StenoError::Parameter("embedding window must be at least 1".into()));
    }
    if n < m + 2 {
        return Err(StenoError::Parameter(format!(
            "approximate entropy with m={m} needs at least {} samples, got {n}",
            m + 2
        )));
    }
    let nm = n - m + 1; // templates of length m
    let nm1 = n - m; // templates of length m + 1
    let mut c_m = vec![1u32; nm];
    let mut c_m1 = vec![1u32; nm1];
    for i in 0..nm {
        for j in i + 1..nm {
            if (0..m).all(|k| (x[i + k] - x[j + k]).abs() <= r) {
                c_m[i] += 1;
                c_m[j] += 1;
                if j < nm1 && (x[i + m] - x[j + m]).abs() <= r {
                    c_m1[i] += 1;
                    c_m1[j] += 1;
                }
            }
        }
    }
    let phi = |counts: &[u32]| {
        let len = counts.len() as f64;
        counts.iter().map(|&c| (c as f64 / len).ln()).sum::<f64>() / len
    };
    Ok(phi(&c_m) - phi(&c_m1))
}

fn std_dev(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n).sqrt()
}
