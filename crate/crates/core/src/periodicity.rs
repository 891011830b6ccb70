use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::series::TimeSeries;
use crate::spectrum::fft_decompose;

/// The dominant sinusoid of a series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicComponent {
    /// Peak amplitude of the reconstructed sinusoid, in ordinate units.
    pub amplitude: f64,
    /// Number of whole cycles over the window (the FFT bin index).
    pub period_count: usize,
    pub waveform: TimeSeries,
}

/// Picks the strongest non-DC frequency bin and reconstructs it.
///
/// Returns `Ok(None)` when every non-DC bin is (numerically) zero, i.e. the
/// input is constant. Ties go to the lowest frequency.
pub fn estimate_periodicity(series: &TimeSeries) -> Result<Option<PeriodicComponent>> {
    let spec = fft_decompose(series)?;
    let n = spec.len();
    let bins = spec.bins();
    let mut best: Option<(usize, f64)> = None;
    for (k, c) in bins.iter().enumerate().skip(1) {
        let m = c.norm();
        if best.is_none_or(|(_, bm)| m > bm) {
            best = Some((k, m));
        }
    }
    let Some((k, mag)) = best else {
        return Ok(None);
    };
    let l1: f64 = series.ys().iter().map(|y| y.abs()).sum();
    if mag <= 1e-10 * l1 {
        return Ok(None);
    }
    // the Nyquist bin has no mirrored partner
    let factor = if 2 * k == n { 1.0 } else { 2.0 };
    let amplitude = factor * mag / n as f64;
    let waveform = series.with_ys(spec.retain(|j| j == k).inverse())?;
    Ok(Some(PeriodicComponent {
        amplitude,
        period_count: k,
        waveform,
    }))
}
