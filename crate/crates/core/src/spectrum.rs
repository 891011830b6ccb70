//! Frequency-domain decomposition and the log-scale band filters used for
//! trend and noise estimation.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::series::TimeSeries;

/// One-sided spectrum of a real series: bins `0..=N/2`, bin 0 is DC.
///
/// Coefficients are unnormalized (`c_k = Σ y_n e^{-2πikn/N}`).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    bins: Vec<Complex64>,
    len: usize,
}

impl Spectrum {
    pub fn bins(&self) -> &[Complex64] {
        &self.bins
    }

    /// Sample count of the transformed series.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn magnitude(&self, k: usize) -> f64 {
        self.bins[k].norm()
    }

    /// Copy with every bin failing `keep` set to zero.
    pub fn retain(&self, keep: impl Fn(usize) -> bool) -> Spectrum {
        let bins = self
            .bins
            .iter()
            .enumerate()
            .map(|(k, c)| if keep(k) { *c } else { Complex64::new(0.0, 0.0) })
            .collect();
        Spectrum {
            bins,
            len: self.len,
        }
    }

    /// Real inverse transform, rebuilding the negative frequencies by
    /// conjugate symmetry.
    pub fn inverse(&self) -> Vec<f64> {
        let n = self.len;
        let mut full = vec![Complex64::new(0.0, 0.0); n];
        for (k, c) in self.bins.iter().enumerate() {
            full[k] = *c;
            if k != 0 && n - k != k {
                full[n - k] = c.conj();
            }
        }
        FftPlanner::<f64>::new().plan_fft_inverse(n).process(&mut full);
        let scale = 1.0 / n as f64;
        full.iter().map(|c| c.re * scale).collect()
    }
}

/// Forward real transform of the ordinates of a uniformly sampled series.
pub fn fft_decompose(series: &TimeSeries) -> Result<Spectrum> {
    series.check_uniform()?;
    Ok(transform(series.ys()))
}

pub(crate) fn transform(ys: &[f64]) -> Spectrum {
    let n = ys.len();
    let mut buf: Vec<Complex64> = ys.iter().map(|&y| Complex64::new(y, 0.0)).collect();
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buf);
    buf.truncate(n / 2 + 1);
    Spectrum { bins: buf, len: n }
}

/// Splits the frequency axis `[1, N/2]` on a log scale.
///
/// The low cutoff is `K = max(1, round((N/2)^low))` and the high cutoff
/// `K_hi = max(K + 1, round((N/2)^high))`. With the default exponents of ⅓
/// and ⅔ the axis is cut into thirds of equal log width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandSplit {
    pub low_exponent: f64,
    pub high_exponent: f64,
}

impl Default for BandSplit {
    fn default() -> Self {
        Self {
            low_exponent: 1.0 / 3.0,
            high_exponent: 2.0 / 3.0,
        }
    }
}

/// Cutoff bins for a given sample count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cutoffs {
    /// Highest bin kept by the low-pass (trend) filter.
    pub low: usize,
    /// Lowest bin kept by the high-pass (noise) filter.
    pub high: usize,
}

impl BandSplit {
    pub fn cutoffs(&self, n: usize) -> Cutoffs {
        let half = (n / 2).max(1) as f64;
        let low = (half.powf(self.low_exponent).round() as usize).max(1);
        let high = (half.powf(self.high_exponent).round() as usize).max(low + 1);
        Cutoffs { low, high }
    }
}

/// Low-pass trend: keeps bins `k <= K` (DC included).
pub fn estimate_trend_fft(series: &TimeSeries) -> Result<TimeSeries> {
    estimate_trend_fft_with(series, &BandSplit::default())
}

pub fn estimate_trend_fft_with(series: &TimeSeries, split: &BandSplit) -> Result<TimeSeries> {
    let spec = fft_decompose(series)?;
    let c = split.cutoffs(series.len());
    series.with_ys(spec.retain(|k| k <= c.low).inverse())
}

/// High-pass noise: keeps bins `k >= K_hi`.
pub fn estimate_noise_fft(series: &TimeSeries) -> Result<TimeSeries> {
    estimate_noise_fft_with(series, &BandSplit::default())
}

pub fn estimate_noise_fft_with(series: &TimeSeries, split: &BandSplit) -> Result<TimeSeries> {
    let spec = fft_decompose(series)?;
    let c = split.cutoffs(series.len());
    series.with_ys(spec.retain(|k| k >= c.high).inverse())
}

/// Everything strictly between the two cutoffs.
pub fn mid_band_fft(series: &TimeSeries, split: &BandSplit) -> Result<TimeSeries> {
    let spec = fft_decompose(series)?;
    let c = split.cutoffs(series.len());
    series.with_ys(spec.retain(|k| k > c.low && k < c.high).inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    /// O(N²) DFT, one-sided.
    fn naive_dft(ys: &[f64]) -> Vec<Complex64> {
        let n = ys.len();
        (0..=n / 2)
            .map(|k| {
                ys.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (j, &y)| {
                    let ang = -2.0 * PI * (k * j) as f64 / n as f64;
                    acc + Complex64::new(y * ang.cos(), y * ang.sin())
                })
            })
            .collect()
    }

    fn sine(n: usize, cycles: f64) -> TimeSeries {
        let ys = (0..n).map(|i| (2.0 * PI * cycles * i as f64 / n as f64).sin()).collect();
        TimeSeries::uniform(ys, 950.0).unwrap()
    }

    fn linf(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn matches_naive_dft_and_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2, 3, 7, 16, 45, 128, 255, 256] {
            let ys: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let s = TimeSeries::uniform(ys.clone(), 1.0).unwrap();
            let spec = fft_decompose(&s).unwrap();
            for (a, b) in spec.bins().iter().zip(naive_dft(&ys)) {
                assert!((a - b).norm() < 1e-9, "n={n}");
            }
            assert!(linf(&spec.inverse(), &ys) < 1e-9, "n={n}");
        }
    }

    #[test]
    fn pure_sine_has_one_dominant_bin() {
        let spec = fft_decompose(&sine(128, 5.0)).unwrap();
        let best = (1..spec.bins().len())
            .max_by(|&a, &b| spec.magnitude(a).total_cmp(&spec.magnitude(b)))
            .unwrap();
        assert_eq!(best, 5);
    }

    #[test]
    fn zero_series_has_zero_spectrum() {
        let s = TimeSeries::uniform(vec![0.0; 32], 1.0).unwrap();
        assert!(fft_decompose(&s).unwrap().bins().iter().all(|c| c.norm() == 0.0));
        assert!(estimate_trend_fft(&s).unwrap().ys().iter().all(|&y| y == 0.0));
        assert!(estimate_noise_fft(&s).unwrap().ys().iter().all(|&y| y == 0.0));
    }

    #[test]
    fn non_uniform_input_is_rejected() {
        let s = TimeSeries::new(vec![0.0, 1.0, 3.0], vec![0.0; 3]).unwrap();
        assert!(fft_decompose(&s).is_err());
    }

    #[test]
    fn cutoffs_for_the_analysis_length() {
        let c = BandSplit::default().cutoffs(9_500);
        assert_eq!((c.low, c.high), (17, 283));
        let c = BandSplit::default().cutoffs(16);
        assert_eq!((c.low, c.high), (2, 4));
    }

    #[test]
    fn low_pass_passes_one_cycle_and_stops_quarter_band() {
        for n in [16, 64, 256, 9_500] {
            let slow = sine(n, 1.0);
            let out = estimate_trend_fft(&slow).unwrap();
            assert!(linf(out.ys(), slow.ys()) < 1e-6, "n={n}");
            let fast = sine(n, (n / 4) as f64);
            let out = estimate_trend_fft(&fast).unwrap();
            assert!(linf(out.ys(), &vec![0.0; n]) < 1e-6, "n={n}");
        }
    }

    #[test]
    fn high_pass_stops_one_cycle() {
        let out = estimate_noise_fft(&sine(9_500, 1.0)).unwrap();
        assert!(out.ys().iter().all(|y| y.abs() < 1e-6));
    }

    #[test]
    fn bands_partition_the_signal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let split = BandSplit::default();
        for n in [2, 9, 64, 1_000] {
            let ys: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let s = TimeSeries::uniform(ys.clone(), 1.0).unwrap();
            let lo = estimate_trend_fft(&s).unwrap();
            let mid = mid_band_fft(&s, &split).unwrap();
            let hi = estimate_noise_fft(&s).unwrap();
            let sum: Vec<f64> = (0..n).map(|i| lo.ys()[i] + mid.ys()[i] + hi.ys()[i]).collect();
            assert!(linf(&sum, &ys) < 1e-9, "n={n}");
        }
    }
}
