//! SNR-targeted Gaussian noise for stimulus generation.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Result, StenoError};
use crate::series::TimeSeries;

/// The five stimulus noise conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseLevel {
    None,
    Low,
    Medium,
    High,
    Max,
}

impl NoiseLevel {
    pub const ALL: [NoiseLevel; 5] = [
        NoiseLevel::None,
        NoiseLevel::Low,
        NoiseLevel::Medium,
        NoiseLevel::High,
        NoiseLevel::Max,
    ];

    /// Target SNR in dB; `None` for the unmodified control.
    pub fn target_snr_db(self) -> Option<f64> {
        match self {
            NoiseLevel::None => None,
            NoiseLevel::Low => Some(30.0),
            NoiseLevel::Medium => Some(20.0),
            NoiseLevel::High => Some(10.0),
            NoiseLevel::Max => Some(5.0),
        }
    }

    /// Ordinal position, 0 (none) to 4 (max).
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// Short tag used in file names and on the command line.
    pub fn tag(self) -> &'static str {
        match self {
            NoiseLevel::None => "none",
            NoiseLevel::Low => "30",
            NoiseLevel::Medium => "20",
            NoiseLevel::High => "10",
            NoiseLevel::Max => "5",
        }
    }
}

impl fmt::Display for NoiseLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for NoiseLevel {
    type Err = StenoError;

    /// Accepts the dB tag (`none`, `30`, `20`, `10`, `5`) or the level name.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" | "0" => Ok(NoiseLevel::None),
            "30" | "low" => Ok(NoiseLevel::Low),
            "20" | "medium" => Ok(NoiseLevel::Medium),
            "10" | "high" => Ok(NoiseLevel::High),
            "5" | "max" => Ok(NoiseLevel::Max),
            other => Err(StenoError::Parameter(format!(
                "unknown noise level `{other}`, expected one of none|30|20|10|5"
            ))),
        }
    }
}

/// Adds zero-mean Gaussian noise with `σ² = P_signal / 10^(SNR/10)`.
///
/// Signal power is the mean squared deviation about the mean. σ is fixed a
/// priori from that power, so the realized SNR scatters slightly around the
/// target. Level `None` returns the input unchanged.
pub fn inject_gaussian_noise(series: &TimeSeries, level: NoiseLevel, seed: u64) -> Result<TimeSeries> {
    let Some(snr_db) = level.target_snr_db() else {
        return Ok(series.clone());
    };
    let power = series.signal_power();
    if power <= 0.0 {
        return Err(StenoError::DegenerateSignal(format!(
            "zero signal power cannot reach a {snr_db} dB target"
        )));
    }
    let sigma = (power / 10f64.powf(snr_db / 10.0)).sqrt();
    let normal = Normal::new(0.0, sigma).map_err(|e| StenoError::Parameter(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ys = series
        .ys()
        .iter()
        .map(|y| y + normal.sample(&mut rng))
        .collect();
    series.with_ys(ys)
}

/// Outcome of an SNR measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Snr {
    Decibels(f64),
    /// The two series are identical.
    Infinite,
}

impl Snr {
    pub fn db(self) -> Option<f64> {
        match self {
            Snr::Decibels(v) => Some(v),
            Snr::Infinite => None,
        }
    }
}

/// `10·log10(P_signal / P_noise)` with `P_noise` the mean squared difference.
pub fn measure_snr(signal: &TimeSeries, noisy: &TimeSeries) -> Result<Snr> {
    signal.check_aligned(noisy)?;
    let n = signal.len() as f64;
    let noise_power = signal
        .ys()
        .iter()
        .zip(noisy.ys())
        .map(|(a, b)| (b - a) * (b - a))
        .sum::<f64>()
        / n;
    if noise_power == 0.0 {
        return Ok(Snr::Infinite);
    }
    Ok(Snr::Decibels(10.0 * (signal.signal_power() / noise_power).log10()))
}
