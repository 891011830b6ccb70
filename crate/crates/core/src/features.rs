//! One-stop feature extraction for a normalized series.

use serde::{Deserialize, Serialize};

use crate::entropy::{pixel_approximate_entropy, DEFAULT_TOLERANCE, DEFAULT_WINDOW};
use crate::error::Result;
use crate::loess::{estimate_trend_loess, DEFAULT_SPAN};
use crate::periodicity::{estimate_periodicity, PeriodicComponent};
use crate::persistence::{persistence_diagram, PersistenceDiagram};
use crate::series::TimeSeries;
use crate::spectrum::{estimate_noise_fft_with, estimate_trend_fft_with, BandSplit};
use crate::stroke::CanvasSpec;

pub use crate::entropy::approximate_entropy;
pub use crate::loess::estimate_trend_loess as trend_loess;
pub use crate::spectrum::{estimate_noise_fft, estimate_trend_fft, fft_decompose};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureConfig {
    pub bands: BandSplit,
    pub loess_span: f64,
    pub pae_window: usize,
    pub pae_tolerance: f64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            bands: BandSplit::default(),
            loess_span: DEFAULT_SPAN,
            pae_window: DEFAULT_WINDOW,
            pae_tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// Every estimated feature of one series. All component series share the
/// source abscissae.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureProfile {
    pub trend_fft: TimeSeries,
    pub trend_loess: TimeSeries,
    pub periodic: Option<PeriodicComponent>,
    pub extrema: PersistenceDiagram,
    pub noise: TimeSeries,
    pub pae: f64,
}

impl FeatureProfile {
    /// `series` must be uniformly sampled (see
    /// [`normalize_and_resample`](crate::resample::normalize_and_resample)).
    pub fn extract(series: &TimeSeries, canvas: &CanvasSpec, config: &FeatureConfig) -> Result<Self> {
        Ok(Self {
            trend_fft: estimate_trend_fft_with(series, &config.bands)?,
            trend_loess: estimate_trend_loess(series, config.loess_span)?,
            periodic: estimate_periodicity(series)?,
            extrema: persistence_diagram(series),
            noise: estimate_noise_fft_with(series, &config.bands)?,
            pae: pixel_approximate_entropy(series, canvas, config.pae_window, config.pae_tolerance)?,
        })
    }
}
