//! Analysis toolkit for line-chart re-drawing studies.
//!
//! The pipeline runs from stimulus generation (SNR-controlled Gaussian noise
//! on a reference series) through stroke capture, stroke repair and
//! resampling, to feature estimation (trend, periodicity, peaks and valleys,
//! noise), pairwise preservation metrics, threshold grading and finally a
//! behavior-cluster label per sketch.
//!
//! ```
//! use steno_core::{CanvasSpec, TimeSeries};
//! use steno_core::resample::normalize_and_resample;
//!
//! let raw = TimeSeries::new(vec![0.0, 1.0, 2.0], vec![1.0, 3.0, 2.0]).unwrap();
//! let out = normalize_and_resample(&raw, &CanvasSpec::default(), 9_500).unwrap();
//! assert_eq!(out.len(), 9_500);
//! ```

pub mod catalog;
pub mod classify;
pub mod entropy;
pub mod error;
pub mod features;
pub mod io;
pub mod loess;
pub mod metrics;
pub mod noise;
pub mod periodicity;
pub mod persistence;
pub mod pipeline;
pub mod plan;
pub mod render;
pub mod resample;
pub mod series;
pub mod session;
pub mod spectrum;
pub mod store;
pub mod stroke;

pub use classify::{ClusterLabel, DatasetProperties, FeatureGrades, Grade, GradeThresholds};
pub use error::{Result, StenoError};
pub use features::FeatureProfile;
pub use metrics::PreservationMetrics;
pub use noise::NoiseLevel;
pub use periodicity::PeriodicComponent;
pub use persistence::PersistenceDiagram;
pub use pipeline::{Analyzer, PreservationReport};
pub use series::TimeSeries;
pub use stroke::{CanvasSpec, StrokePoint, StrokeRecord};

/// Sample count every stimulus and sketch is resampled to before analysis
/// (ten times the 950 px canvas width).
pub const ANALYSIS_SAMPLES: usize = 9_500;
