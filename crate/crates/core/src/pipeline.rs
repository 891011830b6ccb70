//! End-to-end comparison of a stimulus and a sketch, and corpus reports.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::Catalog;
use crate::classify::{assign_cluster, ClusterLabel, DatasetProperties, FeatureGrades, GradeThresholds};
use crate::error::Result;
use crate::features::{FeatureConfig, FeatureProfile};
use crate::metrics::{error_noise_regression, PreservationMetrics, RegressionOutcome};
use crate::noise::NoiseLevel;
use crate::render::to_canvas;
use crate::resample::normalize_and_resample;
use crate::series::TimeSeries;
use crate::session::Session;
use crate::stroke::{repair_temporal_order, CanvasSpec, StrokeRecord};
use crate::ANALYSIS_SAMPLES;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Analyzer {
    pub canvas: CanvasSpec,
    pub samples: usize,
    pub features: FeatureConfig,
    pub thresholds: GradeThresholds,
}

impl Default for Analyzer {
    fn default() -> Self {
        Self {
            canvas: CanvasSpec::default(),
            samples: ANALYSIS_SAMPLES,
            features: FeatureConfig::default(),
            thresholds: GradeThresholds::default(),
        }
    }
}

/// Metrics, grades and cluster for one pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub metrics: PreservationMetrics,
    pub grades: FeatureGrades,
    pub cluster: ClusterLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreservationReport {
    pub session: String,
    pub stimulus_index: usize,
    pub dataset: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<NoiseLevel>,
    pub metrics: PreservationMetrics,
    pub grades: FeatureGrades,
    pub cluster: ClusterLabel,
}

impl Analyzer {
    /// Data-unit stimulus → canvas pixels → normalized analysis grid.
    pub fn prepare_stimulus(&self, stimulus: &TimeSeries) -> Result<TimeSeries> {
        let px = to_canvas(stimulus, &self.canvas)?;
        normalize_and_resample(&px, &self.canvas, self.samples)
    }

    /// Repair, flip to y-up, then normalize.
    pub fn prepare_sketch(&self, stroke: &StrokeRecord) -> Result<TimeSeries> {
        let repaired = repair_temporal_order(stroke)?;
        let series = repaired.to_series()?;
        normalize_and_resample(&series, &self.canvas, self.samples)
    }

    pub fn profile(&self, normalized: &TimeSeries) -> Result<FeatureProfile> {
        FeatureProfile::extract(normalized, &self.canvas, &self.features)
    }

    /// Compares two series already on the analysis grid.
    pub fn compare(
        &self,
        stimulus: &TimeSeries,
        sketch: &TimeSeries,
        props: &DatasetProperties,
    ) -> Result<Comparison> {
        let (fs, fk) = rayon::join(|| self.profile(stimulus), || self.profile(sketch));
        let metrics = PreservationMetrics::compute(stimulus, &fs?, &fk?)?;
        let grades = FeatureGrades::grade(&metrics, props, &self.thresholds);
        let cluster = assign_cluster(&grades, props)?;
        Ok(Comparison {
            metrics,
            grades,
            cluster,
        })
    }

    /// Stimulus in data units against a raw captured stroke.
    pub fn analyze(
        &self,
        stimulus: &TimeSeries,
        stroke: &StrokeRecord,
        props: &DatasetProperties,
    ) -> Result<Comparison> {
        self.compare(&self.prepare_stimulus(stimulus)?, &self.prepare_sketch(stroke)?, props)
    }

    /// Reports for every accepted stroke of the given sessions, ordered by
    /// session id then stimulus index.
    pub fn session_reports<'a>(
        &self,
        catalog: &Catalog,
        sessions: impl IntoIterator<Item = &'a Session>,
    ) -> Result<Vec<PreservationReport>> {
        let jobs: Vec<_> = sessions
            .into_iter()
            .flat_map(|s| {
                s.accepted()
                    .map(move |(i, a, k)| (s.id.clone(), i, a.dataset.clone(), a.level, k.clone()))
            })
            .collect();
        let mut reports = jobs
            .into_par_iter()
            .map(|(session, idx, dataset, level, stroke)| {
                let stimulus = catalog.stimulus(&dataset, level)?;
                let props = catalog.properties(&dataset, level)?;
                let c = self.analyze(&stimulus, &stroke, &props)?;
                Ok(PreservationReport {
                    session,
                    stimulus_index: idx,
                    dataset,
                    level: Some(level),
                    metrics: c.metrics,
                    grades: c.grades,
                    cluster: c.cluster,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        reports.sort_by(|a, b| a.session.cmp(&b.session).then(a.stimulus_index.cmp(&b.stimulus_index)));
        Ok(reports)
    }
}

/// Metrics tracked in the error-vs-noise summary.
pub const REGRESSION_METRICS: [&str; 7] = [
    "trend_l2_fft",
    "trend_l2_loess",
    "delta_amplitude",
    "delta_period",
    "bottleneck",
    "delta_area",
    "pae_sketch",
];

pub fn metric_value(m: &PreservationMetrics, name: &str) -> Option<f64> {
    match name {
        "trend_l2_fft" => Some(m.trend_l2_fft),
        "trend_l2_loess" => Some(m.trend_l2_loess),
        "trend_l1" => Some(m.trend_l1),
        "trend_linf" => Some(m.trend_linf),
        "trend_dtw" => Some(m.trend_dtw),
        "delta_amplitude" => m.delta_amplitude,
        "delta_period" => m.delta_period.map(|p| p as f64),
        "bottleneck" => Some(m.bottleneck),
        "delta_area" => Some(m.delta_area),
        "delta_area_signed" => Some(m.delta_area_signed),
        "pae_stimulus" => Some(m.pae_stimulus),
        "pae_sketch" => Some(m.pae_sketch),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionSummary {
    pub dataset: String,
    pub metric: String,
    pub points: Vec<(NoiseLevel, f64)>,
    /// `None` when fewer than two noise levels have data.
    pub fit: Option<RegressionOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub reports: Vec<PreservationReport>,
    pub regressions: Vec<RegressionSummary>,
}

/// Per-dataset, per-metric error-vs-noise regressions over `reports`.
pub fn summarize(reports: &[PreservationReport]) -> Vec<RegressionSummary> {
    let mut datasets: Vec<&str> = reports.iter().map(|r| r.dataset.as_str()).collect();
    datasets.sort_unstable();
    datasets.dedup();
    let mut out = Vec::new();
    for d in datasets {
        for metric in REGRESSION_METRICS {
            let points: Vec<(NoiseLevel, f64)> = reports
                .iter()
                .filter(|r| r.dataset == d)
                .filter_map(|r| Some((r.level?, metric_value(&r.metrics, metric)?)))
                .collect();
            if points.is_empty() {
                continue;
            }
            let fit = error_noise_regression(&points).ok();
            out.push(RegressionSummary {
                dataset: d.to_string(),
                metric: metric.to_string(),
                points,
                fit,
            });
        }
    }
    out
}
