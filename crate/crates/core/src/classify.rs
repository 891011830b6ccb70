//! Threshold grading of per-feature preservation and behavior clusters.
//!
//! Grades stand in for human coding: each feature's error is normalized by
//! the matching stimulus magnitude and cut into three bands. The default
//! cut points are calibrated on synthetic pairs, so they are a proxy and
//! are expected to be tuned per corpus.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, StenoError};
use crate::metrics::PreservationMetrics;

/// How closely trend, periodicity or noise was kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Accuracy {
    VeryWell,
    Somewhat,
    NotAtAll,
}

/// How many peaks and valleys were kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extent {
    Most,
    Some,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grade {
    Accuracy(Accuracy),
    Extent(Extent),
}

impl Grade {
    /// Band index: 0 best, 2 worst.
    pub fn band(self) -> u8 {
        match self {
            Grade::Accuracy(Accuracy::VeryWell) | Grade::Extent(Extent::Most) => 0,
            Grade::Accuracy(Accuracy::Somewhat) | Grade::Extent(Extent::Some) => 1,
            Grade::Accuracy(Accuracy::NotAtAll) | Grade::Extent(Extent::None) => 2,
        }
    }

    /// Top two bands.
    pub fn is_kept(self) -> bool {
        self.band() < 2
    }

    pub fn is_lost(self) -> bool {
        self.band() == 2
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grade::Accuracy(Accuracy::VeryWell) => "very well",
            Grade::Accuracy(Accuracy::Somewhat) => "somewhat",
            Grade::Accuracy(Accuracy::NotAtAll) => "not at all",
            Grade::Extent(Extent::Most) => "most",
            Grade::Extent(Extent::Some) => "some",
            Grade::Extent(Extent::None) => "none",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Trend,
    Periodicity,
    PeaksValleys,
    Noise,
}

impl Feature {
    pub const ALL: [Feature; 4] = [
        Feature::Trend,
        Feature::Periodicity,
        Feature::PeaksValleys,
        Feature::Noise,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrendDirection {
    Up,
    Down,
    Constant,
}

/// Which features a dataset shows. Trend is always present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DatasetProperties {
    pub trend: TrendDirection,
    pub periodic: bool,
    pub peaks_valleys: bool,
    /// Whether the stimulus carries noise worth preserving.
    #[serde(default = "yes")]
    pub noisy: bool,
}

fn yes() -> bool {
    true
}

impl DatasetProperties {
    pub fn has(&self, feature: Feature) -> bool {
        match feature {
            Feature::Trend => true,
            Feature::Periodicity => self.periodic,
            Feature::PeaksValleys => self.peaks_valleys,
            Feature::Noise => self.noisy,
        }
    }

    pub fn with_noise(mut self, noisy: bool) -> Self {
        self.noisy = noisy;
        self
    }
}

/// Two cut points on a normalized error: `<= very_well` is the best band,
/// `<= somewhat` the middle one, anything larger the worst.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cuts {
    pub very_well: f64,
    pub somewhat: f64,
}

impl Cuts {
    pub const fn new(very_well: f64, somewhat: f64) -> Self {
        Self { very_well, somewhat }
    }

    fn band(&self, err: f64) -> u8 {
        if err <= self.very_well {
            0
        } else if err <= self.somewhat {
            1
        } else {
            2
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrendMetric {
    #[default]
    Loess,
    Fft,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GradeThresholds {
    pub trend_metric: TrendMetric,
    /// Trend L2 error over the stimulus L2 norm.
    pub trend: Cuts,
    /// `max(δA/A1, δT/T1)`.
    pub periodicity: Cuts,
    /// Bottleneck distance over half the persistence of the stimulus' most
    /// prominent non-essential pair.
    pub peaks_valleys: Cuts,
    /// Area change over the stimulus noise area.
    pub noise: Cuts,
}

impl Default for GradeThresholds {
    fn default() -> Self {
        Self {
            trend_metric: TrendMetric::Loess,
            trend: Cuts::new(0.2, 0.45),
            periodicity: Cuts::new(0.25, 0.5),
            peaks_valleys: Cuts::new(0.4, 0.75),
            noise: Cuts::new(0.35, 0.7),
        }
    }
}

impl GradeThresholds {
    /// Reads a JSON file; missing fields keep their defaults.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let t: Self = serde_json::from_str(&text)?;
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, c) in [
            ("trend", self.trend),
            ("periodicity", self.periodicity),
            ("peaks_valleys", self.peaks_valleys),
            ("noise", self.noise),
        ] {
            if !(c.very_well >= 0.0 && c.very_well <= c.somewhat) {
                return Err(StenoError::Config(format!(
                    "{name} cuts must satisfy 0 <= very_well <= somewhat, got {} / {}",
                    c.very_well, c.somewhat
                )));
            }
        }
        Ok(())
    }

    fn cuts(&self, feature: Feature) -> Cuts {
        match feature {
            Feature::Trend => self.trend,
            Feature::Periodicity => self.periodicity,
            Feature::PeaksValleys => self.peaks_valleys,
            Feature::Noise => self.noise,
        }
    }
}

/// `err / scale`, with `0/0 = 0` and `x/0 = ∞`.
fn ratio(err: f64, scale: f64) -> f64 {
    if err == 0.0 {
        0.0
    } else if scale > 0.0 {
        err / scale
    } else {
        f64::INFINITY
    }
}

/// The feature's error normalized by the stimulus magnitude, or `None` when
/// the stimulus has nothing to compare (no periodic component).
pub fn normalized_error(metrics: &PreservationMetrics, feature: Feature, trend_metric: TrendMetric) -> Option<f64> {
    let s = &metrics.scales;
    match feature {
        Feature::Trend => {
            let err = match trend_metric {
                TrendMetric::Loess => metrics.trend_l2_loess,
                TrendMetric::Fft => metrics.trend_l2_fft,
            };
            Some(ratio(err, s.chart_l2))
        }
        Feature::Periodicity => {
            let (a1, t1) = (s.amplitude?, s.period_count?);
            match (metrics.delta_amplitude, metrics.delta_period) {
                (Some(da), Some(dt)) => Some(ratio(da, a1).max(ratio(dt as f64, t1 as f64))),
                // stimulus is periodic but the sketch is flat
                _ => Some(f64::INFINITY),
            }
        }
        Feature::PeaksValleys => Some(ratio(metrics.bottleneck, s.prominence / 2.0)),
        Feature::Noise => Some(ratio(metrics.delta_area, s.noise_area)),
    }
}

/// Grades one feature; `None` means not applicable.
pub fn grade_feature(metrics: &PreservationMetrics, feature: Feature, thresholds: &GradeThresholds) -> Option<Grade> {
    let err = normalized_error(metrics, feature, thresholds.trend_metric)?;
    let band = thresholds.cuts(feature).band(err);
    Some(match feature {
        Feature::PeaksValleys => Grade::Extent([Extent::Most, Extent::Some, Extent::None][band as usize]),
        _ => Grade::Accuracy([Accuracy::VeryWell, Accuracy::Somewhat, Accuracy::NotAtAll][band as usize]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FeatureGrades {
    pub trend: Option<Grade>,
    pub periodicity: Option<Grade>,
    pub peaks_valleys: Option<Grade>,
    pub noise: Option<Grade>,
}

impl FeatureGrades {
    /// Grades every feature the dataset has; the rest stay `None`.
    pub fn grade(metrics: &PreservationMetrics, props: &DatasetProperties, thresholds: &GradeThresholds) -> Self {
        let g = |f| if props.has(f) { grade_feature(metrics, f, thresholds) } else { None };
        Self {
            trend: g(Feature::Trend),
            periodicity: g(Feature::Periodicity),
            peaks_valleys: g(Feature::PeaksValleys),
            noise: g(Feature::Noise),
        }
    }

    pub fn get(&self, feature: Feature) -> Option<Grade> {
        match feature {
            Feature::Trend => self.trend,
            Feature::Periodicity => self.periodicity,
            Feature::PeaksValleys => self.peaks_valleys,
            Feature::Noise => self.noise,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterLabel {
    Replicator,
    TrendKeeper,
    DeNoiser,
    Anomaly,
}

impl fmt::Display for ClusterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClusterLabel::Replicator => "Replicator",
            ClusterLabel::TrendKeeper => "Trend Keeper",
            ClusterLabel::DeNoiser => "De-noiser",
            ClusterLabel::Anomaly => "Anomaly",
        })
    }
}

/// Assigns the behavior cluster.
///
/// * Replicator: trend kept, periodicity and peaks kept where present, noise
///   kept (or the stimulus has no noise).
/// * De-noiser: the same content features kept but noise graded lost.
/// * Trend Keeper: trend kept while periodicity and peaks (where present)
///   are lost; noise is free. Needs at least one of the two to exist.
/// * Anomaly: everything else.
pub fn assign_cluster(grades: &FeatureGrades, props: &DatasetProperties) -> Result<ClusterLabel> {
    let mut present = Vec::with_capacity(4);
    for f in Feature::ALL {
        if props.has(f) {
            let g = grades.get(f).ok_or_else(|| {
                StenoError::IncompleteInput(format!("missing grade for {f:?}"))
            })?;
            present.push((f, g));
        }
    }
    let grade = |f: Feature| present.iter().find(|(pf, _)| *pf == f).map(|(_, g)| *g);
    let trend_kept = grade(Feature::Trend).is_some_and(Grade::is_kept);
    let content = [Feature::Periodicity, Feature::PeaksValleys];

    let content_kept = content.iter().all(|&f| grade(f).is_none_or(Grade::is_kept));
    if trend_kept && content_kept {
        return Ok(match grade(Feature::Noise) {
            Some(g) if g.is_lost() => ClusterLabel::DeNoiser,
            _ => ClusterLabel::Replicator,
        });
    }

    let has_content = content.iter().any(|&f| grade(f).is_some());
    let content_lost = content.iter().all(|&f| grade(f).is_none_or(Grade::is_lost));
    if trend_kept && has_content && content_lost {
        return Ok(ClusterLabel::TrendKeeper);
    }
    Ok(ClusterLabel::Anomaly)
}

#[cfg(test)]
mod tests {
    use super::*;

    const VW: Grade = Grade::Accuracy(Accuracy::VeryWell);
    const SW: Grade = Grade::Accuracy(Accuracy::Somewhat);
    const NA: Grade = Grade::Accuracy(Accuracy::NotAtAll);
    const MOST: Grade = Grade::Extent(Extent::Most);
    const NONE: Grade = Grade::Extent(Extent::None);

    fn props(periodic: bool, peaks: bool) -> DatasetProperties {
        DatasetProperties {
            trend: TrendDirection::Constant,
            periodic,
            peaks_valleys: peaks,
            noisy: true,
        }
    }

    fn grades(t: Grade, p: Option<Grade>, k: Option<Grade>, n: Grade) -> FeatureGrades {
        FeatureGrades {
            trend: Some(t),
            periodicity: p,
            peaks_valleys: k,
            noise: Some(n),
        }
    }

    #[test]
    fn replicator_example() {
        let g = grades(VW, Some(SW), Some(MOST), VW);
        assert_eq!(assign_cluster(&g, &props(true, true)).unwrap(), ClusterLabel::Replicator);
    }

    #[test]
    fn trend_keeper_example() {
        let g = grades(VW, Some(NA), Some(NONE), SW);
        assert_eq!(assign_cluster(&g, &props(true, true)).unwrap(), ClusterLabel::TrendKeeper);
    }

    #[test]
    fn denoiser_on_trend_only_dataset() {
        let g = grades(VW, None, None, NA);
        assert_eq!(assign_cluster(&g, &props(false, false)).unwrap(), ClusterLabel::DeNoiser);
    }

    #[test]
    fn missing_grade_is_incomplete() {
        let g = grades(VW, None, Some(MOST), VW);
        assert!(matches!(
            assign_cluster(&g, &props(true, true)),
            Err(StenoError::IncompleteInput(_))
        ));
    }

    #[test]
    fn grade_serialization() {
        assert_eq!(serde_json::to_string(&VW).unwrap(), "\"very_well\"");
        assert_eq!(serde_json::to_string(&NONE).unwrap(), "\"none\"");
        let back: Grade = serde_json::from_str("\"most\"").unwrap();
        assert_eq!(back, MOST);
        assert_eq!(NA.to_string(), "not at all");
    }

    #[test]
    fn ratio_conventions() {
        assert_eq!(ratio(0.0, 0.0), 0.0);
        assert_eq!(ratio(1.0, 0.0), f64::INFINITY);
        assert_eq!(ratio(1.0, 4.0), 0.25);
    }

    #[test]
    fn partial_thresholds_file_keeps_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.json");
        std::fs::write(&p, r#"{"trend":{"very_well":0.1,"somewhat":0.3}}"#).unwrap();
        let t = GradeThresholds::load(&p).unwrap();
        assert_eq!(t.trend, Cuts::new(0.1, 0.3));
        assert_eq!(t.noise, GradeThresholds::default().noise);
        std::fs::write(&p, r#"{"noise":{"very_well":0.9,"somewhat":0.3}}"#).unwrap();
        assert!(GradeThresholds::load(&p).is_err());
    }
}
