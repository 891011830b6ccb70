//! Python bindings.
//!
//! Series cross the boundary as `TimeSeries` objects; structured records
//! (strokes, properties, grades, reports) as plain dicts/lists mirroring the
//! JSON schema, converted through the `json` module.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyString;
use serde::de::DeserializeOwned;
use serde::Serialize;

use steno_core::classify::{assign_cluster as core_assign_cluster, DatasetProperties, FeatureGrades};
use steno_core::entropy::pixel_approximate_entropy as core_pae;
use steno_core::features::FeatureConfig;
use steno_core::loess::estimate_trend_loess as core_loess;
use steno_core::metrics::{self, Norm};
use steno_core::noise::{self, NoiseLevel};
use steno_core::periodicity::estimate_periodicity as core_periodicity;
use steno_core::persistence::{self, PersistenceDiagram, PersistencePair};
use steno_core::plan::{build_stimulus_plan_with, PlanOptions};
use steno_core::resample::normalize_and_resample as core_resample;
use steno_core::spectrum;
use steno_core::stroke::{repair_temporal_order, CanvasSpec, StrokeRecord};
use steno_core::{Analyzer, FeatureProfile};

create_exception!(steno, StenoError, PyValueError, "Raised for invalid input to any steno operation.");

fn err(e: impl std::fmt::Display) -> PyErr {
    StenoError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Accepts either a JSON string or a JSON-compatible Python object.
fn from_py<T: DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = if let Ok(s) = obj.cast::<PyString>() {
        s.to_string()
    } else {
        obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?
    };
    serde_json::from_str(&text).map_err(err)
}

fn canvas(width: f64, height: f64) -> PyResult<CanvasSpec> {
    CanvasSpec::new(width, height).map_err(err)
}

fn level(tag: &str) -> PyResult<NoiseLevel> {
    tag.parse().map_err(err)
}

#[pyclass(name = "TimeSeries", module = "steno", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyTimeSeries {
    inner: steno_core::TimeSeries,
}

impl From<steno_core::TimeSeries> for PyTimeSeries {
    fn from(inner: steno_core::TimeSeries) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyTimeSeries {
    #[new]
    fn new(xs: Vec<f64>, ys: Vec<f64>) -> PyResult<Self> {
        Ok(steno_core::TimeSeries::new(xs, ys).map_err(err)?.into())
    }

    /// Evenly spaced abscissae on `[0, width]`.
    #[staticmethod]
    #[pyo3(signature = (ys, width = None))]
    fn uniform(ys: Vec<f64>, width: Option<f64>) -> PyResult<Self> {
        let w = width.unwrap_or((ys.len().max(2) - 1) as f64);
        Ok(steno_core::TimeSeries::uniform(ys, w).map_err(err)?.into())
    }

    #[getter]
    fn xs(&self) -> Vec<f64> {
        self.inner.xs().to_vec()
    }

    #[getter]
    fn ys(&self) -> Vec<f64> {
        self.inner.ys().to_vec()
    }

    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: PyRef<'_, PyTimeSeries>) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let (lo, hi) = self.inner.min_max();
        format!("TimeSeries(len={}, min={lo}, max={hi})", self.inner.len())
    }
}

type Series<'py> = PyRef<'py, PyTimeSeries>;

/// Noise at the named level (`none`, `30`, `20`, `10`, `5` or `low`…`max`).
#[pyfunction]
fn inject_gaussian_noise(series: Series<'_>, level: &str, seed: u64) -> PyResult<PyTimeSeries> {
    let lvl = self::level(level)?;
    Ok(noise::inject_gaussian_noise(&series.inner, lvl, seed).map_err(err)?.into())
}

/// SNR in dB; `inf` when the two series are identical.
#[pyfunction]
fn measure_snr(signal: Series<'_>, noisy: Series<'_>) -> PyResult<f64> {
    let snr = noise::measure_snr(&signal.inner, &noisy.inner).map_err(err)?;
    Ok(snr.db().unwrap_or(f64::INFINITY))
}

/// Stroke dict with its x repaired to strictly increasing.
#[pyfunction]
fn repair_stroke<'py>(stroke: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let s: StrokeRecord = from_py(stroke)?;
    to_py(stroke.py(), &repair_temporal_order(&s).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (series, n_target, width = 950.0, height = 375.0))]
fn normalize_and_resample(series: Series<'_>, n_target: usize, width: f64, height: f64) -> PyResult<PyTimeSeries> {
    Ok(core_resample(&series.inner, &canvas(width, height)?, n_target).map_err(err)?.into())
}

#[pyfunction]
fn estimate_trend_fft(series: Series<'_>) -> PyResult<PyTimeSeries> {
    Ok(spectrum::estimate_trend_fft(&series.inner).map_err(err)?.into())
}

#[pyfunction]
fn estimate_noise_fft(series: Series<'_>) -> PyResult<PyTimeSeries> {
    Ok(spectrum::estimate_noise_fft(&series.inner).map_err(err)?.into())
}

#[pyfunction]
#[pyo3(signature = (series, span = 0.4))]
fn estimate_trend_loess(series: Series<'_>, span: f64) -> PyResult<PyTimeSeries> {
    Ok(core_loess(&series.inner, span).map_err(err)?.into())
}

/// `(amplitude, period_count)` of the dominant frequency, or `None`.
#[pyfunction]
fn estimate_periodicity(series: Series<'_>) -> PyResult<Option<(f64, usize)>> {
    let p = core_periodicity(&series.inner).map_err(err)?;
    Ok(p.map(|p| (p.amplitude, p.period_count)))
}

/// `(birth, death)` pairs sorted by birth.
#[pyfunction]
fn persistence_diagram(series: Series<'_>) -> Vec<(f64, f64)> {
    persistence::persistence_diagram(&series.inner)
        .pairs()
        .iter()
        .map(|p| (p.birth, p.death))
        .collect()
}

fn diagram(pairs: Vec<(f64, f64)>) -> PyResult<PersistenceDiagram> {
    if let Some((b, d)) = pairs.iter().find(|(b, d)| b.partial_cmp(d).is_none_or(|o| o.is_gt())) {
        return Err(err(format!("pair ({b}, {d}) has death before birth")));
    }
    Ok(PersistenceDiagram::from_pairs(
        pairs.into_iter().map(|(b, d)| PersistencePair::new(b, d)).collect(),
    ))
}

#[pyfunction]
fn bottleneck_distance(d1: Vec<(f64, f64)>, d2: Vec<(f64, f64)>) -> PyResult<f64> {
    Ok(metrics::bottleneck_distance(&diagram(d1)?, &diagram(d2)?))
}

#[pyfunction]
fn dtw_distance(a: Series<'_>, b: Series<'_>) -> f64 {
    metrics::dtw_distance(&a.inner, &b.inner)
}

/// `p` is `"l1"`, `"l2"` or `"linf"`.
#[pyfunction]
#[pyo3(signature = (a, b, p = "l2"))]
fn lp_norm(a: Series<'_>, b: Series<'_>, p: &str) -> PyResult<f64> {
    let norm = match p.to_ascii_lowercase().as_str() {
        "l1" | "1" => Norm::L1,
        "l2" | "2" => Norm::L2,
        "linf" | "inf" => Norm::LInf,
        other => return Err(err(format!("unknown norm `{other}`"))),
    };
    metrics::lp_norm(&a.inner, &b.inner, norm).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (series, m = 2, r = 0.2, width = 950.0, height = 375.0))]
fn pixel_approximate_entropy(series: Series<'_>, m: usize, r: f64, width: f64, height: f64) -> PyResult<f64> {
    core_pae(&series.inner, &canvas(width, height)?, m, r).map_err(err)
}

/// Feature profile of a normalized series as a dict.
#[pyfunction]
#[pyo3(signature = (series, width = 950.0, height = 375.0))]
fn extract_features<'py>(py: Python<'py>, series: Series<'_>, width: f64, height: f64) -> PyResult<Bound<'py, PyAny>> {
    let profile = FeatureProfile::extract(&series.inner, &canvas(width, height)?, &FeatureConfig::default())
        .map_err(err)?;
    to_py(py, &profile)
}

/// Full comparison of a stimulus (data units) against a stroke dict.
/// `properties` is `{"trend": "up"|"down"|"constant", "periodic": bool,
/// "peaks_valleys": bool, "noisy": bool}`.
#[pyfunction]
#[pyo3(signature = (stimulus, stroke, properties, samples = steno_core::ANALYSIS_SAMPLES))]
fn analyze<'py>(
    stimulus: Series<'_>,
    stroke: &Bound<'py, PyAny>,
    properties: &Bound<'py, PyAny>,
    samples: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let stroke: StrokeRecord = from_py(stroke)?;
    let props: DatasetProperties = from_py(properties)?;
    let analyzer = Analyzer {
        canvas: stroke.canvas,
        samples,
        ..Analyzer::default()
    };
    let py = properties.py();
    let stimulus = stimulus.inner.clone();
    let c = py
        .detach(move || analyzer.analyze(&stimulus, &stroke, &props))
        .map_err(err)?;
    to_py(py, &c)
}

/// Cluster label for a grades dict under the given properties.
#[pyfunction]
fn assign_cluster(grades: &Bound<'_, PyAny>, properties: &Bound<'_, PyAny>) -> PyResult<String> {
    let g: FeatureGrades = from_py(grades)?;
    let p: DatasetProperties = from_py(properties)?;
    let label = core_assign_cluster(&g, &p).map_err(err)?;
    Ok(serde_json::to_value(label).map_err(err)?.as_str().unwrap_or_default().to_string())
}

/// `[(dataset, level_tag), ...]` in presentation order.
#[pyfunction]
fn build_stimulus_plan(datasets: Vec<String>, participant: usize, seed: u64) -> PyResult<Vec<(String, String)>> {
    let opts = PlanOptions {
        allow_any_dataset_count: true,
    };
    let plan = build_stimulus_plan_with(&datasets, participant, seed, opts).map_err(err)?;
    Ok(plan
        .assignments
        .into_iter()
        .map(|a| (a.dataset, a.level.tag().to_string()))
        .collect())
}

/// OLS of error against noise level; `points` is `[(level_tag, error), ...]`.
#[pyfunction]
fn error_noise_regression<'py>(py: Python<'py>, points: Vec<(String, f64)>) -> PyResult<Bound<'py, PyAny>> {
    let pts = points
        .into_iter()
        .map(|(l, e)| Ok((level(&l)?, e)))
        .collect::<PyResult<Vec<_>>>()?;
    to_py(py, &metrics::error_noise_regression(&pts).map_err(err)?)
}

#[pymodule]
fn steno(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("StenoError", m.py().get_type::<StenoError>())?;
    m.add("ANALYSIS_SAMPLES", steno_core::ANALYSIS_SAMPLES)?;
    m.add_class::<PyTimeSeries>()?;
    m.add_function(wrap_pyfunction!(inject_gaussian_noise, m)?)?;
    m.add_function(wrap_pyfunction!(measure_snr, m)?)?;
    m.add_function(wrap_pyfunction!(repair_stroke, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_and_resample, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_trend_fft, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_noise_fft, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_trend_loess, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_periodicity, m)?)?;
    m.add_function(wrap_pyfunction!(persistence_diagram, m)?)?;
    m.add_function(wrap_pyfunction!(bottleneck_distance, m)?)?;
    m.add_function(wrap_pyfunction!(dtw_distance, m)?)?;
    m.add_function(wrap_pyfunction!(lp_norm, m)?)?;
    m.add_function(wrap_pyfunction!(pixel_approximate_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(extract_features, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(assign_cluster, m)?)?;
    m.add_function(wrap_pyfunction!(build_stimulus_plan, m)?)?;
    m.add_function(wrap_pyfunction!(error_noise_regression, m)?)?;
    Ok(())
}
