use serde::{Deserialize, Serialize};

use crate::error::{Result, StenoError};

/// Ordered samples of one signal.
///
/// Abscissae are strictly increasing, both axes have the same length (at
/// least two) and every value is finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries", into = "RawSeries")]
pub struct TimeSeries {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSeries {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl TryFrom<RawSeries> for TimeSeries {
    type Error = StenoError;

    fn try_from(raw: RawSeries) -> Result<Self> {
        TimeSeries::new(raw.xs, raw.ys)
    }
}

impl From<TimeSeries> for RawSeries {
    fn from(s: TimeSeries) -> Self {
        RawSeries { xs: s.xs, ys: s.ys }
    }
}

impl TimeSeries {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(StenoError::InvalidSeries(format!(
                "{} abscissae but {} ordinates",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(StenoError::InvalidSeries(format!(
                "need at least 2 samples, got {}",
                xs.len()
            )));
        }
        if let Some(i) = xs.iter().chain(&ys).position(|v| !v.is_finite()) {
            return Err(StenoError::InvalidSeries(format!(
                "non-finite value at flat position {i}"
            )));
        }
        if let Some(i) = xs.windows(2).position(|w| w[1] <= w[0]) {
            return Err(StenoError::InvalidSeries(format!(
                "abscissae not strictly increasing at index {}",
                i + 1
            )));
        }
        Ok(Self { xs, ys })
    }

    /// Samples `ys` at `n` evenly spaced abscissae covering `[0, width]`.
    pub fn uniform(ys: Vec<f64>, width: f64) -> Result<Self> {
        let n = ys.len();
        if n < 2 {
            return Err(StenoError::InvalidSeries(format!(
                "need at least 2 samples, got {n}"
            )));
        }
        let xs = uniform_grid(n, width);
        Self::new(xs, ys)
    }

    /// Same abscissae, new ordinates.
    pub fn with_ys(&self, ys: Vec<f64>) -> Result<Self> {
        if ys.len() != self.xs.len() {
            return Err(StenoError::Alignment(format!(
                "{} ordinates for {} abscissae",
                ys.len(),
                self.xs.len()
            )));
        }
        if ys.iter().any(|v| !v.is_finite()) {
            return Err(StenoError::InvalidSeries("non-finite ordinate".into()));
        }
        Ok(Self {
            xs: self.xs.clone(),
            ys,
        })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.xs, self.ys)
    }

    pub fn mean(&self) -> f64 {
        mean(&self.ys)
    }

    /// Mean squared deviation of the ordinates about their mean.
    pub fn signal_power(&self) -> f64 {
        let m = self.mean();
        self.ys.iter().map(|y| (y - m) * (y - m)).sum::<f64>() / self.ys.len() as f64
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.ys
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| {
                (lo.min(y), hi.max(y))
            })
    }

    /// True when consecutive abscissa gaps agree to within a relative `1e-9`.
    pub fn is_uniform(&self) -> bool {
        let span = self.xs[self.xs.len() - 1] - self.xs[0];
        let step = span / (self.xs.len() - 1) as f64;
        let tol = 1e-9 * step.abs().max(f64::MIN_POSITIVE);
        self.xs.windows(2).all(|w| ((w[1] - w[0]) - step).abs() <= tol)
    }

    /// True when both series carry the same abscissae (within `1e-9` relative).
    pub fn is_aligned_with(&self, other: &TimeSeries) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let scale = self
            .xs
            .iter()
            .chain(&other.xs)
            .fold(1.0_f64, |acc, x| acc.max(x.abs()));
        self.xs
            .iter()
            .zip(&other.xs)
            .all(|(a, b)| (a - b).abs() <= 1e-9 * scale)
    }

    pub(crate) fn check_aligned(&self, other: &TimeSeries) -> Result<()> {
        if self.len() != other.len() {
            return Err(StenoError::Alignment(format!(
                "lengths {} and {} differ",
                self.len(),
                other.len()
            )));
        }
        if !self.is_aligned_with(other) {
            return Err(StenoError::Alignment("abscissae differ".into()));
        }
        Ok(())
    }

    pub(crate) fn check_uniform(&self) -> Result<()> {
        if self.is_uniform() {
            Ok(())
        } else {
            Err(StenoError::Precondition(
                "series must have uniformly spaced abscissae; resample it first".into(),
            ))
        }
    }
}

pub(crate) fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub(crate) fn uniform_grid(n: usize, width: f64) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { width } else { width * i as f64 / last })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(TimeSeries::new(vec![0.0], vec![1.0]).is_err());
        assert!(TimeSeries::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(TimeSeries::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(TimeSeries::new(vec![0.0, 1.0], vec![f64::NAN, 2.0]).is_err());
    }

    #[test]
    fn uniform_grid_hits_both_ends() {
        let s = TimeSeries::uniform(vec![0.0; 7], 950.0).unwrap();
        assert_eq!(s.xs()[0], 0.0);
        assert_eq!(s.xs()[6], 950.0);
        assert!(s.is_uniform());
    }

    #[test]
    fn json_deserialization_validates() {
        let ok: TimeSeries = serde_json::from_str(r#"{"xs":[0,1],"ys":[2,3]}"#).unwrap();
        assert_eq!(ok.ys(), &[2.0, 3.0]);
        assert!(serde_json::from_str::<TimeSeries>(r#"{"xs":[1,0],"ys":[2,3]}"#).is_err());
    }

    #[test]
    fn power_is_about_the_mean() {
        let s = TimeSeries::uniform(vec![3.0, 5.0, 3.0, 5.0], 1.0).unwrap();
        assert!((s.signal_power() - 1.0).abs() < 1e-15);
    }
}
