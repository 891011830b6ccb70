//! Free-hand strokes captured on the drawing canvas, and their conversion
//! into time series.

use serde::{Deserialize, Serialize};

use crate::error::{Result, StenoError};
use crate::series::TimeSeries;

/// Minimal x increment (canvas px) used when a stroke moves backwards.
pub const REPAIR_INCREMENT: f64 = 0.1;

/// Drawing surface geometry in logical pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanvasSpec {
    pub width: f64,
    pub height: f64,
}

impl Default for CanvasSpec {
    /// 950 × 375, aspect 2.53:1.
    fn default() -> Self {
        Self {
            width: 950.0,
            height: 375.0,
        }
    }
}

impl CanvasSpec {
    pub fn new(width: f64, height: f64) -> Result<Self> {
        let c = Self { width, height };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width.is_finite() && self.height.is_finite() && self.width > 0.0 && self.height > 0.0)
        {
            return Err(StenoError::Parameter(format!(
                "canvas must have positive size, got {}x{}",
                self.width, self.height
            )));
        }
        Ok(())
    }

    pub fn aspect(&self) -> f64 {
        self.width / self.height
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (0.0..=self.width).contains(&x) && (0.0..=self.height).contains(&y)
    }
}

/// One pen sample: canvas position (origin top-left, y down) and time in ms.
///
/// Serialized as a three-element array `[x, y, t]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct StrokePoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl StrokePoint {
    pub fn new(x: f64, y: f64, t: f64) -> Self {
        Self { x, y, t }
    }
}

impl From<[f64; 3]> for StrokePoint {
    fn from([x, y, t]: [f64; 3]) -> Self {
        Self { x, y, t }
    }
}

impl From<StrokePoint> for [f64; 3] {
    fn from(p: StrokePoint) -> Self {
        [p.x, p.y, p.t]
    }
}

/// A single continuous stroke as recorded by the capture client.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrokeRecord {
    pub session: String,
    pub stimulus: String,
    pub canvas: CanvasSpec,
    pub points: Vec<StrokePoint>,
}

impl StrokeRecord {
    /// Checks point count, finiteness, canvas bounds and timestamp order.
    pub fn validate(&self) -> Result<()> {
        self.canvas.validate()?;
        if self.points.len() < 2 {
            return Err(StenoError::InvalidStroke(format!(
                "need at least 2 points, got {}",
                self.points.len()
            )));
        }
        for (i, p) in self.points.iter().enumerate() {
            if !(p.x.is_finite() && p.y.is_finite() && p.t.is_finite()) {
                return Err(StenoError::InvalidStroke(format!("non-finite point {i}")));
            }
            if !self.canvas.contains(p.x, p.y) {
                return Err(StenoError::InvalidStroke(format!(
                    "point {i} ({}, {}) outside {}x{} canvas",
                    p.x, p.y, self.canvas.width, self.canvas.height
                )));
            }
        }
        if let Some(i) = self.points.windows(2).position(|w| w[1].t < w[0].t) {
            return Err(StenoError::InvalidStroke(format!(
                "timestamps decrease at point {}",
                i + 1
            )));
        }
        Ok(())
    }

    /// Converts to a time series with y pointing up (`height - y`).
    ///
    /// The stroke must already have strictly increasing x, see
    /// [`repair_temporal_order`].
    pub fn to_series(&self) -> Result<TimeSeries> {
        let xs = self.points.iter().map(|p| p.x).collect();
        let ys = self.points.iter().map(|p| self.canvas.height - p.y).collect();
        TimeSeries::new(xs, ys).map_err(|e| StenoError::InvalidStroke(e.to_string()))
    }

    /// Builds a stroke that traces `series` given in upward canvas pixels.
    pub fn from_canvas_series(
        session: impl Into<String>,
        stimulus: impl Into<String>,
        canvas: CanvasSpec,
        series: &TimeSeries,
    ) -> Self {
        let points = series
            .xs()
            .iter()
            .zip(series.ys())
            .enumerate()
            .map(|(i, (&x, &y))| StrokePoint::new(x, canvas.height - y, i as f64))
            .collect();
        Self {
            session: session.into(),
            stimulus: stimulus.into(),
            canvas,
            points,
        }
    }
}

/// Forces strictly increasing x along the stroke.
///
/// Scanning left to right, whenever `x[i+1] <= x[i]` the later point is moved
/// to `x[i] + 0.1`. Only x changes. The result may run past the canvas width;
/// normalization re-fits it.
pub fn repair_temporal_order(stroke: &StrokeRecord) -> Result<StrokeRecord> {
    if stroke.points.len() < 2 {
        return Err(StenoError::InvalidStroke(format!(
            "need at least 2 points, got {}",
            stroke.points.len()
        )));
    }
    let mut out = stroke.clone();
    for i in 1..out.points.len() {
        let prev = out.points[i - 1].x;
        if out.points[i].x <= prev {
            out.points[i].x = prev + REPAIR_INCREMENT;
        }
    }
    Ok(out)
}
