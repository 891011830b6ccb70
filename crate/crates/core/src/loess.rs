//! Locally weighted linear regression (LOESS) trend estimate.

use crate::error::{Result, StenoError};
use crate::series::TimeSeries;

pub const DEFAULT_SPAN: f64 = 0.4;

/// Degree-1 LOESS with tricube weights.
///
/// Each point is fitted from its `ceil(span·N)` nearest neighbors; weights
/// are `(1 - (d/d_max)³)³` where `d_max` is the distance to the farthest of
/// those neighbors.
pub fn estimate_trend_loess(series: &TimeSeries, span: f64) -> Result<TimeSeries> {
    if !(span > 0.0 && span <= 1.0) {
        return Err(StenoError::Parameter(format!(
            "span must lie in (0, 1], got {span}"
        )));
    }
    let n = series.len();
    let q = ((span * n as f64).ceil() as usize).min(n);
    if q < 3 {
        return Err(StenoError::Parameter(format!(
            "span {span} over {n} samples gives a {q}-point window; need at least 3"
        )));
    }
    let xs = series.xs();
    let ys = series.ys();
    let mut out = Vec::with_capacity(n);
    let mut lo = 0;
    for i in 0..n {
        let x0 = xs[i];
        // slide the q-wide window right while that brings it closer to x0
        while lo + q < n && xs[lo + q] - x0 < x0 - xs[lo] {
            lo += 1;
        }
        let hi = lo + q;
        let d_max = (x0 - xs[lo]).max(xs[hi - 1] - x0);
        out.push(local_fit(&xs[lo..hi], &ys[lo..hi], x0, d_max));
    }
    series.with_ys(out)
}

/// Weighted least-squares line through the window, evaluated at `x0`.
fn local_fit(xs: &[f64], ys: &[f64], x0: f64, d_max: f64) -> f64 {
    let (mut sw, mut swu, mut swuu, mut swy, mut swuy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let u = x - x0;
        let w = tricube(u.abs() / d_max);
        sw += w;
        swu += w * u;
        swuu += w * u * u;
        swy += w * y;
        swuy += w * u * y;
    }
    let det = sw * swuu - swu * swu;
    if det <= 1e-12 * sw * swuu {
        return swy / sw;
    }
    (swy * swuu - swu * swuy) / det
}

#[inline]
fn tricube(t: f64) -> f64 {
    if t >= 1.0 {
        0.0
    } else {
        let a = 1.0 - t * t * t;
        a * a * a
    }
}
