//! Canvas normalization: affine x fit, linear-interpolation resampling and
//! vertical centering.

use crate::error::{Result, StenoError};
use crate::series::{mean, uniform_grid, TimeSeries};
use crate::stroke::CanvasSpec;

/// Stretches `series` onto `[0, canvas.width]`, resamples it to `n_target`
/// uniform samples by linear interpolation and subtracts the mean ordinate.
pub fn normalize_and_resample(
    series: &TimeSeries,
    canvas: &CanvasSpec,
    n_target: usize,
) -> Result<TimeSeries> {
    if n_target < 2 {
        return Err(StenoError::Parameter(format!(
            "n_target must be at least 2, got {n_target}"
        )));
    }
    canvas.validate()?;

    let xs = series.xs();
    let ys = series.ys();
    let x0 = xs[0];
    let span = xs[xs.len() - 1] - x0;
    let scale = canvas.width / span;
    let mut stretched: Vec<f64> = xs.iter().map(|x| (x - x0) * scale).collect();
    // pin the end exactly so no target falls outside
    let last = stretched.len() - 1;
    stretched[0] = 0.0;
    stretched[last] = canvas.width;

    let targets = uniform_grid(n_target, canvas.width);
    let mut out = Vec::with_capacity(n_target);
    let mut seg = 0;
    for &t in &targets {
        while seg + 2 < stretched.len() && stretched[seg + 1] < t {
            seg += 1;
        }
        let (xa, xb) = (stretched[seg], stretched[seg + 1]);
        let w = ((t - xa) / (xb - xa)).clamp(0.0, 1.0);
        out.push(ys[seg] + w * (ys[seg + 1] - ys[seg]));
    }

    center(&mut out);
    TimeSeries::new(targets, out)
}

/// Subtracts the mean; a second pass removes the rounding residue.
pub(crate) fn center(v: &mut [f64]) {
    for _ in 0..2 {
        let m = mean(v);
        v.iter_mut().for_each(|y| *y -= m);
    }
}
