//! Canvas mapping and SVG output: axis-free stimulus charts and
//! error-vs-noise scatter plots.

use std::fmt::Write;

use crate::error::Result;
use crate::noise::NoiseLevel;
use crate::series::TimeSeries;
use crate::stroke::CanvasSpec;

/// Vertical padding, as a fraction of the canvas height, left above and
/// below the rendered line.
pub const RENDER_MARGIN: f64 = 0.05;

/// Maps a data series onto the canvas the way it is drawn: x spans the full
/// width, y is scaled by the series' own min/max into the padded height.
/// Returned ordinates point up (0 = canvas bottom).
pub fn to_canvas(series: &TimeSeries, canvas: &CanvasSpec) -> Result<TimeSeries> {
    canvas.validate()?;
    let xs = series.xs();
    let (x0, x1) = (xs[0], xs[xs.len() - 1]);
    let (lo, hi) = series.min_max();
    let band = canvas.height * (1.0 - 2.0 * RENDER_MARGIN);
    let base = canvas.height * RENDER_MARGIN;
    let px_x: Vec<f64> = xs
        .iter()
        .map(|x| ((x - x0) / (x1 - x0) * canvas.width).clamp(0.0, canvas.width))
        .collect();
    let px_y = series
        .ys()
        .iter()
        .map(|y| {
            if hi > lo {
                base + (y - lo) / (hi - lo) * band
            } else {
                canvas.height / 2.0
            }
        })
        .collect();
    TimeSeries::new(px_x, px_y)
}

fn polyline_points(series: &TimeSeries, height: f64) -> String {
    let mut pts = String::with_capacity(series.len() * 14);
    for (x, y) in series.xs().iter().zip(series.ys()) {
        let _ = write!(pts, "{:.2},{:.2} ", x, height - y);
    }
    pts.pop();
    pts
}

/// Bare line chart (no axes, ticks or gridlines) of a canvas-space series.
pub fn stimulus_svg(series_px: &TimeSeries, canvas: &CanvasSpec) -> String {
    format!(
        concat!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            r#"<rect width="100%" height="100%" fill="white"/>"#,
            r##"<polyline fill="none" stroke="#4c78a8" stroke-width="2" stroke-linejoin="round" points="{p}"/>"##,
            "</svg>\n"
        ),
        w = canvas.width,
        h = canvas.height,
        p = polyline_points(series_px, canvas.height)
    )
}

/// Error-vs-noise scatter with an optional fitted line `error = slope·level + intercept`.
pub fn regression_plot_svg(title: &str, points: &[(NoiseLevel, f64)], fit: Option<(f64, f64)>) -> String {
    const W: f64 = 480.0;
    const H: f64 = 320.0;
    const L: f64 = 60.0;
    const R: f64 = 20.0;
    const T: f64 = 40.0;
    const B: f64 = 50.0;

    let mut ymax = points.iter().map(|p| p.1).fold(0.0_f64, f64::max);
    if let Some((slope, intercept)) = fit {
        ymax = ymax.max(intercept).max(intercept + 4.0 * slope);
    }
    let ymin = points
        .iter()
        .map(|p| p.1)
        .chain(fit.map(|(s, i)| i.min(i + 4.0 * s)))
        .fold(0.0_f64, f64::min);
    let ymax = if ymax > ymin { ymax * 1.05 } else { ymin + 1.0 };
    let sx = |level: f64| L + level / 4.0 * (W - L - R);
    let sy = |v: f64| H - B - (v - ymin) / (ymax - ymin) * (H - T - B);

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = write!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = write!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let _ = write!(
        svg,
        r#"<line x1="{L}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/><line x1="{L}" y1="{T}" x2="{L}" y2="{y0}" stroke="black"/>"#,
        y0 = H - B,
        x1 = W - R
    );
    for level in NoiseLevel::ALL {
        let x = sx(level.index() as f64);
        let label = match level.target_snr_db() {
            Some(db) => format!("{db} dB"),
            None => "none".to_string(),
        };
        let _ = write!(
            svg,
            r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{label}</text>"#,
            H - B + 18.0
        );
    }
    for (v, anchor) in [(ymin, "min"), (ymax, "max")] {
        let _ = write!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end" data-bound="{anchor}">{}</text>"#,
            L - 6.0,
            sy(v) + 4.0,
            fmt_tick(v)
        );
    }
    for (level, v) in points {
        let _ = write!(
            svg,
            r##"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="#4c78a8" fill-opacity="0.7"/>"##,
            sx(level.index() as f64),
            sy(*v)
        );
    }
    if let Some((slope, intercept)) = fit {
        let _ = write!(
            svg,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#e45756" stroke-width="2"/>"##,
            sx(0.0),
            sy(intercept),
            sx(4.0),
            sy(intercept + 4.0 * slope)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn fmt_tick(v: f64) -> String {
    if v.abs() >= 1000.0 || (v != 0.0 && v.abs() < 0.01) {
        format!("{v:.2e}")
    } else {
        format!("{v:.2}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
