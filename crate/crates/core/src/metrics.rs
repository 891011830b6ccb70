//! Pairwise preservation metrics between a stimulus and a sketch.

use serde::{Deserialize, Serialize};

use crate::error::{Result, StenoError};
use crate::features::FeatureProfile;
use crate::noise::NoiseLevel;
use crate::periodicity::PeriodicComponent;
use crate::persistence::{PersistenceDiagram, PersistencePair};
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
    LInf,
}

pub fn lp_norm(a: &TimeSeries, b: &TimeSeries, p: Norm) -> Result<f64> {
    a.check_aligned(b)?;
    let diffs = a.ys().iter().zip(b.ys()).map(|(x, y)| (x - y).abs());
    Ok(match p {
        Norm::L1 => diffs.sum(),
        Norm::L2 => diffs.map(|d| d * d).sum::<f64>().sqrt(),
        Norm::LInf => diffs.fold(0.0, f64::max),
    })
}

/// Unconstrained DTW over `|a_i − b_j|` with steps right, down and diagonal.
pub fn dtw_distance(a: &TimeSeries, b: &TimeSeries) -> f64 {
    dtw_cost(a.ys(), b.ys())
}

/// DTW on raw slices; `O(len(b))` memory.
pub fn dtw_cost(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return if a.len() == b.len() { 0.0 } else { f64::INFINITY };
    }
    let m = b.len();
    let mut prev = vec![f64::INFINITY; m];
    let mut cur = vec![0.0; m];
    for (i, &ai) in a.iter().enumerate() {
        for j in 0..m {
            let cost = (ai - b[j]).abs();
            let best = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => cur[j - 1],
                (_, 0) => prev[0],
                _ => prev[j].min(cur[j - 1]).min(prev[j - 1]),
            };
            cur[j] = cost + best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m - 1]
}

fn linf(a: &PersistencePair, b: &PersistencePair) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

fn half_persistence(p: &PersistencePair) -> f64 {
    (p.death - p.birth) / 2.0
}

/// Bottleneck distance `W∞` between two diagrams.
///
/// Unmatched points pay their distance to the diagonal, `(death − birth)/2`.
/// The answer is found by binary search over candidate radii. At radius `r`
/// a point is "big" when it cannot go to the diagonal; a matching of radius
/// `r` exists iff every big point of either diagram can be matched into the
/// other diagram (Mendelsohn–Dulmage), which is checked with two
/// Hopcroft–Karp runs.
pub fn bottleneck_distance(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> f64 {
    let a = d1.pairs();
    let b = d2.pairs();
    let by_birth_a = sorted_by_birth(a);
    let by_birth_b = sorted_by_birth(b);

    let mut candidates: Vec<f64> = a.iter().chain(b).map(half_persistence).collect();
    candidates.push(0.0);
    // only edges touching a point that cannot use the diagonal matter
    for (p, others, others_sorted) in a
        .iter()
        .map(|p| (p, b, &by_birth_b))
        .chain(b.iter().map(|p| (p, a, &by_birth_a)))
    {
        let reach = half_persistence(p);
        for &j in within_birth(others, others_sorted, p.birth, reach) {
            let d = linf(p, &others[j]);
            if d < reach {
                candidates.push(d);
            }
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let upper = candidates.last().copied().unwrap_or(0.0);
    let feasible = |r: f64| {
        covers_big(a, b, &by_birth_b, r) && covers_big(b, a, &by_birth_a, r)
    };
    // feasible(upper) always holds: nothing is big there
    let (mut lo, mut hi) = (0usize, candidates.partition_point(|&c| c < upper));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates.get(lo).copied().unwrap_or(0.0)
}

fn sorted_by_birth(p: &[PersistencePair]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..p.len()).collect();
    idx.sort_by(|&i, &j| p[i].birth.total_cmp(&p[j].birth));
    idx
}

/// Indices (into `pts`) whose birth lies in `[birth - r, birth + r]`, padded
/// by a few ulps. Callers filter by exact distance afterwards; without the
/// pad `birth + r` can round below a neighbor whose distance is exactly `r`.
fn within_birth<'a>(pts: &[PersistencePair], sorted: &'a [usize], birth: f64, r: f64) -> &'a [usize] {
    let pad = r + 1e-12 * (birth.abs() + r + 1.0);
    let start = sorted.partition_point(|&i| pts[i].birth < birth - pad);
    let end = sorted.partition_point(|&i| pts[i].birth <= birth + pad);
    &sorted[start..end.max(start)]
}

/// Can every point of `left` that is too persistent for the diagonal at
/// radius `r` be matched into `right` within `r`?
fn covers_big(left: &[PersistencePair], right: &[PersistencePair], right_sorted: &[usize], r: f64) -> bool {
    let big: Vec<&PersistencePair> = left.iter().filter(|p| half_persistence(p) > r).collect();
    if big.len() > right.len() {
        return false;
    }
    let adj: Vec<Vec<usize>> = big
        .iter()
        .map(|p| {
            within_birth(right, right_sorted, p.birth, r)
                .iter()
                .copied()
                .filter(|&j| linf(p, &right[j]) <= r)
                .collect()
        })
        .collect();
    if adj.iter().any(Vec::is_empty) {
        return false;
    }
    max_matching(&adj, right.len()) == big.len()
}

/// Hopcroft–Karp maximum bipartite matching size.
fn max_matching(adj: &[Vec<usize>], n_right: usize) -> usize {
    const FREE: usize = usize::MAX;
    let n_left = adj.len();
    let mut match_l = vec![FREE; n_left];
    let mut match_r = vec![FREE; n_right];
    let mut dist = vec![0u32; n_left];
    let mut size = 0;

    loop {
        // layered BFS from free left vertices
        let mut queue: Vec<usize> = Vec::with_capacity(n_left);
        for u in 0..n_left {
            if match_l[u] == FREE {
                dist[u] = 0;
                queue.push(u);
            } else {
                dist[u] = u32::MAX;
            }
        }
        let mut found = false;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for &v in &adj[u] {
                let w = match_r[v];
                if w == FREE {
                    found = true;
                } else if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push(w);
                }
            }
        }
        if !found {
            return size;
        }
        let mut next_edge = vec![0usize; n_left];
        for u in 0..n_left {
            if match_l[u] == FREE && augment(u, adj, &mut match_l, &mut match_r, &mut dist, &mut next_edge) {
                size += 1;
            }
        }
    }
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [u32],
    next_edge: &mut [usize],
) -> bool {
    while next_edge[u] < adj[u].len() {
        let v = adj[u][next_edge[u]];
        next_edge[u] += 1;
        let w = match_r[v];
        let ok = w == usize::MAX
            || (dist[w] == dist[u] + 1 && augment(w, adj, match_l, match_r, dist, next_edge));
        if ok {
            match_l[u] = v;
            match_r[v] = u;
            return true;
        }
    }
    dist[u] = u32::MAX;
    false
}

/// `δA = |A1 − A2|`, `δT = |T1 − T2|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodDelta {
    pub amplitude: f64,
    pub period: usize,
}

/// `None` when either side has no periodic component.
pub fn amplitude_period_delta(
    p1: Option<&PeriodicComponent>,
    p2: Option<&PeriodicComponent>,
) -> Option<PeriodDelta> {
    let (p1, p2) = (p1?, p2?);
    Some(PeriodDelta {
        amplitude: (p1.amplitude - p2.amplitude).abs(),
        period: p1.period_count.abs_diff(p2.period_count),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AreaMode {
    /// `|Σ|n1_i| − Σ|n2_i||`: area covered by the noise bars.
    #[default]
    Absolute,
    /// `|Σn1_i − Σn2_i|` on signed values.
    Signed,
}

pub fn area_delta(n1: &TimeSeries, n2: &TimeSeries, mode: AreaMode) -> Result<f64> {
    if n1.len() != n2.len() {
        return Err(StenoError::Alignment(format!(
            "noise estimates have {} and {} samples",
            n1.len(),
            n2.len()
        )));
    }
    let sum = |s: &TimeSeries| -> f64 {
        match mode {
            AreaMode::Absolute => s.ys().iter().map(|v| v.abs()).sum(),
            AreaMode::Signed => s.ys().iter().sum(),
        }
    };
    Ok((sum(n1) - sum(n2)).abs())
}

/// Least-squares line of error against noise-level index (0 = none … 4 = max).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RegressionOutcome {
    /// `100·(fit(max) − fit(none)) / fit(none)`.
    PercentChange { percent: f64, slope: f64, intercept: f64 },
    /// The fitted error at no noise is zero.
    UndefinedBaseline { slope: f64, intercept: f64 },
}

impl RegressionOutcome {
    pub fn percent(&self) -> Option<f64> {
        match self {
            RegressionOutcome::PercentChange { percent, .. } => Some(*percent),
            RegressionOutcome::UndefinedBaseline { .. } => None,
        }
    }
}

pub fn error_noise_regression(points: &[(NoiseLevel, f64)]) -> Result<RegressionOutcome> {
    let mut levels: Vec<usize> = points.iter().map(|(l, _)| l.index()).collect();
    levels.sort_unstable();
    levels.dedup();
    if levels.len() < 2 {
        return Err(StenoError::Parameter(format!(
            "regression needs at least 2 distinct noise levels, got {}",
            levels.len()
        )));
    }
    if let Some((_, e)) = points.iter().find(|(_, e)| !e.is_finite()) {
        return Err(StenoError::Parameter(format!("non-finite error value {e}")));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|(l, _)| l.index() as f64).sum::<f64>() / n;
    let my = points.iter().map(|(_, e)| e).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (l, e) in points {
        let dx = l.index() as f64 - mx;
        sxy += dx * (e - my);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let scale = points.iter().fold(0.0_f64, |acc, (_, e)| acc.max(e.abs()));
    if intercept.abs() <= 1e-12 * scale || intercept == 0.0 {
        return Ok(RegressionOutcome::UndefinedBaseline { slope, intercept });
    }
    let at_max = intercept + slope * NoiseLevel::Max.index() as f64;
    Ok(RegressionOutcome::PercentChange {
        percent: 100.0 * (at_max - intercept) / intercept,
        slope,
        intercept,
    })
}

/// Feature magnitudes of the stimulus, used to normalize errors for grading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StimulusScales {
    /// L2 norm of the centered stimulus.
    pub chart_l2: f64,
    pub amplitude: Option<f64>,
    pub period_count: Option<usize>,
    /// Persistence of the most prominent non-essential pair (falls back to
    /// the essential pair when there is none).
    pub prominence: f64,
    /// `Σ|n_i|` of the stimulus noise estimate.
    pub noise_area: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreservationMetrics {
    pub trend_l2_fft: f64,
    pub trend_l2_loess: f64,
    pub trend_l1: f64,
    pub trend_linf: f64,
    pub trend_dtw: f64,
    /// Absent when either side has no periodic component.
    pub delta_amplitude: Option<f64>,
    pub delta_period: Option<usize>,
    pub sketch_periodic: bool,
    pub bottleneck: f64,
    pub delta_area: f64,
    pub delta_area_signed: f64,
    pub pae_stimulus: f64,
    pub pae_sketch: f64,
    pub scales: StimulusScales,
}

impl PreservationMetrics {
    /// Both profiles must come from series resampled onto the same grid.
    /// L1, L∞ and DTW are taken on the FFT trends.
    pub fn compute(
        stimulus_series: &TimeSeries,
        stimulus: &FeatureProfile,
        sketch: &FeatureProfile,
    ) -> Result<Self> {
        let delta = amplitude_period_delta(stimulus.periodic.as_ref(), sketch.periodic.as_ref());
        let prominence = match stimulus.extrema.max_finite_persistence() {
            p if p > 0.0 => p,
            _ => stimulus.extrema.essential().map_or(0.0, |e| e.persistence()),
        };
        let chart_l2 = stimulus_series.ys().iter().map(|y| y * y).sum::<f64>().sqrt();
        Ok(Self {
            trend_l2_fft: lp_norm(&stimulus.trend_fft, &sketch.trend_fft, Norm::L2)?,
            trend_l2_loess: lp_norm(&stimulus.trend_loess, &sketch.trend_loess, Norm::L2)?,
            trend_l1: lp_norm(&stimulus.trend_fft, &sketch.trend_fft, Norm::L1)?,
            trend_linf: lp_norm(&stimulus.trend_fft, &sketch.trend_fft, Norm::LInf)?,
            trend_dtw: dtw_distance(&stimulus.trend_fft, &sketch.trend_fft),
            delta_amplitude: delta.map(|d| d.amplitude),
            delta_period: delta.map(|d| d.period),
            sketch_periodic: sketch.periodic.is_some(),
            bottleneck: bottleneck_distance(&stimulus.extrema, &sketch.extrema),
            delta_area: area_delta(&stimulus.noise, &sketch.noise, AreaMode::Absolute)?,
            delta_area_signed: area_delta(&stimulus.noise, &sketch.noise, AreaMode::Signed)?,
            pae_stimulus: stimulus.pae,
            pae_sketch: sketch.pae,
            scales: StimulusScales {
                chart_l2,
                amplitude: stimulus.periodic.as_ref().map(|p| p.amplitude),
                period_count: stimulus.periodic.as_ref().map(|p| p.period_count),
                prominence,
                noise_area: stimulus.noise.ys().iter().map(|v| v.abs()).sum(),
            },
        })
    }
}
