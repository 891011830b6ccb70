//! Independent reference implementations used to check the fast paths.
#![allow(dead_code)]

use steno_core::persistence::PersistencePair;

/// DTW by enumerating every monotone path from (0,0) to (n-1,m-1).
pub fn dtw_by_enumeration(a: &[f64], b: &[f64]) -> f64 {
    fn walk(a: &[f64], b: &[f64], i: usize, j: usize, acc: f64, best: &mut f64) {
        let acc = acc + (a[i] - b[j]).abs();
        if i + 1 == a.len() && j + 1 == b.len() {
            *best = best.min(acc);
            return;
        }
        if i + 1 < a.len() {
            walk(a, b, i + 1, j, acc, best);
        }
        if j + 1 < b.len() {
            walk(a, b, i, j + 1, acc, best);
        }
        if i + 1 < a.len() && j + 1 < b.len() {
            walk(a, b, i + 1, j + 1, acc, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(a, b, 0, 0, 0.0, &mut best);
    best
}

/// Sublevel persistence pairs from first principles, O(N²).
///
/// Under the strict `(value, index)` order, each local minimum dies at the
/// lowest "pass" over which it can reach a vertex below it; the global
/// minimum never does and is paired with the global maximum.
pub fn persistence_by_scan(ys: &[f64]) -> Vec<(f64, f64)> {
    let n = ys.len();
    let below = |a: usize, b: usize| (ys[a], a) < (ys[b], b);
    let mut pairs = Vec::new();
    for v in 0..n {
        let left_ok = v == 0 || below(v, v - 1);
        let right_ok = v + 1 == n || below(v, v + 1);
        if !(left_ok && right_ok) {
            continue;
        }
        let mut pass: Option<usize> = None;
        for dir in [-1i64, 1] {
            let mut top = v;
            let mut k = v as i64 + dir;
            while k >= 0 && (k as usize) < n {
                let u = k as usize;
                if below(u, v) {
                    if pass.is_none_or(|p| below(top, p)) {
                        pass = Some(top);
                    }
                    break;
                }
                if below(top, u) {
                    top = u;
                }
                k += dir;
            }
        }
        match pass {
            Some(p) => pairs.push((ys[v], ys[p])),
            None => {
                let hi = (0..n).max_by(|&a, &b| if below(a, b) { std::cmp::Ordering::Less } else { std::cmp::Ordering::Greater }).unwrap();
                pairs.push((ys[v], ys[hi]));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pairs
}

/// Bottleneck distance by trying every partial injection of `a` into `b`.
pub fn bottleneck_by_enumeration(a: &[PersistencePair], b: &[PersistencePair]) -> f64 {
    fn diag(p: &PersistencePair) -> f64 {
        (p.death - p.birth) / 2.0
    }
    fn dist(p: &PersistencePair, q: &PersistencePair) -> f64 {
        (p.birth - q.birth).abs().max((p.death - q.death).abs())
    }
    fn go(a: &[PersistencePair], b: &[PersistencePair], i: usize, used: &mut Vec<bool>, cost: f64, best: &mut f64) {
        if cost >= *best {
            // still exhaustive: a branch can only get worse
            return;
        }
        if i == a.len() {
            let rest = b
                .iter()
                .zip(used.iter())
                .filter(|(_, u)| !**u)
                .map(|(q, _)| diag(q))
                .fold(0.0, f64::max);
            *best = best.min(cost.max(rest));
            return;
        }
        go(a, b, i + 1, used, cost.max(diag(&a[i])), best);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                go(a, b, i + 1, used, cost.max(dist(&a[i], &b[j])), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(a, b, 0, &mut vec![false; b.len()], 0.0, &mut best);
    best
}

/// LOESS value at every abscissa by a direct normal-equations solve over
/// the `ceil(span·n)` nearest points (found by sorting distances).
pub fn loess_by_normal_equations(xs: &[f64], ys: &[f64], span: f64) -> Vec<f64> {
    let n = xs.len();
    let q = ((span * n as f64).ceil() as usize).min(n);
    (0..n)
        .map(|i| {
            let x0 = xs[i];
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&a, &b| (xs[a] - x0).abs().total_cmp(&(xs[b] - x0).abs()));
            idx.truncate(q);
            let dmax = idx.iter().map(|&j| (xs[j] - x0).abs()).fold(0.0, f64::max);
            // [Σw Σwx; Σwx Σwx²] β = [Σwy; Σwxy]
            let (mut s0, mut s1, mut s2, mut t0, mut t1) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for &j in &idx {
                let d = (xs[j] - x0).abs() / dmax;
                let w = if d >= 1.0 { 0.0 } else { (1.0 - d.powi(3)).powi(3) };
                s0 += w;
                s1 += w * xs[j];
                s2 += w * xs[j] * xs[j];
                t0 += w * ys[j];
                t1 += w * xs[j] * ys[j];
            }
            let det = s0 * s2 - s1 * s1;
            let b0 = (t0 * s2 - s1 * t1) / det;
            let b1 = (s0 * t1 - s1 * t0) / det;
            b0 + b1 * x0
        })
        .collect()
}

pub fn strictly_increasing(v: &[f64]) -> bool {
    let mut it = v.iter();
    let Some(mut prev) = it.next() else { return true };
    for x in it {
        if x <= prev {
            return false;
        }
        prev = x;
    }
    true
}
