//! 0-dimensional sublevel-set persistence of a sampled curve.
//!
//! Vertices enter the filtration in `(value, index)` order, so ties are
//! broken by position and every local minimum is unambiguous. Each minimum
//! opens a component; when two components meet at a vertex the younger one
//! (later birth in the total order) dies there. The surviving component is
//! closed by the global maximum, giving exactly one essential pair.

use serde::{Deserialize, Serialize};

use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersistencePair {
    pub birth: f64,
    pub death: f64,
}

impl PersistencePair {
    pub fn new(birth: f64, death: f64) -> Self {
        Self { birth, death }
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

/// Multiset of birth/death pairs, kept sorted by `(birth, death)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pairs: Vec<PersistencePair>,
}

impl PersistenceDiagram {
    pub fn from_pairs(mut pairs: Vec<PersistencePair>) -> Self {
        pairs.sort_by(|a, b| a.birth.total_cmp(&b.birth).then(a.death.total_cmp(&b.death)));
        Self { pairs }
    }

    pub fn pairs(&self) -> &[PersistencePair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn total_persistence(&self) -> f64 {
        self.pairs.iter().map(PersistencePair::persistence).sum()
    }

    /// The pair with the largest persistence (the global extent).
    pub fn essential(&self) -> Option<PersistencePair> {
        self.pairs
            .iter()
            .copied()
            .max_by(|a, b| a.persistence().total_cmp(&b.persistence()))
    }

    /// Largest persistence among the pairs other than the essential one.
    pub fn max_finite_persistence(&self) -> f64 {
        let mut p: Vec<f64> = self.pairs.iter().map(PersistencePair::persistence).collect();
        p.sort_by(|a, b| b.total_cmp(a));
        p.get(1).copied().unwrap_or(0.0)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }
}

/// Sublevel-set persistence diagram of the ordinates.
pub fn persistence_diagram(series: &TimeSeries) -> PersistenceDiagram {
    diagram_of(series.ys())
}

pub(crate) fn diagram_of(ys: &[f64]) -> PersistenceDiagram {
    let n = ys.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| ys[a].total_cmp(&ys[b]).then(a.cmp(&b)));
    // rank[v] = position of v in the filtration; a root's birth vertex is
    // the lowest-ranked vertex of its component
    let mut rank = vec![0usize; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }

    let mut uf = UnionFind::new(n);
    let mut birth = vec![usize::MAX; n];
    let mut active = vec![false; n];
    let mut pairs = Vec::new();

    for &v in &order {
        active[v] = true;
        birth[v] = v;
        let neighbors = [v.checked_sub(1), (v + 1 < n).then_some(v + 1)];
        for u in neighbors.into_iter().flatten() {
            if !active[u] {
                continue;
            }
            let ru = uf.find(u);
            let rv = uf.find(v);
            if ru == rv {
                continue;
            }
            let (elder, younger) = if rank[birth[ru]] < rank[birth[rv]] {
                (ru, rv)
            } else {
                (rv, ru)
            };
            // v itself is not a minimum when it just joins a component
            if birth[younger] != v {
                pairs.push(PersistencePair::new(ys[birth[younger]], ys[v]));
            }
            uf.parent[younger] = elder;
        }
    }

    let lo = order[0];
    let hi = order[n - 1];
    pairs.push(PersistencePair::new(ys[lo], ys[hi]));
    PersistenceDiagram::from_pairs(pairs)
}
