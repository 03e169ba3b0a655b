//! Exact minimum spanning tree of the complete metric graph.
//!
//! The tree edges, sorted by [`EdgeKey::order`], are exactly the
//! topology-changing edges of the 0-dimensional Rips filtration.

use alloc::vec::Vec;

use crate::cloud::{EdgeKey, PointCloud};
use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// The `n - 1` topology-changing edges in strictly increasing filtration order.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedMst {
    n: usize,
    edges: Vec<EdgeKey>,
    total_weight: f64,
}

impl SortedMst {
    pub fn point_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.edges.iter().map(|e| e.length)
    }

    fn from_sorted(n: usize, edges: Vec<EdgeKey>) -> Self {
        let total_weight = edges.iter().map(|e| e.length).sum();
        Self { n, edges, total_weight }
    }
}

#[derive(Clone, Copy)]
struct Candidate {
    vertex: usize,
    best: EdgeKey,
}

impl Candidate {
    #[inline]
    fn relax(&mut self, cloud: &PointCloud, from: usize) {
        let e = EdgeKey::new(from, self.vertex, cloud.distance_unchecked(from, self.vertex));
        if e.order(&self.best).is_lt() {
            self.best = e;
        }
    }
}

#[cfg(feature = "std")]
const PARALLEL_THRESHOLD: usize = 2048;

/// Relaxes every remaining candidate against `from` and returns the position
/// of the one with the smallest connecting edge.
fn relax_and_select(cloud: &PointCloud, remaining: &mut [Candidate], from: usize) -> usize {
    #[cfg(feature = "std")]
    if remaining.len() >= PARALLEL_THRESHOLD {
        use rayon::prelude::*;
        return remaining
            .par_iter_mut()
            .enumerate()
            .with_min_len(512)
            .map(|(pos, c)| {
                c.relax(cloud, from);
                (pos, c.best)
            })
            .reduce_with(|x, y| if y.1.order(&x.1).is_lt() { y } else { x })
            .map(|(pos, _)| pos)
            .unwrap_or(0);
    }
    let mut best_pos = 0;
    for pos in 0..remaining.len() {
        remaining[pos].relax(cloud, from);
        if remaining[pos].best.order(&remaining[best_pos].best).is_lt() {
            best_pos = pos;
        }
    }
    best_pos
}

/// Prim's algorithm over the implicit complete graph, `O(n^2 d)` time and
/// `O(n)` extra memory.
pub fn compute_emst(cloud: &PointCloud) -> SortedMst {
    let n = cloud.len();
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let unreached = EdgeKey { a: usize::MAX, b: usize::MAX, length: f64::INFINITY };
    let mut remaining: Vec<Candidate> =
        (1..n).map(|vertex| Candidate { vertex, best: unreached }).collect();
    let mut last = 0;
    while !remaining.is_empty() {
        let pos = relax_and_select(cloud, &mut remaining, last);
        let chosen = remaining.swap_remove(pos);
        edges.push(chosen.best);
        last = chosen.vertex;
    }
    edges.sort_by(|x, y| x.order(y));
    SortedMst::from_sorted(n, edges)
}

/// Validates an externally supplied spanning tree and sorts it.
pub fn mst_from_precomputed(n: usize, edges: &[EdgeKey]) -> Result<SortedMst> {
    if n == 0 {
        return Err(Error::EmptyCloud);
    }
    let mut uf = UnionFind::new(n);
    let mut sorted = Vec::with_capacity(edges.len());
    for e in edges {
        let e = EdgeKey::new(e.a, e.b, e.length);
        if e.b >= n {
            return Err(Error::IndexOutOfRange { index: e.b, len: n });
        }
        if e.a == e.b {
            return Err(Error::SelfLoop { a: e.a });
        }
        if !e.length.is_finite() || e.length < 0.0 {
            return Err(Error::InvalidLength { a: e.a, b: e.b, length: e.length });
        }
        if uf.union(e.a, e.b).is_none() {
            return Err(Error::Cycle { a: e.a, b: e.b });
        }
        sorted.push(e);
    }
    if uf.set_count() > 1 {
        let root0 = uf.find(0);
        let point = (0..n).find(|&x| uf.find(x) != root0).unwrap_or(0);
        return Err(Error::Disconnected { components: uf.set_count(), point });
    }
    sorted.sort_by(|x, y| x.order(y));
    Ok(SortedMst::from_sorted(n, sorted))
}
