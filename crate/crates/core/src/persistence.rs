//! 0-dimensional persistence and filtration cuts, read straight off the
//! sorted spanning tree.

use alloc::vec::Vec;

use crate::cloud::EdgeKey;
use crate::error::{Error, Result};
use crate::mst::SortedMst;
use crate::union_find::UnionFind;

/// A 0-cycle born at filtration value 0 and killed by a tree edge, or never
/// killed (`death == f64::INFINITY`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencePair {
    pub birth: f64,
    pub death: f64,
    /// Canonical index of the component that dies.
    pub creator: usize,
    pub destroyer_edge: Option<EdgeKey>,
}

impl PersistencePair {
    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceDiagram0 {
    pairs: Vec<PersistencePair>,
}

impl PersistenceDiagram0 {
    /// Finite pairs in filtration order, followed by the essential class.
    pub fn pairs(&self) -> &[PersistencePair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Finite death values, sorted ascending.
    pub fn finite_deaths(&self) -> Vec<f64> {
        let mut deaths: Vec<f64> =
            self.pairs.iter().filter(|p| !p.is_essential()).map(|p| p.death).collect();
        deaths.sort_by(f64::total_cmp);
        deaths
    }
}

/// Applies the tree edges in order. On each merge the component whose
/// smallest member index is larger dies; the other keeps its label.
pub fn diagram_from_mst(mst: &SortedMst) -> PersistenceDiagram0 {
    let n = mst.point_count();
    let mut uf = UnionFind::new(n);
    let mut pairs = Vec::with_capacity(n);
    for e in mst.edges() {
        let (ca, cb) = (uf.canonical(e.a), uf.canonical(e.b));
        uf.union(e.a, e.b);
        pairs.push(PersistencePair {
            birth: 0.0,
            death: e.length,
            creator: ca.max(cb),
            destroyer_edge: Some(*e),
        });
    }
    pairs.push(PersistencePair {
        birth: 0.0,
        death: f64::INFINITY,
        creator: 0,
        destroyer_edge: None,
    });
    PersistenceDiagram0 { pairs }
}

/// Component membership after the first `k` topology-changing edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    pub k: usize,
    /// Per point, the smallest index in its component.
    pub labels: Vec<usize>,
    pub component_count: usize,
}

impl ComponentPartition {
    /// `(label, size)` for every component, ordered by label.
    pub fn sizes(&self) -> Vec<(usize, usize)> {
        let mut counts = alloc::vec![0usize; self.labels.len()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts.into_iter().enumerate().filter(|&(_, c)| c > 0).collect()
    }

    pub fn members(&self, label: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&i| self.labels[i] == label).collect()
    }
}

pub fn components_at(mst: &SortedMst, k: usize) -> Result<ComponentPartition> {
    let max = mst.edges().len();
    if k > max {
        return Err(Error::CutoffOutOfRange { k, max });
    }
    let n = mst.point_count();
    let mut uf = UnionFind::new(n);
    for e in &mst.edges()[..k] {
        uf.union(e.a, e.b);
    }
    Ok(ComponentPartition { k, labels: uf.labels(), component_count: n - k })
}

/// Labels of the `m` largest components, largest first; equal sizes are
/// ordered by label.
pub fn largest_components(partition: &ComponentPartition, m: usize) -> Vec<usize> {
    let mut sizes = partition.sizes();
    sizes.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
    sizes.into_iter().take(m).map(|(label, _)| label).collect()
}
