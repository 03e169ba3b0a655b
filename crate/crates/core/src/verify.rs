//! Independent certification of a layout, and probing of foreign layouts.
//!
//! Nothing here calls into the placement engine: the layout's spanning tree
//! and its union-find replay are recomputed from raw coordinates.

use alloc::vec::Vec;

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::mst::{compute_emst, SortedMst};
use crate::persistence::{components_at, largest_components};
use crate::placement::coords_to_cloud;
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub tolerance: f64,
    pub edge_length_max_abs_error: f64,
    pub edge_length_max_rel_error: f64,
    /// Every sorted edge length matches within `tolerance * max(1, length)`.
    pub lengths_within_tolerance: bool,
    pub partitions_identical: bool,
    /// Number of applied edges at which the partitions first differ.
    pub first_divergent_k: Option<usize>,
    pub pd_equal: bool,
}

/// Checks that `coords` has the same 0-dimensional filtration as the tree
/// `reference`: equal sorted edge lengths and equal component partitions.
///
/// Partitions are compared at each distinct filtration value. Inside a run
/// of edges whose lengths agree within tolerance the order of insertion is
/// arbitrary, so only the partition at the end of the run is meaningful.
pub fn verify_against_mst(reference: &SortedMst, coords: &[Vec2], tol: f64) -> Result<VerificationReport> {
    let n = reference.point_count();
    if coords.len() != n {
        return Err(Error::SizeMismatch { expected: n, got: coords.len() });
    }
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter("tolerance must be non-negative"));
    }
    let layout_mst = compute_emst(&coords_to_cloud(coords)?);
    let (want, got) = (reference.edges(), layout_mst.edges());

    let mut max_abs = 0.0f64;
    let mut max_rel = 0.0f64;
    let mut lengths_ok = true;
    for (r, l) in want.iter().zip(got) {
        let err = (r.length - l.length).abs();
        max_abs = max_abs.max(err);
        let rel = if r.length > 0.0 { err / r.length } else if err == 0.0 { 0.0 } else { f64::INFINITY };
        max_rel = max_rel.max(rel);
        if !(err <= tol * r.length.max(1.0)) {
            lengths_ok = false;
        }
    }

    let mut uf = UnionFind::new(n);
    let mut first_divergent_k = None;
    let mut start = 0;
    while start < want.len() {
        let mut end = start + 1;
        while end < want.len()
            && want[end].length - want[end - 1].length <= tol * want[end].length.max(1.0)
        {
            end += 1;
        }
        for e in &want[start..end] {
            uf.union(e.a, e.b);
        }
        if got[start..end].iter().any(|e| !uf.connected(e.a, e.b)) {
            first_divergent_k = Some(end);
            break;
        }
        start = end;
    }
    let partitions_identical = first_divergent_k.is_none();

    Ok(VerificationReport {
        tolerance: tol,
        edge_length_max_abs_error: max_abs,
        edge_length_max_rel_error: max_rel,
        lengths_within_tolerance: lengths_ok,
        partitions_identical,
        first_divergent_k,
        pd_equal: lengths_ok && partitions_identical,
    })
}

/// Recomputes the input tree from `cloud` and defers to [`verify_against_mst`].
pub fn verify_projection(cloud: &PointCloud, coords: &[Vec2], tol: f64) -> Result<VerificationReport> {
    if coords.len() != cloud.len() {
        return Err(Error::SizeMismatch { expected: cloud.len(), got: coords.len() });
    }
    verify_against_mst(&compute_emst(cloud), coords, tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentScore {
    pub label: usize,
    pub size: usize,
    /// Filtration value at which the component stops existing in the input.
    pub death_scale: f64,
    /// `1 -` the largest contiguous fraction in the foreign layout.
    pub fragmentation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeAnnotation {
    /// Component label at the cutoff, `None` outside the largest components.
    pub labels: Vec<Option<usize>>,
    pub coords: Vec<Vec2>,
    /// Largest first.
    pub components: Vec<ComponentScore>,
}

/// Relative slack when cutting the foreign tree at a death scale, so a
/// layout that reproduces an edge up to rounding is not split by it.
const SCALE_SLACK: f64 = 1e-9;

/// Annotates a foreign 2-D layout with the `m` largest input components
/// after `k` topology-changing edges and scores how much the layout breaks
/// each of them apart.
///
/// A component counts as contiguous in the layout if its restricted
/// spanning tree there has no edge longer than the component's death scale.
pub fn probe_layout(cloud: &PointCloud, foreign: &[Vec2], k: usize, m: usize) -> Result<ProbeAnnotation> {
    let n = cloud.len();
    if foreign.len() != n {
        return Err(Error::SizeMismatch { expected: n, got: foreign.len() });
    }
    if m == 0 {
        return Err(Error::InvalidParameter("number of components must be at least 1"));
    }
    let mst = compute_emst(cloud);
    let partition = components_at(&mst, k)?;
    let top = largest_components(&partition, m);

    let mut slot = alloc::vec![usize::MAX; n];
    for (i, &label) in top.iter().enumerate() {
        slot[label] = i;
    }
    let labels: Vec<Option<usize>> = partition
        .labels
        .iter()
        .map(|&l| (slot[l] != usize::MAX).then_some(l))
        .collect();

    let cutoff = if k > 0 { mst.edges()[k - 1].length } else { 0.0 };
    let mut scales = alloc::vec![f64::NAN; top.len()];
    for e in &mst.edges()[k..] {
        for end in [e.a, e.b] {
            let s = slot[partition.labels[end]];
            if s != usize::MAX && scales[s].is_nan() {
                scales[s] = e.length;
            }
        }
    }

    let mut components = Vec::with_capacity(top.len());
    for (i, &label) in top.iter().enumerate() {
        let death_scale = if scales[i].is_nan() { cutoff } else { scales[i] };
        let members = partition.members(label);
        let pts: Vec<Vec2> = members.iter().map(|&p| foreign[p]).collect();
        let restricted = compute_emst(&coords_to_cloud(&pts)?);
        let limit = death_scale * (1.0 + SCALE_SLACK);
        let mut uf = UnionFind::new(pts.len());
        for e in restricted.edges().iter().filter(|e| e.length <= limit) {
            uf.union(e.a, e.b);
        }
        let largest = (0..pts.len()).map(|p| uf.set_size(p)).max().unwrap_or(0);
        components.push(ComponentScore {
            label,
            size: members.len(),
            death_scale,
            fragmentation: 1.0 - largest as f64 / members.len() as f64,
        });
    }

    Ok(ProbeAnnotation { labels, coords: foreign.to_vec(), components })
}
