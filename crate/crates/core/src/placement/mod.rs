//! The projection engine: replays the sorted spanning tree, merging two
//! planar components per edge so that their closest pair sits exactly at the
//! edge's length.

mod geometric;
mod one_d;
mod optimized;

use alloc::vec::Vec;

use crate::cloud::{EdgeKey, PointCloud};
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, min_distance_between, Hull2D, RigidTransform, Vec2};
use crate::mst::SortedMst;
use crate::union_find::UnionFind;

pub use geometric::{place_geometric, place_geometric_aligned, select_hull_edge, Alignment};
pub use one_d::place_1d;
pub use optimized::{
    place_optimized, slide_to_exact, OptimizedDiagnostics, OptimizedPlacement, Winner,
};

/// Absolute gap tolerance for the exact strategies, scaled by `max(1, d)`.
pub const EXACT_GAP_TOLERANCE: f64 = 1e-9;

/// Settings of the per-hull-edge rigid-motion search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizedSettings {
    /// Uniform rotation samples over `[0, 2pi)`.
    pub theta_samples: usize,
    /// Number of the best local minima of the sample grid that get refined
    /// and slid, per row.
    pub refine_starts: usize,
    /// Golden-section iterations around each refined sample.
    pub refine_iterations: usize,
    /// Bracket width at which refinement stops.
    pub refine_tolerance: f64,
    /// Allowed deviation of the final gap from the edge length, scaled by
    /// `max(1, d)`. A larger deviation triggers the geometric fallback.
    pub gap_tolerance: f64,
    /// Objective weight of the merging edge's endpoint in the moving
    /// component. 1 means unweighted.
    pub endpoint_weight: f64,
}

impl Default for OptimizedSettings {
    fn default() -> Self {
        Self {
            theta_samples: 64,
            refine_starts: 4,
            refine_iterations: 30,
            refine_tolerance: 1e-8,
            gap_tolerance: 1e-6,
            endpoint_weight: 1.0,
        }
    }
}

impl OptimizedSettings {
    pub fn validate(&self) -> Result<()> {
        if self.theta_samples == 0 {
            return Err(Error::InvalidParameter("theta_samples must be positive"));
        }
        if self.refine_starts == 0 {
            return Err(Error::InvalidParameter("refine_starts must be positive"));
        }
        if !(self.refine_tolerance > 0.0) {
            return Err(Error::InvalidParameter("refine_tolerance must be positive"));
        }
        if !(self.gap_tolerance > 0.0) {
            return Err(Error::InvalidParameter("gap_tolerance must be positive"));
        }
        if !(self.endpoint_weight > 0.0) || !self.endpoint_weight.is_finite() {
            return Err(Error::InvalidParameter("endpoint_weight must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PlacementStrategy {
    /// Everything on the x-axis.
    OneDimensional,
    /// Hull-edge alignment with rotations.
    #[default]
    Geometric,
    /// Compactness-driven rigid motion, corrected by a slide.
    Optimized(OptimizedSettings),
}

impl PlacementStrategy {
    pub fn gap_tolerance(&self) -> f64 {
        match self {
            PlacementStrategy::Optimized(s) => s.gap_tolerance,
            _ => EXACT_GAP_TOLERANCE,
        }
    }
}

/// A connected component of the partially built layout.
#[derive(Debug, Clone, PartialEq)]
pub struct LiveComponent {
    members: Vec<usize>,
    coords: Vec<Vec2>,
    hull: Hull2D,
}

impl LiveComponent {
    pub fn singleton(index: usize, at: Vec2) -> Self {
        Self::from_points(alloc::vec![index], alloc::vec![at])
            .expect("a single point always has a hull")
    }

    /// `members[i]` sits at `coords[i]`.
    pub fn from_points(members: Vec<usize>, coords: Vec<Vec2>) -> Result<Self> {
        if members.len() != coords.len() {
            return Err(Error::SizeMismatch { expected: members.len(), got: coords.len() });
        }
        let hull = convex_hull(&coords)?;
        Ok(Self { members, coords, hull })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn coords(&self) -> &[Vec2] {
        &self.coords
    }

    pub fn hull(&self) -> &Hull2D {
        &self.hull
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, point: usize) -> bool {
        self.members.contains(&point)
    }

    pub fn position_of(&self, point: usize) -> Option<Vec2> {
        self.members.iter().position(|&m| m == point).map(|i| self.coords[i])
    }

    pub fn transformed(&self, tf: &RigidTransform) -> LiveComponent {
        let mut out = self.clone();
        out.apply(tf);
        out
    }

    fn apply(&mut self, tf: &RigidTransform) {
        if tf.is_identity() {
            return;
        }
        for c in &mut self.coords {
            *c = tf.apply(*c);
        }
        self.hull = self.hull.transformed(tf);
    }

    /// Union of two placed components. The hull is rebuilt from the two
    /// parent hulls' vertices only.
    fn merge(mut self, mut other: LiveComponent) -> Result<LiveComponent> {
        let mut verts: Vec<Vec2> = self.hull.vertices().to_vec();
        verts.extend_from_slice(other.hull.vertices());
        let hull = convex_hull(&verts)?;
        if self.members.len() < other.members.len() {
            core::mem::swap(&mut self, &mut other);
        }
        self.members.append(&mut other.members);
        self.coords.append(&mut other.coords);
        self.hull = hull;
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MergeRecord {
    pub edge: EdgeKey,
    /// Size of the component containing `edge.a`.
    pub size_a: usize,
    pub size_b: usize,
    pub transform_a: RigidTransform,
    pub transform_b: RigidTransform,
    /// Closest-pair distance between the two components after placement.
    pub achieved_gap: f64,
    /// The optimized strategy gave up and used the geometric placement.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layout2D {
    pub coords: Vec<Vec2>,
    pub merge_log: Vec<MergeRecord>,
    pub strategy: PlacementStrategy,
}

impl Layout2D {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn fallback_count(&self) -> usize {
        self.merge_log.iter().filter(|m| m.fallback).count()
    }

    /// Layout as a 2-column Euclidean point cloud.
    pub fn to_cloud(&self) -> Result<PointCloud> {
        coords_to_cloud(&self.coords)
    }
}

pub fn coords_to_cloud(coords: &[Vec2]) -> Result<PointCloud> {
    let flat: Vec<f64> = coords.iter().flat_map(|p| [p.x, p.y]).collect();
    PointCloud::new(flat, 2, crate::cloud::MetricKind::Euclidean)
}

/// Projects `cloud` to the plane so that its 0-dimensional persistence is
/// preserved. Every merge is checked against its edge length; a violation
/// aborts with [`Error::GapViolation`].
pub fn project(cloud: &PointCloud, mst: &SortedMst, strategy: PlacementStrategy) -> Result<Layout2D> {
    let n = cloud.len();
    if mst.point_count() != n {
        return Err(Error::SizeMismatch { expected: n, got: mst.point_count() });
    }
    if let PlacementStrategy::Optimized(settings) = &strategy {
        settings.validate()?;
    }
    let mut uf = UnionFind::new(n);
    let mut slots: Vec<Option<LiveComponent>> =
        (0..n).map(|i| Some(LiveComponent::singleton(i, Vec2::ZERO))).collect();
    let mut merge_log = Vec::with_capacity(n.saturating_sub(1));

    for edge in mst.edges() {
        let (ra, rb) = (uf.find(edge.a), uf.find(edge.b));
        if ra == rb {
            // a structurally validated tree never closes a cycle
            return Err(Error::Cycle { a: edge.a, b: edge.b });
        }
        let comp_a = slots[ra].take().expect("live root");
        let comp_b = slots[rb].take().expect("live root");
        let d = edge.length;
        let (tf_a, tf_b, fallback) = match &strategy {
            PlacementStrategy::OneDimensional => {
                let (ta, tb) = place_1d(&comp_a, &comp_b, d);
                (ta, tb, false)
            }
            PlacementStrategy::Geometric => {
                let (ta, tb) = place_geometric(&comp_a, &comp_b, edge, d)?;
                (ta, tb, false)
            }
            PlacementStrategy::Optimized(settings) => {
                optimized_merge(&comp_a, &comp_b, edge, d, settings)?
            }
        };
        let (size_a, size_b) = (comp_a.len(), comp_b.len());
        let placed_a = comp_a.transformed(&tf_a);
        let placed_b = comp_b.transformed(&tf_b);
        let (achieved_gap, _) = min_distance_between(placed_a.coords(), placed_b.coords())?;
        let tol = strategy.gap_tolerance() * d.max(1.0);
        if !((achieved_gap - d).abs() <= tol) {
            return Err(Error::GapViolation { a: edge.a, b: edge.b, expected: d, achieved: achieved_gap });
        }
        merge_log.push(MergeRecord {
            edge: *edge,
            size_a,
            size_b,
            transform_a: tf_a,
            transform_b: tf_b,
            achieved_gap,
            fallback,
        });
        let root = uf.union(edge.a, edge.b).expect("distinct roots");
        slots[root] = Some(placed_a.merge(placed_b)?);
    }

    let mut coords = alloc::vec![Vec2::ZERO; n];
    for comp in slots.into_iter().flatten() {
        for (&m, &c) in comp.members.iter().zip(&comp.coords) {
            coords[m] = c;
        }
    }
    Ok(Layout2D { coords, merge_log, strategy })
}

/// Keeps the larger component fixed and moves the other one. Falls back to
/// the geometric placement whenever the optimizer cannot certify the gap.
fn optimized_merge(
    comp_a: &LiveComponent,
    comp_b: &LiveComponent,
    edge: &EdgeKey,
    d: f64,
    settings: &OptimizedSettings,
) -> Result<(RigidTransform, RigidTransform, bool)> {
    let geometric = |fallback: bool| -> Result<(RigidTransform, RigidTransform, bool)> {
        let (ta, tb) = place_geometric(comp_a, comp_b, edge, d)?;
        Ok((ta, tb, fallback))
    };
    // zero-length edges just stack duplicates; nothing to optimize
    if d <= 0.0 {
        return geometric(false);
    }
    let a_fixed = comp_a.len() >= comp_b.len();
    let (fixed, moving) = if a_fixed { (comp_a, comp_b) } else { (comp_b, comp_a) };
    match place_optimized(fixed, moving, edge, d, settings) {
        Ok(placement) if !placement.diagnostics.fallback => {
            let tf = placement.transform;
            if a_fixed {
                Ok((RigidTransform::IDENTITY, tf, false))
            } else {
                Ok((tf, RigidTransform::IDENTITY, false))
            }
        }
        Ok(_) | Err(_) => {
            log::warn!(
                "optimized placement of edge ({}, {}) fell back to the geometric strategy",
                edge.a,
                edge.b
            );
            geometric(true)
        }
    }
}
