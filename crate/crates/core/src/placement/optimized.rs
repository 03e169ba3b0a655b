//! Compactness-driven placement. The fixed component's hull is grown by `d`
//! through parallel edge offsets; for each offset line the moving component
//! gets the rigid motion minimizing its weighted squared distance to the
//! merging edge's endpoint while staying on the far side of the line. The
//! best candidate is then slid along its hull edge until the gap is exact.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use super::{place_geometric, LiveComponent, OptimizedSettings};
use crate::cloud::EdgeKey;
use crate::error::{Error, Result};
use crate::geometry::{expand_hull, min_distance_between, HalfPlane, HullKind, RigidTransform, Vec2};

/// Gap tolerance of [`slide_to_exact`], scaled by `max(1, d)`.
pub const SLIDE_TOLERANCE: f64 = 1e-6;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    /// Index into the expanded hull rows.
    Row(usize),
    /// The plain geometric placement beat every row.
    Geometric,
    /// The moving component was already validly placed.
    Current,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizedDiagnostics {
    /// Best solver objective of each row before the slide.
    pub row_objectives: Vec<f64>,
    /// Best objective of each row after the slide, `inf` where every slide
    /// failed.
    pub slid_objectives: Vec<f64>,
    pub geometric_objective: f64,
    pub winner: Winner,
    pub final_objective: f64,
    /// No candidate could be certified; the transform is the geometric one.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizedPlacement {
    /// Motion of the moving component; the fixed one stays put.
    pub transform: RigidTransform,
    pub diagnostics: OptimizedDiagnostics,
}

/// Weighted point set of the moving component, reduced to what the
/// per-row objective needs.
struct MovingSet<'a> {
    comp: &'a LiveComponent,
    weights: Vec<f64>,
    centroid: Vec2,
    spread: f64,
    total_weight: f64,
}

impl<'a> MovingSet<'a> {
    fn new(comp: &'a LiveComponent, endpoint: usize, endpoint_weight: f64) -> Self {
        let weights: Vec<f64> = comp
            .members()
            .iter()
            .map(|&m| if m == endpoint { endpoint_weight } else { 1.0 })
            .collect();
        let total_weight: f64 = weights.iter().sum();
        let sum = comp
            .coords()
            .iter()
            .zip(&weights)
            .fold(Vec2::ZERO, |acc, (&p, &w)| acc + p * w);
        let centroid = sum * (1.0 / total_weight);
        let spread = comp
            .coords()
            .iter()
            .zip(&weights)
            .map(|(&p, &w)| w * (p - centroid).norm_sq())
            .sum();
        Self { comp, weights, centroid, spread, total_weight }
    }

    /// `sum_p w_p |target - tf(p)|^2`, evaluated point by point.
    fn objective(&self, tf: &RigidTransform, target: Vec2) -> f64 {
        self.comp
            .coords()
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * (target - tf.apply(p)).norm_sq())
            .sum()
    }

    /// For a fixed rotation the best translation puts the weighted centroid
    /// on `target`, then projects onto the single half-plane constraint.
    fn solve_translation(&self, theta: f64, target: Vec2, row: &HalfPlane) -> (f64, RigidTransform) {
        let rot = RigidTransform::new(theta, Vec2::ZERO);
        let lowest = self
            .comp
            .hull()
            .vertices()
            .iter()
            .map(|&h| row.normal.dot(rot.rotate(h)))
            .fold(f64::INFINITY, f64::min);
        let free = target - rot.rotate(self.centroid);
        let violation = (row.offset - lowest - row.normal.dot(free)).max(0.0);
        let t = free + row.normal * violation;
        (self.spread + self.total_weight * violation * violation, RigidTransform::new(theta, t))
    }

    /// Grid over `[0, 2pi)`, then golden-section refinement around the
    /// best `refine_starts` local minima of the grid. Results come back in
    /// grid order; non-finite objectives are dropped.
    fn solve_row(
        &self,
        target: Vec2,
        row: &HalfPlane,
        settings: &OptimizedSettings,
    ) -> Vec<(f64, RigidTransform)> {
        let m = settings.theta_samples;
        let step = TAU / m as f64;
        let grid: Vec<(f64, RigidTransform)> =
            (0..m).map(|j| self.solve_translation(step * j as f64, target, row)).collect();
        let mut minima: Vec<usize> = (0..m)
            .filter(|&j| {
                let f = grid[j].0;
                f <= grid[(j + m - 1) % m].0 && f <= grid[(j + 1) % m].0
            })
            .collect();
        if minima.is_empty() {
            // only NaN objectives avoid every comparison
            return Vec::new();
        }
        minima.sort_by(|&x, &y| grid[x].0.total_cmp(&grid[y].0));
        minima.truncate(settings.refine_starts);
        minima.sort_unstable();
        minima
            .into_iter()
            .map(|j| self.refine(grid[j], step, target, row, settings))
            .filter(|c| c.0.is_finite())
            .collect()
    }

    fn refine(
        &self,
        start: (f64, RigidTransform),
        step: f64,
        target: Vec2,
        row: &HalfPlane,
        settings: &OptimizedSettings,
    ) -> (f64, RigidTransform) {
        let centre = start.1.theta();
        let (mut lo, mut hi) = (centre - step, centre + step);
        let mut x1 = hi - INV_PHI * (hi - lo);
        let mut x2 = lo + INV_PHI * (hi - lo);
        let mut f1 = self.solve_translation(x1, target, row);
        let mut f2 = self.solve_translation(x2, target, row);
        for _ in 0..settings.refine_iterations {
            if hi - lo < settings.refine_tolerance {
                break;
            }
            if f1.0 <= f2.0 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - INV_PHI * (hi - lo);
                f1 = self.solve_translation(x1, target, row);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + INV_PHI * (hi - lo);
                f2 = self.solve_translation(x2, target, row);
            }
        }
        let mut best = start;
        for cand in [f1, f2] {
            if cand.0 < best.0 {
                best = cand;
            }
        }
        best
    }
}

fn constraint_rows(fixed: &LiveComponent, target: Vec2, d: f64) -> Result<Vec<HalfPlane>> {
    if fixed.hull().kind() == HullKind::Point {
        // Only the relative angle between the row and the moving set matters
        // around a single point, so one row suffices.
        let normal = Vec2::new(0.0, 1.0);
        return Ok(alloc::vec![HalfPlane {
            normal,
            offset: normal.dot(target) + d,
            edge: (target, target),
        }]);
    }
    Ok(expand_hull(fixed.hull(), d)?.rows)
}

/// Translation of `moving` that puts its lowest hull vertex along
/// `row.normal` on the offset line and directly over an endpoint of the
/// row's source edge. Every point of `fixed` is at least `d` behind the line,
/// so the result has closest-pair distance exactly `d`.
pub fn slide_to_exact(
    fixed: &LiveComponent,
    moving: &LiveComponent,
    row: &HalfPlane,
    d: f64,
) -> Result<RigidTransform> {
    let tol = SLIDE_TOLERANCE * d.max(1.0);
    let verts = moving.hull().vertices();
    let heights: Vec<f64> = verts.iter().map(|&v| row.normal.dot(v)).collect();
    let lowest = heights.iter().copied().fold(f64::INFINITY, f64::min);

    let (gap, _) = min_distance_between(fixed.coords(), moving.coords())?;
    if lowest >= row.offset - 1e-12 * row.offset.abs().max(1.0) && (gap - d).abs() <= 1e-12 * d.max(1.0) {
        return Ok(RigidTransform::IDENTITY);
    }

    let tangent = row.tangent();
    let (s0, s1) = (tangent.dot(row.edge.0), tangent.dot(row.edge.1));
    let touch_eps = 1e-12 * lowest.abs().max(d).max(1.0);
    let mut shift = f64::INFINITY;
    for (v, _) in verts.iter().zip(&heights).filter(|(_, &h)| h - lowest <= touch_eps) {
        let along = tangent.dot(*v);
        for s in [s0 - along, s1 - along] {
            if s.abs() < shift.abs() {
                shift = s;
            }
        }
    }
    let offset = row.normal * (row.offset - lowest) + tangent * shift;
    let tf = RigidTransform::translation(offset);
    let moved = moving.transformed(&tf);
    let (gap, _) = min_distance_between(fixed.coords(), moved.coords())?;
    if (gap - d).abs() <= tol {
        Ok(tf)
    } else {
        Err(Error::GapViolation { a: 0, b: 0, expected: d, achieved: gap })
    }
}

/// Runs the per-row search for the merge of `edge`, keeping `fixed` in
/// place. Candidates are ranked by their objective after the slide, and the
/// geometric placement competes as one more candidate, so the result is
/// never less compact than the geometric one.
pub fn place_optimized(
    fixed: &LiveComponent,
    moving: &LiveComponent,
    edge: &EdgeKey,
    d: f64,
    settings: &OptimizedSettings,
) -> Result<OptimizedPlacement> {
    settings.validate()?;
    if !(d > 0.0) {
        return Err(Error::InvalidParameter("optimized placement needs a positive edge length"));
    }
    let (anchor_fixed, anchor_moving) =
        if fixed.contains(edge.a) { (edge.a, edge.b) } else { (edge.b, edge.a) };
    let target = fixed
        .position_of(anchor_fixed)
        .ok_or(Error::IndexOutOfRange { index: anchor_fixed, len: fixed.len() })?;
    let set = MovingSet::new(moving, anchor_moving, settings.endpoint_weight);
    let rows = constraint_rows(fixed, target, d)?;

    let mut row_objectives = Vec::with_capacity(rows.len());
    let mut slid_objectives = Vec::with_capacity(rows.len());
    let mut candidates: Vec<(f64, Winner, RigidTransform)> = Vec::with_capacity(rows.len() + 1);
    for (i, row) in rows.iter().enumerate() {
        let solutions = set.solve_row(target, row, settings);
        let pre = solutions.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
        row_objectives.push(pre);
        let mut best_slid = f64::INFINITY;
        for (_, tf) in solutions {
            if let Ok(slide) = slide_to_exact(fixed, &moving.transformed(&tf), row, d) {
                let total = slide.compose(&tf);
                let slid = set.objective(&total, target);
                best_slid = best_slid.min(slid);
                candidates.push((slid, Winner::Row(i), total));
            }
        }
        slid_objectives.push(best_slid);
    }

    let (ta, tb) = place_geometric(fixed, moving, edge, d)?;
    let geometric = ta.inverse().compose(&tb);
    let geometric_objective = set.objective(&geometric, target);
    candidates.push((geometric_objective, Winner::Geometric, geometric));
    // A moving set that already sits at the exact gap keeps its place unless
    // something strictly better turns up.
    candidates.push((set.objective(&RigidTransform::IDENTITY, target), Winner::Current, RigidTransform::IDENTITY));
    // stable: ties keep rows in index order, then geometric, then current
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0));

    let tol = settings.gap_tolerance * d.max(1.0);
    for (objective, winner, tf) in &candidates {
        let moved = moving.transformed(tf);
        let (gap, _) = min_distance_between(fixed.coords(), moved.coords())?;
        if (gap - d).abs() <= tol {
            return Ok(OptimizedPlacement {
                transform: *tf,
                diagnostics: OptimizedDiagnostics {
                    row_objectives,
                    slid_objectives,
                    geometric_objective,
                    winner: *winner,
                    final_objective: *objective,
                    fallback: false,
                },
            });
        }
    }
    Ok(OptimizedPlacement {
        transform: geometric,
        diagnostics: OptimizedDiagnostics {
            row_objectives,
            slid_objectives,
            geometric_objective,
            winner: Winner::Geometric,
            final_objective: geometric_objective,
            fallback: true,
        },
    })
}
