//! Planar primitives used by the placement engine.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Relative tolerance on normalized cross products when deciding collinearity.
pub const COLLINEAR_EPS: f64 = 1e-12;
/// Points closer than this in both coordinates are merged by the hull.
pub const DEDUP_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn distance(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// `x -> R(theta) x + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    theta: f64,
    cos: f64,
    sin: f64,
    t: Vec2,
}

impl Default for RigidTransform {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl RigidTransform {
    pub const IDENTITY: RigidTransform =
        RigidTransform { theta: 0.0, cos: 1.0, sin: 0.0, t: Vec2::ZERO };

    pub fn new(theta: f64, t: Vec2) -> Self {
        let (sin, cos) = libm::sincos(theta);
        Self { theta, cos, sin, t }
    }

    pub fn translation(t: Vec2) -> Self {
        Self { t, ..Self::IDENTITY }
    }

    /// Rotation about the origin taking the unit direction `from` onto `to`.
    /// Built from the vectors directly so axis-aligned results are exact.
    pub fn rotation_between(from: Vec2, to: Vec2) -> Self {
        let cos = from.dot(to);
        let sin = from.cross(to);
        let r = libm::hypot(cos, sin);
        let (cos, sin) = (cos / r, sin / r);
        Self { theta: libm::atan2(sin, cos), cos, sin, t: Vec2::ZERO }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn t(&self) -> Vec2 {
        self.t
    }

    pub fn rotate(&self, p: Vec2) -> Vec2 {
        Vec2::new(self.cos * p.x - self.sin * p.y, self.sin * p.x + self.cos * p.y)
    }

    pub fn apply(&self, p: Vec2) -> Vec2 {
        self.rotate(p) + self.t
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &RigidTransform) -> RigidTransform {
        let cos = self.cos * first.cos - self.sin * first.sin;
        let sin = self.sin * first.cos + self.cos * first.sin;
        RigidTransform { theta: libm::atan2(sin, cos), cos, sin, t: self.apply(first.t) }
    }

    pub fn then_translate(&self, offset: Vec2) -> RigidTransform {
        RigidTransform { t: self.t + offset, ..*self }
    }

    pub fn inverse(&self) -> RigidTransform {
        let inv = RigidTransform { theta: -self.theta, cos: self.cos, sin: -self.sin, t: Vec2::ZERO };
        RigidTransform { t: -inv.rotate(self.t), ..inv }
    }

    pub fn is_identity(&self) -> bool {
        self.cos == 1.0 && self.sin == 0.0 && self.t == Vec2::ZERO
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullKind {
    Point,
    Segment,
    Polygon,
}

/// Convex hull in counter-clockwise order, possibly degenerate.
#[derive(Debug, Clone, PartialEq)]
pub struct Hull2D {
    vertices: Vec<Vec2>,
}

impl Hull2D {
    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn kind(&self) -> HullKind {
        match self.vertices.len() {
            1 => HullKind::Point,
            2 => HullKind::Segment,
            _ => HullKind::Polygon,
        }
    }

    /// Number of directed edges: 0 for a point, 2 for a segment (one per
    /// direction), otherwise one per vertex.
    pub fn edge_count(&self) -> usize {
        match self.kind() {
            HullKind::Point => 0,
            HullKind::Segment => 2,
            HullKind::Polygon => self.vertices.len(),
        }
    }

    /// Directed edge `i` as `(start, end)`; the interior lies to its left.
    pub fn edge(&self, i: usize) -> (Vec2, Vec2) {
        let m = self.vertices.len();
        (self.vertices[i % m], self.vertices[(i + 1) % m])
    }

    pub fn transformed(&self, tf: &RigidTransform) -> Hull2D {
        Hull2D { vertices: self.vertices.iter().map(|&v| tf.apply(v)).collect() }
    }

    pub fn signed_area(&self) -> f64 {
        let m = self.vertices.len();
        (0..m).map(|i| self.vertices[i].cross(self.vertices[(i + 1) % m])).sum::<f64>() * 0.5
    }

    /// Euclidean distance from `p` to the closed hull region.
    pub fn distance_to(&self, p: Vec2) -> f64 {
        match self.kind() {
            HullKind::Point => p.distance(self.vertices[0]),
            HullKind::Segment => point_segment_distance(p, self.vertices[0], self.vertices[1]),
            HullKind::Polygon => {
                let m = self.vertices.len();
                let inside = (0..m).all(|i| {
                    let (a, b) = self.edge(i);
                    (b - a).cross(p - a) >= 0.0
                });
                if inside {
                    return 0.0;
                }
                (0..m)
                    .map(|i| {
                        let (a, b) = self.edge(i);
                        point_segment_distance(p, a, b)
                    })
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return p.distance(a);
    }
    let s = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.distance(a + ab * s)
}

/// Exact sign of the turn `o -> a -> b`: positive when counter-clockwise.
fn orient(o: Vec2, a: Vec2, b: Vec2) -> f64 {
    let c = |p: Vec2| robust::Coord { x: p.x, y: p.y };
    robust::orient2d(c(o), c(a), c(b))
}

/// `a` lies on the way from `o` to `b` up to a relative cross-product of
/// `COLLINEAR_EPS`, so dropping it moves the boundary by a negligible amount.
fn passes_through(o: Vec2, a: Vec2, b: Vec2) -> bool {
    let (u, v) = (a - o, b - a);
    u.dot(v) > 0.0 && libm::fabs(u.cross(v)) <= COLLINEAR_EPS * libm::sqrt(u.norm_sq() * v.norm_sq())
}

/// Andrew's monotone chain on exact orientations, followed by removal of
/// vertices that are collinear with their neighbours up to `COLLINEAR_EPS`.
/// A polygon result is counter-clockwise with every turn strictly left.
pub fn convex_hull(points: &[Vec2]) -> Result<Hull2D> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    pts.dedup_by(|q, p| (q.x - p.x).abs() <= DEDUP_EPS && (q.y - p.y).abs() <= DEDUP_EPS);
    if pts.len() <= 2 {
        return Ok(Hull2D { vertices: pts });
    }
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    Ok(Hull2D { vertices: drop_flat_vertices(hull) })
}

/// Cyclic pass over a convex polygon removing vertices that barely bend the
/// boundary. Only in-between vertices go, so the extremes survive even when
/// the whole polygon is a sliver.
fn drop_flat_vertices(poly: Vec<Vec2>) -> Vec<Vec2> {
    let mut out: Vec<Vec2> = Vec::with_capacity(poly.len());
    for p in poly {
        while out.len() >= 2 && passes_through(out[out.len() - 2], out[out.len() - 1], p) {
            out.pop();
        }
        out.push(p);
    }
    loop {
        let m = out.len();
        if m >= 3 && passes_through(out[m - 2], out[m - 1], out[0]) {
            out.pop();
        } else if m >= 3 && passes_through(out[m - 1], out[0], out[1]) {
            out.remove(0);
        } else {
            break;
        }
    }
    out
}

/// Rotation about the origin that makes hull edge `edge_index` horizontal
/// and the top edge (`make_top`) or the bottom edge of the hull.
pub fn rotate_edge_horizontal(
    hull: &Hull2D,
    edge_index: usize,
    make_top: bool,
) -> Result<RigidTransform> {
    if hull.kind() == HullKind::Point {
        return Err(Error::PointHull);
    }
    if edge_index >= hull.edge_count() {
        return Err(Error::IndexOutOfRange { index: edge_index, len: hull.edge_count() });
    }
    let (a, b) = hull.edge(edge_index);
    let dir = b - a;
    let dir = dir * (1.0 / dir.norm());
    // With the interior on the left, a top edge runs right to left.
    let target = if make_top { Vec2::new(-1.0, 0.0) } else { Vec2::new(1.0, 0.0) };
    Ok(RigidTransform::rotation_between(dir, target))
}

/// One offset constraint line: foreign points are allowed where
/// `normal . x >= offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    /// Unit outward normal of the source edge.
    pub normal: Vec2,
    pub offset: f64,
    /// Source hull edge endpoints.
    pub edge: (Vec2, Vec2),
}

impl HalfPlane {
    pub fn contains(&self, p: Vec2) -> bool {
        self.normal.dot(p) >= self.offset
    }

    pub fn tangent(&self) -> Vec2 {
        -self.normal.perp()
    }
}

/// A convex hull grown outward by `d` through parallel edge offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpandedHull {
    pub rows: Vec<HalfPlane>,
    pub source: Hull2D,
    pub d: f64,
}

impl ExpandedHull {
    /// `true` if `p` lies outside at least one offset line.
    pub fn allows(&self, p: Vec2) -> bool {
        self.rows.iter().any(|r| r.contains(p))
    }
}

pub fn expand_hull(hull: &Hull2D, d: f64) -> Result<ExpandedHull> {
    if !(d > 0.0) {
        return Err(Error::InvalidParameter("hull expansion distance must be positive"));
    }
    if hull.kind() == HullKind::Point {
        return Err(Error::PointHull);
    }
    let rows = (0..hull.edge_count())
        .map(|i| {
            let (a, b) = hull.edge(i);
            let dir = b - a;
            let normal = Vec2::new(dir.y, -dir.x) * (1.0 / dir.norm());
            HalfPlane { normal, offset: normal.dot(a) + d, edge: (a, b) }
        })
        .collect();
    Ok(ExpandedHull { rows, source: hull.clone(), d })
}

/// Closest pair between two point sets by exhaustive scan. Ties resolve to
/// the first pair in index order.
pub fn min_distance_between(a: &[Vec2], b: &[Vec2]) -> Result<(f64, (usize, usize))> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut best = (f64::INFINITY, (0, 0));
    for (i, &p) in a.iter().enumerate() {
        for (j, &q) in b.iter().enumerate() {
            let d2 = (p - q).norm_sq();
            if d2 < best.0 {
                best = (d2, (i, j));
            }
        }
    }
    Ok((libm::sqrt(best.0), best.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    fn unit_square() -> Hull2D {
        convex_hull(&[v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn square_hull_drops_center() {
        let h = convex_hull(&[v(0.0, 0.0), v(1.0, 1.0), v(0.5, 0.5), v(1.0, 0.0), v(0.0, 1.0)])
            .unwrap();
        assert_eq!(h.kind(), HullKind::Polygon);
        assert_eq!(h.vertices(), &[v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0)]);
        assert!(h.signed_area() > 0.0);
    }

    #[test]
    fn degenerate_hulls() {
        assert_eq!(convex_hull(&[]), Err(Error::EmptyInput));
        assert_eq!(convex_hull(&[v(1.0, 2.0), v(1.0, 2.0)]).unwrap().kind(), HullKind::Point);
        let seg = convex_hull(&[v(0.0, 0.0), v(2.0, 2.0), v(1.0, 1.0)]).unwrap();
        assert_eq!(seg.kind(), HullKind::Segment);
        assert_eq!(seg.vertices(), &[v(0.0, 0.0), v(2.0, 2.0)]);
    }

    #[test]
    fn collinear_edge_points_excluded() {
        let h = convex_hull(&[v(0.0, 0.0), v(1.0, 0.0), v(2.0, 0.0), v(1.0, 1.0)]).unwrap();
        assert_eq!(h.vertices().len(), 3);
    }

    #[test]
    fn bottom_edge_to_top_is_half_turn() {
        let sq = unit_square();
        // edge 0 runs (0,0) -> (1,0), the bottom side
        let tf = rotate_edge_horizontal(&sq, 0, true).unwrap();
        assert!((tf.theta().abs() - PI).abs() < 1e-15);
        assert_eq!(tf.t(), Vec2::ZERO);
        let rotated = sq.transformed(&tf);
        let (a, b) = rotated.edge(0);
        assert!((a.y - b.y).abs() < 1e-15);
        assert!(rotated.vertices().iter().all(|p| p.y <= a.y + 1e-15));
    }

    #[test]
    fn top_edge_is_already_top() {
        let sq = unit_square();
        // edge 2 runs (1,1) -> (0,1)
        let tf = rotate_edge_horizontal(&sq, 2, true).unwrap();
        assert_eq!(tf.theta(), 0.0);
        assert_eq!(tf.t(), Vec2::ZERO);
        assert!(tf.is_identity());
    }

    #[test]
    fn rotate_rejects_point_hull() {
        let p = convex_hull(&[v(3.0, 3.0)]).unwrap();
        assert_eq!(rotate_edge_horizontal(&p, 0, true), Err(Error::PointHull));
        assert!(matches!(
            rotate_edge_horizontal(&unit_square(), 4, true),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn expanded_square() {
        let ex = expand_hull(&unit_square(), 0.5).unwrap();
        assert_eq!(ex.rows.len(), 4);
        let top = ex.rows[2];
        assert_eq!(top.normal, v(0.0, 1.0));
        assert_eq!(top.offset, 1.5);
        assert_eq!(top.normal.dot(v(0.5, 1.5)), top.offset);
        assert!(ex.allows(v(0.5, 1.5)));
        assert!(!ex.allows(v(0.5, 1.4)));
    }

    #[test]
    fn expanded_segment() {
        let seg = convex_hull(&[v(0.0, 0.0), v(1.0, 0.0)]).unwrap();
        let ex = expand_hull(&seg, 1.0).unwrap();
        assert_eq!(ex.rows.len(), 2);
        assert_eq!(ex.rows[0].normal, v(0.0, -1.0));
        assert_eq!(ex.rows[0].offset, 1.0);
        assert_eq!(ex.rows[1].normal, v(0.0, 1.0));
        assert_eq!(ex.rows[1].offset, 1.0);
    }

    #[test]
    fn expand_rejects_bad_input() {
        assert!(matches!(expand_hull(&unit_square(), 0.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(expand_hull(&unit_square(), -1.0), Err(Error::InvalidParameter(_))));
        let p = convex_hull(&[v(0.0, 0.0)]).unwrap();
        assert_eq!(expand_hull(&p, 1.0), Err(Error::PointHull));
    }

    #[test]
    fn min_distance_examples() {
        assert_eq!(min_distance_between(&[v(0.0, 0.0)], &[v(3.0, 4.0)]).unwrap(), (5.0, (0, 0)));
        let s = vec![v(1.0, 2.0), v(-3.0, 0.5)];
        assert_eq!(min_distance_between(&s, &s).unwrap().0, 0.0);
        assert_eq!(min_distance_between(&s, &s).unwrap().1, (0, 0));
        assert_eq!(min_distance_between(&[], &s), Err(Error::EmptyInput));
    }

    #[test]
    fn transform_inverse_and_compose() {
        let tf = RigidTransform::new(0.7, v(1.5, -2.0));
        let p = v(0.3, 4.0);
        let back = tf.inverse().apply(tf.apply(p));
        assert!((back - p).norm() < 1e-12);
        let g = RigidTransform::new(-2.1, v(0.1, 0.2));
        let composed = g.compose(&tf).apply(p);
        assert!((composed - g.apply(tf.apply(p))).norm() < 1e-12);
    }

    #[test]
    fn point_to_polygon_distance() {
        let sq = unit_square();
        assert_eq!(sq.distance_to(v(0.5, 0.5)), 0.0);
        assert!((sq.distance_to(v(0.5, 3.0)) - 2.0).abs() < 1e-15);
        assert!((sq.distance_to(v(2.0, 2.0)) - 2f64.sqrt()).abs() < 1e-15);
    }
}
