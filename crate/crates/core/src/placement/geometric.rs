use super::LiveComponent;
use crate::cloud::EdgeKey;
use crate::error::{Error, Result};
use crate::geometry::{
    point_segment_distance, rotate_edge_horizontal, HullKind, RigidTransform, Vec2, DEDUP_EPS,
};

/// Which endpoint of the aligned hull edges is pinned to the vertical axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Alignment {
    #[default]
    Left,
    Right,
}

/// Hull edge used to align `comp` around the point `anchor`: an edge
/// incident to the anchor when the anchor is a hull vertex (the smaller
/// index of the two), otherwise the edge nearest to it.
pub fn select_hull_edge(comp: &LiveComponent, anchor: usize) -> Result<usize> {
    let hull = comp.hull();
    if hull.kind() == HullKind::Point {
        return Err(Error::PointHull);
    }
    let pos = comp
        .position_of(anchor)
        .ok_or(Error::IndexOutOfRange { index: anchor, len: comp.len() })?;
    let verts = hull.vertices();
    let m = verts.len();
    let same = |v: Vec2| (v.x - pos.x).abs() <= DEDUP_EPS && (v.y - pos.y).abs() <= DEDUP_EPS;
    if let Some(i) = verts.iter().position(|&v| same(v)) {
        return Ok(match hull.kind() {
            HullKind::Segment => 0,
            _ => i.min((i + m - 1) % m),
        });
    }
    let mut best = (f64::INFINITY, 0);
    for i in 0..hull.edge_count() {
        let (a, b) = hull.edge(i);
        let dist = point_segment_distance(pos, a, b);
        if dist < best.0 {
            best = (dist, i);
        }
    }
    Ok(best.1)
}

/// Transform putting `comp` on one side of a horizontal line through the
/// origin with the chosen alignment point at the origin.
fn align(comp: &LiveComponent, anchor: usize, make_top: bool, alignment: Alignment) -> Result<RigidTransform> {
    let hull = comp.hull();
    if hull.kind() == HullKind::Point {
        return Ok(RigidTransform::translation(-hull.vertices()[0]));
    }
    let edge = select_hull_edge(comp, anchor)?;
    let rot = rotate_edge_horizontal(hull, edge, make_top)?;
    let (p, q) = hull.edge(edge);
    let (p, q) = (rot.apply(p), rot.apply(q));
    let (left, right) = if p.x <= q.x { (p, q) } else { (q, p) };
    let pin = match alignment {
        Alignment::Left => left,
        Alignment::Right => right,
    };
    Ok(rot.then_translate(-pin))
}

/// Places `a` below the x-axis with a hull edge on top and `b` above
/// `y = d` with a hull edge at the bottom, both pinned at `x = 0`. The two
/// pinned vertices are exactly `d` apart and the half-planes keep every other
/// pair at least that far.
pub fn place_geometric(
    a: &LiveComponent,
    b: &LiveComponent,
    edge: &EdgeKey,
    d: f64,
) -> Result<(RigidTransform, RigidTransform)> {
    place_geometric_aligned(a, b, edge, d, Alignment::Left)
}

pub fn place_geometric_aligned(
    a: &LiveComponent,
    b: &LiveComponent,
    edge: &EdgeKey,
    d: f64,
    alignment: Alignment,
) -> Result<(RigidTransform, RigidTransform)> {
    let (anchor_a, anchor_b) = if a.contains(edge.a) { (edge.a, edge.b) } else { (edge.b, edge.a) };
    let ta = align(a, anchor_a, true, alignment)?;
    let tb = align(b, anchor_b, false, alignment)?.then_translate(Vec2::new(0.0, d));
    Ok((ta, tb))
}
