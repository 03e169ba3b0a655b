use super::LiveComponent;
use crate::geometry::{RigidTransform, Vec2};

/// Translates `a` so its rightmost point lands on `(-d/2, 0)` and `b` so its
/// leftmost point lands on `(d/2, 0)`. If every point starts on the x-axis
/// the two components end up exactly `d` apart.
pub fn place_1d(a: &LiveComponent, b: &LiveComponent, d: f64) -> (RigidTransform, RigidTransform) {
    let rightmost = a
        .coords()
        .iter()
        .copied()
        .reduce(|p, q| if q.x > p.x { q } else { p })
        .unwrap_or(Vec2::ZERO);
    let leftmost = b
        .coords()
        .iter()
        .copied()
        .reduce(|p, q| if q.x < p.x { q } else { p })
        .unwrap_or(Vec2::ZERO);
    let half = d * 0.5;
    (
        RigidTransform::translation(Vec2::new(-half, 0.0) - rightmost),
        RigidTransform::translation(Vec2::new(half, 0.0) - leftmost),
    )
}
