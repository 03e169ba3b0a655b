mod common;

use common::*;
use rand::Rng;
use topomap_core::geometry::{convex_hull, expand_hull, point_segment_distance, HullKind, Vec2};
use topomap_core::placement::{
    place_geometric, place_optimized, select_hull_edge, slide_to_exact, LiveComponent,
};
use topomap_core::{
    compute_emst, project, verify_projection, EdgeKey, MetricKind, OptimizedSettings,
    PlacementStrategy, PointCloud, RigidTransform,
};

fn cloud_1d(xs: &[f64]) -> PointCloud {
    let rows: Vec<[f64; 1]> = xs.iter().map(|&x| [x]).collect();
    PointCloud::from_rows(&rows, MetricKind::Euclidean).unwrap()
}

#[test]
fn one_dimensional_chain_keeps_gaps() {
    let cloud = cloud_1d(&[0.0, 1.0, 3.0]);
    let layout = project(&cloud, &compute_emst(&cloud), PlacementStrategy::OneDimensional).unwrap();
    assert!(layout.coords.iter().all(|p| p.y == 0.0));
    let mut xs: Vec<f64> = layout.coords.iter().map(|p| p.x).collect();
    xs.sort_by(f64::total_cmp);
    assert!((xs[1] - xs[0] - 1.0).abs() < 1e-12);
    assert!((xs[2] - xs[1] - 2.0).abs() < 1e-12);
    // the input order along the line is preserved up to reflection
    let c = &layout.coords;
    assert!((c[0].x - c[1].x).abs() < 1.0 + 1e-12 && (c[1].x - c[2].x).abs() > 2.0 - 1e-12);
}

#[test]
fn random_one_dimensional_layouts_stay_on_axis() {
    let mut r = rng(70);
    for _ in 0..20 {
        let n = r.random_range(2..60);
        let d = r.random_range(1..10);
        let cloud = random_cloud(&mut r, n, d, MetricKind::Euclidean);
        let layout = project(&cloud, &compute_emst(&cloud), PlacementStrategy::OneDimensional).unwrap();
        assert!(layout.coords.iter().all(|p| p.y == 0.0));
        assert!(verify_projection(&cloud, &layout.coords, 1e-9).unwrap().pd_equal);
    }
}

#[test]
fn staged_six_point_run_turns_perpendicular() {
    // Edge order: (0,1) 1.0, (3,4) 1.2, (1,2) 1.5, then the two groups and 5 join.
    let cloud = PointCloud::from_rows(
        &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.5], [10.0, 0.0], [11.2, 0.0], [20.0, 0.0]],
        MetricKind::Euclidean,
    )
    .unwrap();
    let mst = compute_emst(&cloud);
    let order: Vec<(usize, usize)> = mst.edges().iter().map(|e| (e.a, e.b)).collect();
    assert_eq!(&order[..3], &[(0, 1), (3, 4), (1, 2)]);
    let layout = project(&cloud, &mst, PlacementStrategy::Geometric).unwrap();
    let p = &layout.coords;
    assert!((p[0].distance(p[1]) - 1.0).abs() < 1e-12);
    assert!((p[3].distance(p[4]) - 1.2).abs() < 1e-12);
    // p2 sits straight out from one endpoint of the segment p0 p1
    let seg = p[1] - p[0];
    let perpendicular_at = |q: Vec2| {
        let off = p[2] - q;
        off.dot(seg).abs() < 1e-9 && (off.norm() - 1.5).abs() < 1e-9
    };
    assert!(perpendicular_at(p[0]) || perpendicular_at(p[1]));
    assert!(verify_projection(&cloud, p, 1e-9).unwrap().pd_equal);
}

fn random_component(r: &mut rand_chacha::ChaCha8Rng, first: usize, n: usize) -> LiveComponent {
    let scale = r.random_range(0.5..5.0);
    let pts = random_points2(r, n, scale);
    let tf = RigidTransform::new(r.random_range(0.0..6.3), Vec2::new(r.random_range(-9.0..9.0), 3.0));
    let coords = pts.into_iter().map(|p| tf.apply(p)).collect();
    LiveComponent::from_points((first..first + n).collect(), coords).unwrap()
}

#[test]
fn geometric_merges_hit_gap_exactly() {
    let mut r = rng(71);
    for _ in 0..300 {
        let (na, nb) = (r.random_range(1..25), r.random_range(1..25));
        let a = random_component(&mut r, 0, na);
        let b = random_component(&mut r, na, nb);
        let edge = EdgeKey::new(r.random_range(0..na), na + r.random_range(0..nb), r.random_range(0.01..20.0));
        let (ta, tb) = place_geometric(&a, &b, &edge, edge.length).unwrap();
        let (a2, b2) = (a.transformed(&ta), b.transformed(&tb));
        let gap = brute_min_distance(a2.coords(), b2.coords());
        assert!((gap - edge.length).abs() <= 1e-9 * edge.length.max(1.0), "gap {gap} vs {}", edge.length);
        // the union of the parents' hull vertices spans the merged point set
        let mut verts = a2.hull().vertices().to_vec();
        verts.extend_from_slice(b2.hull().vertices());
        let merged = convex_hull(&verts).unwrap();
        let mut all = a2.coords().to_vec();
        all.extend_from_slice(b2.coords());
        let scale = all.iter().map(|p| p.norm()).fold(1.0, f64::max);
        for p in &all {
            assert!(merged.distance_to(*p) <= 1e-12 * scale);
        }
    }
}

#[test]
fn select_hull_edge_matches_distance_scan() {
    let mut r = rng(72);
    for _ in 0..100 {
        let n = r.random_range(3..30);
        let comp = random_component(&mut r, 0, n);
        let hull = comp.hull();
        if hull.kind() != HullKind::Polygon {
            continue;
        }
        for anchor in 0..n {
            let p = comp.coords()[anchor];
            let got = select_hull_edge(&comp, anchor).unwrap();
            let m = hull.edge_count();
            if let Some(v) = hull.vertices().iter().position(|&q| q == p) {
                assert_eq!(got, v.min((v + m - 1) % m));
                continue;
            }
            let mut best = (f64::INFINITY, 0);
            for i in 0..m {
                let (s, e) = hull.edge(i);
                let dist = point_segment_distance(p, s, e);
                if dist < best.0 {
                    best = (dist, i);
                }
            }
            assert_eq!(got, best.1);
        }
    }
}

#[test]
fn optimized_singleton_matches_grid_search() {
    let square = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)];
    let mut pts = square.to_vec();
    pts.push(Vec2::new(0.5, 0.5));
    pts.push(Vec2::new(0.8, 0.3));
    let fixed = LiveComponent::from_points((0..pts.len()).collect(), pts.clone()).unwrap();
    let ex_cache = |d: f64| expand_hull(fixed.hull(), d).unwrap();
    for (target, d) in [(0, 0.5), (2, 0.25), (4, 0.3), (5, 0.7)] {
        let moving = LiveComponent::singleton(99, Vec2::new(7.0, -3.0));
        let edge = EdgeKey::new(target, 99, d);
        let out = place_optimized(&fixed, &moving, &edge, d, &OptimizedSettings::default()).unwrap();
        let placed = out.transform.apply(Vec2::new(7.0, -3.0));
        let p = pts[target];
        let ex = ex_cache(d);
        // A singleton at gap exactly d lies on a radius-d circle around some
        // fixed point, outside the grown hull and no closer to any other point.
        let objective = |t: Vec2| (t - p).norm_sq();
        let mut best = f64::INFINITY;
        for v in fixed.coords() {
            for s in 0..200_000 {
                let phi = s as f64 * std::f64::consts::TAU / 200_000.0;
                let t = *v + Vec2::new(phi.cos(), phi.sin()) * d;
                let clear = ex.rows.iter().any(|row| row.normal.dot(t) >= row.offset - 1e-6);
                if clear && brute_min_distance(fixed.coords(), &[t]) >= d - 1e-12 {
                    best = best.min(objective(t));
                }
            }
        }
        let best = (best, ());
        assert!((out.diagnostics.final_objective - best.0).abs() < 1e-3, "{} vs {}", out.diagnostics.final_objective, best.0);
        assert!((objective(placed) - out.diagnostics.final_objective).abs() < 1e-9);
        let gap = brute_min_distance(fixed.coords(), &[placed]);
        assert!((gap - d).abs() < 1e-6);
    }
}

#[test]
fn known_optimum_is_a_fixed_point() {
    let square = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)];
    let fixed = LiveComponent::from_points((0..4).collect(), square.to_vec()).unwrap();
    let d = 0.5;
    let edge = EdgeKey::new(0, 9, d);
    let at_optimum = LiveComponent::singleton(9, Vec2::new(0.0, -d));
    let out = place_optimized(&fixed, &at_optimum, &edge, d, &OptimizedSettings::default()).unwrap();
    assert!((out.diagnostics.final_objective - d * d).abs() <= 1e-8);
    assert!(out.transform.apply(Vec2::new(0.0, -d)).distance(Vec2::new(0.0, -d)) <= 1e-6
        || (out.transform.apply(Vec2::new(0.0, -d)).norm() - d).abs() <= 1e-9);
}

fn objective_of(fixed: &LiveComponent, moving: &LiveComponent, edge: &EdgeKey, tf: &RigidTransform) -> f64 {
    let anchor = if fixed.contains(edge.a) { edge.a } else { edge.b };
    let p = fixed.position_of(anchor).unwrap();
    moving.coords().iter().map(|&q| (p - tf.apply(q)).norm_sq()).sum()
}

#[test]
fn optimized_never_worse_than_geometric() {
    let mut r = rng(73);
    let settings = OptimizedSettings::default();
    for _ in 0..60 {
        let (na, nb) = (r.random_range(1..15), r.random_range(1..15));
        let (na, nb) = (na.max(nb), na.min(nb));
        let fixed = random_component(&mut r, 0, na);
        let moving = random_component(&mut r, na, nb);
        let edge = EdgeKey::new(r.random_range(0..na), na + r.random_range(0..nb), r.random_range(0.05..4.0));
        let out = place_optimized(&fixed, &moving, &edge, edge.length, &settings).unwrap();
        let got = objective_of(&fixed, &moving, &edge, &out.transform);
        assert!((got - out.diagnostics.final_objective).abs() <= 1e-9 * got.max(1.0));

        let (ta, tb) = place_geometric(&fixed, &moving, &edge, edge.length).unwrap();
        let relative = ta.inverse().compose(&tb);
        let geometric = objective_of(&fixed, &moving, &edge, &relative);
        assert!(got <= geometric * (1.0 + 1e-9) + 1e-12, "{got} > {geometric}");

        let placed = moving.transformed(&out.transform);
        let gap = brute_min_distance(fixed.coords(), placed.coords());
        assert!((gap - edge.length).abs() <= 1e-6 * edge.length.max(1.0));

        // a valid placement is never traded for a worse one
        let again = place_optimized(&fixed, &placed, &edge, edge.length, &settings).unwrap();
        assert!(again.diagnostics.final_objective <= got);
    }
}

#[test]
fn slide_restores_gap_from_random_feasible_start() {
    let mut r = rng(74);
    for _ in 0..200 {
        let (na, nb) = (r.random_range(3..20), r.random_range(1..12));
        let fixed = random_component(&mut r, 0, na);
        if fixed.hull().kind() == HullKind::Point {
            continue;
        }
        let moving = random_component(&mut r, na, nb);
        let d = r.random_range(0.05..3.0);
        let ex = expand_hull(fixed.hull(), d).unwrap();
        let row = ex.rows[r.random_range(0..ex.rows.len())];
        // lift the moving set so it clears the row by a random margin
        let lowest = moving.coords().iter().map(|&q| row.normal.dot(q)).fold(f64::INFINITY, f64::min);
        let lift = row.normal * (row.offset - lowest + r.random_range(0.0..2.0))
            + row.tangent() * r.random_range(-5.0..5.0);
        let start = moving.transformed(&RigidTransform::translation(lift));
        let tf = slide_to_exact(&fixed, &start, &row, d).unwrap();
        let done = start.transformed(&tf);
        let gap = brute_min_distance(fixed.coords(), done.coords());
        assert!((gap - d).abs() <= 1e-6 * d.max(1.0), "gap {gap} vs {d}");
        let low = done.coords().iter().map(|&q| row.normal.dot(q)).fold(f64::INFINITY, f64::min);
        assert!(low >= row.offset - 1e-9 * row.offset.abs().max(1.0));
    }
}

#[test]
fn all_strategies_preserve_lengths_and_partitions() {
    let mut r = rng(75);
    for trial in 0..60 {
        let n = r.random_range(2..80);
        let d = r.random_range(1..30);
        let metric = if trial % 2 == 0 { MetricKind::Euclidean } else { MetricKind::Angular };
        let cloud = random_cloud(&mut r, n, d, metric);
        let mst = compute_emst(&cloud);
        for (strategy, tol) in [
            (PlacementStrategy::OneDimensional, 1e-9),
            (PlacementStrategy::Geometric, 1e-9),
            (PlacementStrategy::Optimized(OptimizedSettings::default()), 1e-6),
        ] {
            if matches!(strategy, PlacementStrategy::Optimized(_)) && n > 40 {
                continue;
            }
            let layout = project(&cloud, &mst, strategy).unwrap();
            assert_eq!(layout.merge_log.len(), n - 1);
            assert!(layout.coords.iter().all(|p| p.is_finite()));
            let report = verify_projection(&cloud, &layout.coords, tol).unwrap();
            assert!(report.pd_equal, "trial {trial} {strategy:?}: {report:?}");
            assert!(report.edge_length_max_abs_error <= tol * mst.lengths().fold(1.0, f64::max));
        }
    }
}

#[test]
fn geometric_layout_is_bit_deterministic() {
    let mut r = rng(76);
    let cloud = random_cloud(&mut r, 150, 6, MetricKind::Euclidean);
    let run = || {
        let mst = compute_emst(&cloud);
        project(&cloud, &mst, PlacementStrategy::Geometric).unwrap().coords
    };
    let (a, b) = (run(), run());
    let bits = |v: &[Vec2]| v.iter().flat_map(|p| [p.x.to_bits(), p.y.to_bits()]).collect::<Vec<_>>();
    assert_eq!(bits(&a), bits(&b));
}

#[test]
fn lattice_clouds_with_ties_stay_exact() {
    let mut r = rng(77);
    for _ in 0..40 {
        let n = r.random_range(2..90);
        let d = r.random_range(1..5);
        let rows: Vec<Vec<f64>> =
            (0..n).map(|_| (0..d).map(|_| r.random_range(-3i32..=3) as f64).collect()).collect();
        let cloud = PointCloud::from_rows(&rows, MetricKind::Euclidean).unwrap();
        let mst = compute_emst(&cloud);
        for strategy in [PlacementStrategy::Geometric, PlacementStrategy::OneDimensional] {
            let layout = project(&cloud, &mst, strategy).unwrap();
            assert!(verify_projection(&cloud, &layout.coords, 1e-9).unwrap().pd_equal);
        }
        if n <= 40 {
            let layout = project(&cloud, &mst, PlacementStrategy::Optimized(OptimizedSettings::default())).unwrap();
            assert!(verify_projection(&cloud, &layout.coords, 1e-6).unwrap().pd_equal);
        }
    }
}

#[test]
fn geometric_stress_on_mixed_scales() {
    let mut r = rng(78);
    for trial in 0..150 {
        let n = r.random_range(2..120);
        let d = r.random_range(1..50);
        let metric = if trial % 3 == 0 { MetricKind::Angular } else { MetricKind::Euclidean };
        let scale = 10f64.powi(r.random_range(-3..4));
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| scale * r.random_range(-1.0..1.0)).collect())
            .collect();
        let cloud = PointCloud::from_rows(&rows, metric).unwrap();
        let mst = compute_emst(&cloud);
        let layout = project(&cloud, &mst, PlacementStrategy::Geometric).unwrap();
        let report = verify_projection(&cloud, &layout.coords, 1e-9).unwrap();
        assert!(report.pd_equal, "trial {trial}: {report:?}");
    }
}
