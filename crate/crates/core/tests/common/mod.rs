//! Brute-force oracles shared by the integration tests. None of these call
//! the code paths they check.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topomap_core::{EdgeKey, MetricKind, PointCloud, Vec2};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_cloud(rng: &mut ChaCha8Rng, n: usize, d: usize, metric: MetricKind) -> PointCloud {
    let coords: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
    PointCloud::new(coords, d, metric).unwrap()
}

pub fn random_points2(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<Vec2> {
    (0..n)
        .map(|_| Vec2::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale)))
        .collect()
}

/// Simple disjoint sets without rank or compression.
pub struct NaiveSets(Vec<usize>);

impl NaiveSets {
    pub fn new(n: usize) -> Self {
        Self((0..n).collect())
    }
    pub fn find(&self, mut x: usize) -> usize {
        while self.0[x] != x {
            x = self.0[x];
        }
        x
    }
    pub fn join(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// All `n(n-1)/2` edges sorted by length, then endpoints.
pub fn all_edges_sorted(cloud: &PointCloud) -> Vec<EdgeKey> {
    let n = cloud.len();
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push(EdgeKey::new(i, j, cloud.distance(i, j).unwrap()));
        }
    }
    edges.sort_by(|x, y| {
        x.length.partial_cmp(&y.length).unwrap().then((x.a, x.b).cmp(&(y.a, y.b)))
    });
    edges
}

pub fn brute_kruskal(cloud: &PointCloud) -> Vec<EdgeKey> {
    let mut sets = NaiveSets::new(cloud.len());
    all_edges_sorted(cloud).into_iter().filter(|e| sets.join(e.a, e.b)).collect()
}

/// Canonical partition: members sorted, blocks sorted by smallest member.
pub fn canonical(blocks: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = blocks
        .into_iter()
        .map(|mut b| {
            b.sort();
            b
        })
        .collect();
    blocks.sort();
    blocks
}

pub fn blocks_from_labels(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut map = std::collections::BTreeMap::<usize, Vec<usize>>::new();
    for (i, &l) in labels.iter().enumerate() {
        map.entry(l).or_default().push(i);
    }
    canonical(map.into_values().collect())
}

/// Agglomerative single-linkage clustering by repeated exhaustive search for
/// the closest pair of clusters. Entry `i` is the partition after `i` merges.
pub fn single_linkage_history(cloud: &PointCloud) -> Vec<Vec<Vec<usize>>> {
    let n = cloud.len();
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut history = vec![canonical(clusters.clone())];
    while clusters.len() > 1 {
        let mut best = (f64::INFINITY, 0, 0);
        for x in 0..clusters.len() {
            for y in x + 1..clusters.len() {
                let mut link = f64::INFINITY;
                for &p in &clusters[x] {
                    for &q in &clusters[y] {
                        link = link.min(cloud.distance(p, q).unwrap());
                    }
                }
                if link < best.0 {
                    best = (link, x, y);
                }
            }
        }
        let merged = clusters.remove(best.2);
        clusters[best.1].extend(merged);
        history.push(canonical(clusters.clone()));
    }
    history
}

fn orient(o: Vec2, a: Vec2, b: Vec2) -> f64 {
    (a - o).cross(b - o)
}

/// Definitional hull vertices: `p` is a vertex iff it lies outside every
/// triangle of other points and strictly outside every segment between two
/// others it is collinear with. Returned sorted.
pub fn brute_hull_vertices(points: &[Vec2]) -> Vec<(f64, f64)> {
    let n = points.len();
    let inside_triangle = |p: Vec2, a: Vec2, b: Vec2, c: Vec2| {
        let (d1, d2, d3) = (orient(a, b, p), orient(b, c, p), orient(c, a, p));
        let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
        let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
        !(neg && pos)
    };
    let on_segment = |p: Vec2, a: Vec2, b: Vec2| {
        orient(a, b, p).abs() < 1e-12 && (p - a).dot(p - b) <= 0.0
    };
    let mut out = Vec::new();
    for i in 0..n {
        let p = points[i];
        let mut hidden = false;
        'search: for a in 0..n {
            for b in 0..n {
                if a == i || b == i || a == b {
                    continue;
                }
                if on_segment(p, points[a], points[b]) {
                    hidden = true;
                    break 'search;
                }
                for c in 0..n {
                    if c == i || c == a || c == b {
                        continue;
                    }
                    if orient(points[a], points[b], points[c]).abs() > 1e-12
                        && inside_triangle(p, points[a], points[b], points[c])
                    {
                        hidden = true;
                        break 'search;
                    }
                }
            }
        }
        if !hidden {
            out.push((p.x, p.y));
        }
    }
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out.dedup();
    out
}

pub fn brute_min_distance(a: &[Vec2], b: &[Vec2]) -> f64 {
    let mut best = f64::INFINITY;
    for p in a {
        for q in b {
            best = best.min(((p.x - q.x).powi(2) + (p.y - q.y).powi(2)).sqrt());
        }
    }
    best
}

/// Euclidean MST lengths of planar points by exhaustive Kruskal.
pub fn planar_tree_lengths(points: &[Vec2]) -> Vec<f64> {
    let flat: Vec<f64> = points.iter().flat_map(|p| [p.x, p.y]).collect();
    let cloud = PointCloud::new(flat, 2, MetricKind::Euclidean).unwrap();
    brute_kruskal(&cloud).into_iter().map(|e| e.length).collect()
}
