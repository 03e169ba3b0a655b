//! Brute-force oracles shared by the integration tests. None of these call
//! the code paths they check.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topomap_core::{EdgeKey, MetricKind, PointCloud};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_cloud(rng: &mut ChaCha8Rng, n: usize, d: usize, metric: MetricKind) -> PointCloud {
    let coords: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
    PointCloud::new(coords, d, metric).unwrap()
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
