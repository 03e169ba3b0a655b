//! Seeded synthetic point clouds.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`) seeded through
//! `SeedableRng::seed_from_u64`. Uniform `f64` draws use the 53-bit
//! construction of `rand`, normals use Box-Muller on those uniforms, and all
//! transcendental functions come from `libm`, so a seed reproduces the same
//! bytes on every platform.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cloud::{MetricKind, PointCloud};
use crate::error::{Error, Result};
use crate::mst::compute_emst;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticKind {
    /// Isotropic Gaussian blobs in R^3 at the corners of a regular polygon.
    Gaussians,
    /// Noisy circles in R^3, each in its own coordinate plane.
    Rings,
    /// Uniform samples on concentric spheres in R^3 with radii r, 2r, ...
    ConcentricSpheres,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub kind: SyntheticKind,
    /// Points per cluster; the number of clusters is `counts.len()`.
    pub counts: Vec<usize>,
    /// Standard deviation (Gaussians) or base radius (Rings, spheres).
    pub scale: f64,
    /// Gaussians: center spacing in units of `scale`. Rings: center spacing
    /// in radii. Unused for spheres.
    pub separation: f64,
    /// Additive isotropic Gaussian noise on rings and spheres.
    pub noise: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn gaussians(seed: u64) -> Self {
        Self {
            kind: SyntheticKind::Gaussians,
            counts: alloc::vec![100, 100, 100],
            scale: 1.0,
            separation: 20.0,
            noise: 0.0,
            seed,
        }
    }

    pub fn rings(seed: u64) -> Self {
        Self {
            kind: SyntheticKind::Rings,
            counts: alloc::vec![100, 100, 100],
            scale: 1.0,
            separation: 3.0,
            noise: 0.01,
            seed,
        }
    }

    pub fn concentric_spheres(seed: u64) -> Self {
        Self {
            kind: SyntheticKind::ConcentricSpheres,
            counts: alloc::vec![250, 600],
            scale: 1.0,
            separation: 1.0,
            noise: 0.0,
            seed,
        }
    }

    pub fn default_for(kind: SyntheticKind, seed: u64) -> Self {
        match kind {
            SyntheticKind::Gaussians => Self::gaussians(seed),
            SyntheticKind::Rings => Self::rings(seed),
            SyntheticKind::ConcentricSpheres => Self::concentric_spheres(seed),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.counts.is_empty() || self.counts.contains(&0) {
            return Err(Error::InvalidParameter("every cluster needs at least one point"));
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(Error::InvalidParameter("scale must be positive"));
        }
        if !(self.separation > 0.0) || !self.separation.is_finite() {
            return Err(Error::InvalidParameter("separation must be positive"));
        }
        if !(self.noise >= 0.0) || !self.noise.is_finite() {
            return Err(Error::InvalidParameter("noise must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub cloud: PointCloud,
    /// Generating cluster of every point.
    pub labels: Vec<usize>,
}

impl SyntheticData {
    /// `(smallest distance between clusters, longest tree edge inside any
    /// cluster)`. Clusters are separable by a filtration cut when the first
    /// exceeds the second.
    pub fn cluster_separation(&self) -> (f64, f64) {
        let clusters = self.labels.iter().copied().max().map_or(0, |m| m + 1);
        let groups: Vec<Vec<usize>> = (0..clusters)
            .map(|c| (0..self.labels.len()).filter(|&i| self.labels[i] == c).collect())
            .collect();
        let mut inter = f64::INFINITY;
        for (gi, g) in groups.iter().enumerate() {
            for h in &groups[gi + 1..] {
                for &i in g {
                    for &j in h {
                        inter = inter.min(self.cloud.distance_unchecked(i, j));
                    }
                }
            }
        }
        let d = self.cloud.dim();
        let mut intra = 0.0f64;
        for g in &groups {
            let coords: Vec<f64> = g.iter().flat_map(|&i| self.cloud.point(i).iter().copied()).collect();
            let sub = PointCloud::new(coords, d, MetricKind::Euclidean).expect("valid subset");
            intra = compute_emst(&sub).lengths().fold(intra, f64::max);
        }
        (inter, intra)
    }
}

struct Sampler {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl Sampler {
    fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), spare: None }
    }

    fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 - u lies in (0, 1], keeping the log finite
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let (s, c) = libm::sincos(TAU * u2);
        self.spare = Some(r * s);
        r * c
    }

    fn unit_vector3(&mut self) -> [f64; 3] {
        loop {
            let v = [self.normal(), self.normal(), self.normal()];
            let r = libm::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
            if r > 1e-12 {
                return [v[0] / r, v[1] / r, v[2] / r];
            }
        }
    }
}

fn polygon_centers(k: usize, side: f64) -> Vec<[f64; 3]> {
    if k == 1 {
        return alloc::vec![[0.0; 3]];
    }
    // circumradius of a regular k-gon with the given side
    let radius = side / (2.0 * libm::sin(core::f64::consts::PI / k as f64));
    (0..k)
        .map(|i| {
            let (s, c) = libm::sincos(TAU * i as f64 / k as f64);
            [radius * c, radius * s, 0.0]
        })
        .collect()
}

pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticData> {
    spec.validate()?;
    let mut rng = Sampler::new(spec.seed);
    let total: usize = spec.counts.iter().sum();
    let mut coords = Vec::with_capacity(3 * total);
    let mut labels = Vec::with_capacity(total);
    match spec.kind {
        SyntheticKind::Gaussians => {
            let centers = polygon_centers(spec.counts.len(), spec.separation * spec.scale);
            for (c, (&count, center)) in spec.counts.iter().zip(&centers).enumerate() {
                for _ in 0..count {
                    for &mu in center {
                        coords.push(mu + spec.scale * rng.normal());
                    }
                    labels.push(c);
                }
            }
        }
        SyntheticKind::Rings => {
            for (c, &count) in spec.counts.iter().enumerate() {
                let offset = spec.separation * spec.scale * c as f64;
                // plane spanned by axes (c, c+1) mod 3
                let (u, v) = (c % 3, (c + 1) % 3);
                for _ in 0..count {
                    let (s, co) = libm::sincos(TAU * rng.uniform());
                    let mut p = [0.0; 3];
                    p[u] = spec.scale * co;
                    p[v] = spec.scale * s;
                    p[0] += offset;
                    for x in p {
                        coords.push(x + spec.noise * rng.normal());
                    }
                    labels.push(c);
                }
            }
        }
        SyntheticKind::ConcentricSpheres => {
            for (c, &count) in spec.counts.iter().enumerate() {
                let radius = spec.scale * (c + 1) as f64;
                for _ in 0..count {
                    let dir = rng.unit_vector3();
                    for x in dir {
                        coords.push(radius * x + spec.noise * rng.normal());
                    }
                    labels.push(c);
                }
            }
        }
    }
    let cloud = PointCloud::new(coords, 3, MetricKind::Euclidean)?;
    let data = SyntheticData { cloud, labels };
    if spec.counts.len() > 1 {
        let (inter, intra) = data.cluster_separation();
        if inter <= intra {
            log::warn!(
                "generated clusters touch: closest inter-cluster pair {inter} <= longest intra-cluster edge {intra}"
            );
        }
    }
    Ok(data)
}
