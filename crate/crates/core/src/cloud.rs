//! Point clouds, distance metrics and the canonical edge order.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};

/// Distance used to build the filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetricKind {
    #[default]
    Euclidean,
    /// Angle between the two position vectors, in radians.
    Angular,
}

/// An `n x d` row-major matrix of finite coordinates with an attached metric.
///
/// Validated once at construction; every other module assumes finite data.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    n: usize,
    d: usize,
    coords: Vec<f64>,
    metric: MetricKind,
    norms: Vec<f64>,
}

impl PointCloud {
    pub fn new(coords: Vec<f64>, d: usize, metric: MetricKind) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        if coords.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if !coords.len().is_multiple_of(d) {
            return Err(Error::RaggedCoords { len: coords.len(), dim: d });
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { point: pos / d, coord: pos % d });
        }
        let n = coords.len() / d;
        let norms = match metric {
            MetricKind::Euclidean => Vec::new(),
            MetricKind::Angular => {
                let norms: Vec<f64> = coords
                    .chunks_exact(d)
                    .map(|row| libm::sqrt(row.iter().map(|x| x * x).sum::<f64>()))
                    .collect();
                if let Some(point) = norms.iter().position(|&r| r == 0.0) {
                    return Err(Error::ZeroVector { point });
                }
                norms
            }
        };
        Ok(Self { n, d, coords, metric, norms })
    }

    /// Builds a cloud from rows of equal length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], metric: MetricKind) -> Result<Self> {
        let d = rows.first().map(|r| r.as_ref().len()).ok_or(Error::EmptyCloud)?;
        let mut coords = Vec::with_capacity(rows.len() * d);
        for row in rows {
            let row = row.as_ref();
            if row.len() != d {
                return Err(Error::RaggedCoords { len: row.len(), dim: d });
            }
            coords.extend_from_slice(row);
        }
        Self::new(coords, d, metric)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    /// Metric distance between points `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> Result<f64> {
        for index in [i, j] {
            if index >= self.n {
                return Err(Error::IndexOutOfRange { index, len: self.n });
            }
        }
        Ok(self.distance_unchecked(i, j))
    }

    #[inline]
    pub(crate) fn distance_unchecked(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let (p, q) = (self.point(i), self.point(j));
        match self.metric {
            MetricKind::Euclidean => libm::sqrt(squared_euclidean(p, q)),
            MetricKind::Angular => {
                let dot: f64 = p.iter().zip(q).map(|(a, b)| a * b).sum();
                let cos = (dot / (self.norms[i] * self.norms[j])).clamp(-1.0, 1.0);
                libm::acos(cos)
            }
        }
    }
}

#[inline]
pub(crate) fn squared_euclidean(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| {
            let t = a - b;
            t * t
        })
        .sum()
}

/// An undirected weighted edge in canonical orientation (`a < b`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeKey {
    pub a: usize,
    pub b: usize,
    pub length: f64,
}

impl EdgeKey {
    /// Orders the endpoints so that `a <= b`.
    pub fn new(i: usize, j: usize, length: f64) -> Self {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        Self { a, b, length }
    }

    /// Position of the edge in the filtration order: length first, then the
    /// endpoint pair lexicographically. This stands in for an infinitesimal
    /// perturbation that makes all lengths distinct.
    pub fn order(&self, other: &Self) -> Ordering {
        self.length
            .total_cmp(&other.length)
            .then(self.a.cmp(&other.a))
            .then(self.b.cmp(&other.b))
    }

    pub fn other(&self, endpoint: usize) -> usize {
        if endpoint == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// Strict total order on edges; see [`EdgeKey::order`].
pub fn edge_order_less(e1: &EdgeKey, e2: &EdgeKey) -> bool {
    e1.order(e2) == Ordering::Less
}
