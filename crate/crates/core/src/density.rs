//! Gaussian kernel density over a planar layout.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::Vec2;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    pub values: Vec<f64>,
    pub max_density: f64,
    pub bandwidth: f64,
}

impl DensityField {
    /// Points at or above `fraction` of the maximum density.
    pub fn dense_mask(&self, fraction: f64) -> Result<Vec<bool>> {
        check_fraction(fraction)?;
        let cut = fraction * self.max_density;
        Ok(self.values.iter().map(|&v| v >= cut).collect())
    }
}

pub fn check_fraction(fraction: f64) -> Result<()> {
    if fraction > 0.0 && fraction <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter("density threshold fraction must lie in (0, 1]"))
    }
}

/// 1/20 of the bounding-box diagonal, or 1 for a layout with no extent.
pub fn default_bandwidth(coords: &[Vec2]) -> f64 {
    let Some(first) = coords.first() else { return 1.0 };
    let (lo, hi) = coords.iter().fold((*first, *first), |(lo, hi), p| {
        (Vec2::new(lo.x.min(p.x), lo.y.min(p.y)), Vec2::new(hi.x.max(p.x), hi.y.max(p.y)))
    });
    let diag = (hi - lo).norm();
    if diag > 0.0 {
        diag / 20.0
    } else {
        1.0
    }
}

fn density_at(coords: &[Vec2], p: Vec2, inv_two_h2: f64) -> f64 {
    coords.iter().map(|&q| libm::exp(-(p - q).norm_sq() * inv_two_h2)).sum()
}

/// `density(p_i) = sum_j exp(-|p_i - p_j|^2 / (2 h^2))`, self term included.
pub fn kde_density(coords: &[Vec2], bandwidth: f64) -> Result<DensityField> {
    if !(bandwidth > 0.0) || !bandwidth.is_finite() {
        return Err(Error::InvalidParameter("bandwidth must be positive"));
    }
    let inv = 1.0 / (2.0 * bandwidth * bandwidth);
    #[cfg(feature = "std")]
    let values: Vec<f64> = {
        use rayon::prelude::*;
        coords.par_iter().map(|&p| density_at(coords, p, inv)).collect()
    };
    #[cfg(not(feature = "std"))]
    let values: Vec<f64> = coords.iter().map(|&p| density_at(coords, p, inv)).collect();
    let max_density = values.iter().copied().fold(0.0, f64::max);
    Ok(DensityField { values, max_density, bandwidth })
}
