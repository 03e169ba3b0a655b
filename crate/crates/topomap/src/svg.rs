//! Scatter-plot SVG of a 2-D layout, colored by density or by label.

use std::fmt::Write;

use topomap_core::density::{check_fraction, DensityField};
use topomap_core::Vec2;

const VIRIDIS: [(f64, f64, f64); 9] = [
    (68.0, 1.0, 84.0),
    (71.0, 44.0, 122.0),
    (59.0, 81.0, 139.0),
    (44.0, 113.0, 142.0),
    (33.0, 144.0, 141.0),
    (39.0, 173.0, 129.0),
    (92.0, 200.0, 99.0),
    (170.0, 220.0, 50.0),
    (253.0, 231.0, 37.0),
];

const CATEGORICAL: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf",
];

const GRAY: &str = "#b0b0b0";
const FADED_OPACITY: f64 = 0.25;

/// Viridis-like colormap on `[0, 1]`.
pub fn colormap(t: f64) -> String {
    let t = t.clamp(0.0, 1.0) * (VIRIDIS.len() - 1) as f64;
    let i = (t.floor() as usize).min(VIRIDIS.len() - 2);
    let f = t - i as f64;
    let (a, b) = (VIRIDIS[i], VIRIDIS[i + 1]);
    let mix = |x: f64, y: f64| (x + (y - x) * f).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgOptions {
    /// Canvas width in pixels; the height follows the layout's aspect ratio.
    pub width: f64,
    pub point_radius: f64,
    /// Points at or above this fraction of the maximum density are colored.
    pub threshold_fraction: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self { width: 800.0, point_radius: 2.0, threshold_fraction: 0.5 }
    }
}

/// How points are colored.
#[derive(Debug, Clone, Copy)]
pub enum Coloring<'a> {
    /// Dense points on the colormap, the rest faded gray.
    Density,
    /// Palette index per point, cycling through ten colors; `None` is faded
    /// gray. Density still decides opacity.
    Labels(&'a [Option<usize>]),
}

/// Maps layout coordinates onto the canvas with y pointing up. The larger
/// extent spans the width minus a 5% margin on each side.
struct Viewport {
    origin: Vec2,
    offset_x: f64,
    scale: f64,
    margin: f64,
    height: f64,
}

impl Viewport {
    fn fit(coords: &[Vec2], width: f64) -> Self {
        let mut min = coords.first().copied().unwrap_or(Vec2::ZERO);
        let mut max = min;
        for p in coords {
            min = Vec2::new(min.x.min(p.x), min.y.min(p.y));
            max = Vec2::new(max.x.max(p.x), max.y.max(p.y));
        }
        let span = max - min;
        let extent = span.x.max(span.y);
        let extent = if extent > 0.0 { extent } else { 1.0 };
        let margin = 0.05 * width;
        let scale = (width - 2.0 * margin) / extent;
        let offset_x = 0.5 * (width - 2.0 * margin - span.x * scale);
        Self { origin: min, offset_x, scale, margin, height: span.y * scale + 2.0 * margin }
    }

    fn map(&self, p: Vec2) -> (f64, f64) {
        let x = self.margin + self.offset_x + (p.x - self.origin.x) * self.scale;
        let y = self.height - self.margin - (p.y - self.origin.y) * self.scale;
        (x, y)
    }
}

/// Renders the layout. Output bytes depend only on the inputs.
pub fn render_svg(
    coords: &[Vec2],
    density: &DensityField,
    coloring: Coloring<'_>,
    options: &SvgOptions,
) -> topomap_core::Result<String> {
    check_fraction(options.threshold_fraction)?;
    if density.values.len() != coords.len() {
        return Err(topomap_core::Error::SizeMismatch { expected: coords.len(), got: density.values.len() });
    }
    if let Coloring::Labels(labels) = coloring {
        if labels.len() != coords.len() {
            return Err(topomap_core::Error::SizeMismatch { expected: coords.len(), got: labels.len() });
        }
    }
    let dense = density.dense_mask(options.threshold_fraction)?;
    let view = Viewport::fit(coords, options.width);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#,
        w = options.width,
        h = view.height
    );
    let mode = match coloring {
        Coloring::Density => "density",
        Coloring::Labels(_) => "labels",
    };
    let _ = writeln!(
        out,
        r#"<metadata>points={} coloring={mode} bandwidth={:e} threshold_fraction={} max_density={:e}</metadata>"#,
        coords.len(),
        density.bandwidth,
        options.threshold_fraction,
        density.max_density
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let style = |i: usize| -> (String, f64) {
        match coloring {
            Coloring::Density if dense[i] => (colormap(density.values[i] / density.max_density), 1.0),
            Coloring::Density => (GRAY.to_string(), FADED_OPACITY),
            Coloring::Labels(labels) => match labels[i] {
                Some(l) => (CATEGORICAL[l % CATEGORICAL.len()].to_string(), if dense[i] { 1.0 } else { 0.6 }),
                None => (GRAY.to_string(), FADED_OPACITY),
            },
        }
    };
    // faded points first so highlighted ones stay on top
    let mut order: Vec<usize> = (0..coords.len()).collect();
    order.sort_by_key(|&i| style(i).1 >= 1.0);
    let _ = writeln!(out, r#"<g stroke="none">"#);
    for i in order {
        let (fill, opacity) = style(i);
        let (x, y) = view.map(coords[i]);
        let _ = write!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.2}" fill="{fill}""#, options.point_radius);
        if opacity < 1.0 {
            let _ = write!(out, r#" fill-opacity="{opacity}""#);
        }
        let _ = writeln!(out, "/>");
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    Ok(out)
}
