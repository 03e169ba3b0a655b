//! File formats, SVG rendering and the command line around `topomap-core`.

pub mod cli;
pub mod io;
pub mod svg;

pub use topomap_core;
