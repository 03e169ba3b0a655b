//! Topology-preserving projection of high-dimensional point clouds to the plane.
//!
//! The projection draws the minimum spanning tree of the input one merge at a
//! time so that every topology-changing edge of the Rips filtration keeps its
//! length. The 0-dimensional persistence diagram of the layout is therefore
//! identical to that of the input.
//!
//! The crate is `no_std` and only needs `alloc`. The default `std` feature
//! enables data-parallel distance scans through rayon.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod cloud;
pub mod datagen;
pub mod density;
pub mod error;
pub mod geometry;
pub mod mst;
pub mod persistence;
pub mod placement;
pub mod union_find;
pub mod verify;

pub use cloud::{edge_order_less, EdgeKey, MetricKind, PointCloud};
pub use error::{Error, ErrorKind, Result};
pub use geometry::{Hull2D, RigidTransform, Vec2};
pub use mst::{compute_emst, mst_from_precomputed, SortedMst};
pub use persistence::{
    components_at, diagram_from_mst, largest_components, ComponentPartition, PersistenceDiagram0,
    PersistencePair,
};
pub use placement::{project, Layout2D, OptimizedSettings, PlacementStrategy};
pub use verify::{probe_layout, verify_against_mst, verify_projection, ProbeAnnotation, VerificationReport};
