//! Sidewalk network repair, routable graph assembly and accessibility-aware
//! routing.
//!
//! The crate is `no_std` (it needs `alloc`) and performs no IO. All geometry
//! is planar, in meters, on a local equirectangular projection; WGS84
//! coordinates only appear at the edges through [`geometry::Projection`].
//!
//! The build runs in stages:
//!
//! 1. [`denoise`] extracts street topology, repairs gaps at T-intersections,
//!    classifies sidewalk endpoints into street corners and joins them.
//! 2. [`network`] generates street crossings between corners, assembles the
//!    routing graph and annotates it with elevation, curb ramps and
//!    construction permits.
//! 3. [`router`] answers shortest-path queries under a [`router::CostProfile`].
//!
//! [`pipeline::build_network`] chains the stages together.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod denoise;
pub mod elevation;
pub mod error;
pub mod features;
pub mod geometry;
pub mod network;
pub mod pipeline;
pub mod router;
pub mod spatial;

pub use error::{Error, Result};
pub use geometry::{GeoPoint, LocalPoint, Polyline, Projection};
