//! File formats, HTTP service and synthetic benchmark for the sidewalk
//! network builder in `walkgraph-core`.
//!
//! - [`geojson`], [`asc`] and [`config`] read the build inputs.
//! - [`dataset`] loads a full input set and runs the build.
//! - [`graph_io`] persists the routing graph.
//! - [`api`] and [`service`] answer route queries over HTTP.
//! - [`synth`] generates grid cities with ground truth and scores builds.

pub mod api;
pub mod asc;
pub mod config;
pub mod dataset;
pub mod error;
pub mod geojson;
pub mod graph_io;
pub mod service;
pub mod synth;

pub use error::{Error, Result};
