//! Street crossings, edge annotation and routing-graph assembly.
//!
//! Crossings join opposite corners of an intersection. When the far corner
//! has no sidewalk endpoint, the crossing lands on the closest point of the
//! nearest sidewalk across the street and that sidewalk is split there.
//! Assembly merges coincident endpoints into nodes; annotation then attaches
//! elevation change, curb-ramp flags and construction intervals to edges.

mod annotate;
mod coverage;
mod crossings;
mod graph;

pub use annotate::{annotate_construction, annotate_curb_ramps, annotate_elevation};
pub use coverage::{coverage_report, CoverageCounts, CoverageInputs, CoverageReport};
pub use crossings::{edge_drafts, generate_crossings, Crossing, CrossingTarget};
pub use graph::{assemble_graph, EdgeDraft, GraphEdge, GraphNode, RoutingGraph};

use serde::{Deserialize, Serialize};

/// Tuning for crossing generation, assembly and annotation. Distances in
/// meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkConfig {
    pub max_cross: f64,
    pub merge_tol: f64,
    pub ramp_radius: f64,
    pub construction_buffer: f64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        NetworkConfig {
            max_cross: 40.0,
            merge_tol: 0.01,
            ramp_radius: 5.0,
            construction_buffer: 10.0,
        }
    }
}
