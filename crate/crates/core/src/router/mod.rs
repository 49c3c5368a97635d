//! Accessibility-aware routing over a [`RoutingGraph`](crate::network::RoutingGraph).
//!
//! A [`CostProfile`] prices each directed edge traversal; [`shortest_path`]
//! finds the cheapest route between two nodes and [`directions`] turns it into
//! walking steps.

mod cost;
mod directions;
mod profile;
mod search;

pub use cost::{edge_cost, grade_ramp, ClassSet, ConstraintClass, EdgeCost};
pub use directions::{directions, Maneuver, Step, TURN_THRESHOLD_DEG};
pub use profile::{preset, presets, CostProfile, Penalty, PRESET_NAMES};
pub use search::{binding_constraints, shortest_path, snap, Route, RouteEdge, SNAP_RADIUS_M};
