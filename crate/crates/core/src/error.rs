use alloc::string::String;
use alloc::vec::Vec;

use crate::router::ConstraintClass;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("coordinate ({lon}, {lat}) is outside the projection extent")]
    Extent { lon: f64, lat: f64 },

    #[error("invalid coordinate ({lon}, {lat})")]
    InvalidCoordinate { lon: f64, lat: f64 },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(&'static str),

    #[error("invalid polyline: {0}")]
    InvalidPolyline(String),

    #[error("empty dataset: {0}")]
    EmptyDataset(&'static str),

    #[error("point ({x:.3}, {y:.3}) is outside the elevation grid")]
    OutsideGrid { x: f64, y: f64 },

    #[error("elevation grid has no data near ({x:.3}, {y:.3})")]
    NoData { x: f64, y: f64 },

    #[error("invalid elevation grid: {0}")]
    InvalidGrid(String),

    #[error("edge {edge}: {source}")]
    Edge {
        edge: usize,
        #[source]
        source: alloc::boxed::Box<Error>,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid cost profile: {0}")]
    InvalidProfile(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no graph node within {radius_m} m of waypoint (nearest is {nearest_m:.1} m away)")]
    UnroutableWaypoint { nearest_m: f64, radius_m: f64 },

    #[error("node {0} is not in the graph")]
    UnknownNode(usize),

    #[error("no route between the waypoints{}", describe_binding(.binding))]
    NoRoute { binding: Vec<ConstraintClass> },
}

fn describe_binding(binding: &[ConstraintClass]) -> String {
    use core::fmt::Write;
    if binding.is_empty() {
        return String::from(" (the network is disconnected)");
    }
    let mut out = String::from(" (blocked by ");
    for (i, class) in binding.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{}", class.as_str());
    }
    out.push(')');
    out
}

impl Error {
    pub(crate) fn on_edge(self, edge: usize) -> Error {
        Error::Edge {
            edge,
            source: alloc::boxed::Box::new(self),
        }
    }
}
