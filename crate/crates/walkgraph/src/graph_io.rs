//! Persisted graph document and GeoJSON export.
//!
//! ```json
//! {"origin":[lon,lat],
//!  "nodes":[{"id":0,"lon":..,"lat":..,"elev":..}],
//!  "edges":[{"id":0,"a":0,"b":1,"kind":"sidewalk","length_m":..,"elev_delta_m":..,"grade":..,
//!            "curb_ramp_a":false,"curb_ramp_b":false,"crossed_street":null,
//!            "construction":[{"start":"2015-06-01","end":"2015-09-01"}],
//!            "geometry":[[lon,lat],..]}],
//!  "coverage":{..}}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use walkgraph_core::features::{DateInterval, SegmentKind};
use walkgraph_core::network::{CoverageReport, GraphEdge, GraphNode, RoutingGraph};
use walkgraph_core::{GeoPoint, Polyline, Projection};

use crate::error::{read_to_string, Error, Result};
use crate::geojson::{collection_json, line_json};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: usize,
    pub lon: f64,
    pub lat: f64,
    pub elev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: usize,
    pub a: usize,
    pub b: usize,
    pub kind: SegmentKind,
    pub length_m: f64,
    pub elev_delta_m: f64,
    pub grade: f64,
    pub curb_ramp_a: bool,
    pub curb_ramp_b: bool,
    pub crossed_street: Option<String>,
    pub construction: Vec<DateInterval>,
    pub geometry: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    /// Projection origin `[lon, lat]` used for lengths and elevation.
    pub origin: [f64; 2],
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coverage: Option<CoverageReport>,
}

/// A graph together with the projection its local coordinates use.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: RoutingGraph,
    pub projection: Projection,
    pub coverage: Option<CoverageReport>,
}

fn lonlat(p: GeoPoint) -> [f64; 2] {
    [p.lon, p.lat]
}

impl GraphDocument {
    pub fn from_graph(graph: &RoutingGraph, projection: &Projection, coverage: Option<CoverageReport>) -> GraphDocument {
        let nodes = graph
            .nodes()
            .iter()
            .map(|n| {
                let g = projection.unproject(n.location);
                NodeDoc {
                    id: n.id,
                    lon: g.lon,
                    lat: g.lat,
                    elev: n.elevation,
                }
            })
            .collect();
        let edges = graph
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                id: e.id,
                a: e.a,
                b: e.b,
                kind: e.kind,
                length_m: e.length,
                elev_delta_m: e.elev_delta,
                grade: e.grade,
                curb_ramp_a: e.curb_ramp_a,
                curb_ramp_b: e.curb_ramp_b,
                crossed_street: e.crossed_street.clone(),
                construction: e.construction.clone(),
                geometry: e.geometry.points().iter().map(|&p| lonlat(projection.unproject(p))).collect(),
            })
            .collect();
        GraphDocument {
            origin: lonlat(projection.origin()),
            nodes,
            edges,
            coverage,
        }
    }

    /// Rebuilds the graph, reprojecting coordinates about `origin`. Stored
    /// lengths and elevations are kept as written.
    pub fn into_loaded(self) -> walkgraph_core::Result<LoadedGraph> {
        let projection = Projection::new(GeoPoint::new(self.origin[0], self.origin[1])?);
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            nodes.push(GraphNode {
                id: n.id,
                location: projection.project(GeoPoint::new(n.lon, n.lat)?)?,
                elevation: n.elev,
            });
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in self.edges {
            let pts = e
                .geometry
                .iter()
                .map(|&[lon, lat]| projection.project(GeoPoint::new(lon, lat)?))
                .collect::<walkgraph_core::Result<Vec<_>>>()?;
            edges.push(GraphEdge {
                id: e.id,
                a: e.a,
                b: e.b,
                geometry: Polyline::new(pts)?,
                kind: e.kind,
                length: e.length_m,
                elev_delta: e.elev_delta_m,
                grade: e.grade,
                curb_ramp_a: e.curb_ramp_a,
                curb_ramp_b: e.curb_ramp_b,
                crossed_street: e.crossed_street,
                construction: e.construction,
            });
        }
        Ok(LoadedGraph {
            graph: RoutingGraph::from_parts(nodes, edges)?,
            projection,
            coverage: self.coverage,
        })
    }
}

pub fn write_graph(path: &Path, doc: &GraphDocument) -> Result<()> {
    let mut text = serde_json::to_string(doc).expect("graph documents serialise");
    text.push('\n');
    crate::error::write(path, text)
}

pub fn parse_graph(text: &str, path: &Path) -> Result<LoadedGraph> {
    let doc: GraphDocument = serde_json::from_str(text).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(doc.into_loaded()?)
}

pub fn load_graph(path: &Path) -> Result<LoadedGraph> {
    parse_graph(&read_to_string(path)?, path)
}

/// Every attribute of an edge, as GeoJSON properties.
pub fn edge_properties(e: &GraphEdge) -> Map<String, Value> {
    let construction: Vec<Value> = e.construction.iter().map(|i| json!({ "start": i.start.to_string(), "end": i.end.to_string() })).collect();
    let mut m = Map::new();
    m.insert("id".into(), json!(e.id));
    m.insert("a".into(), json!(e.a));
    m.insert("b".into(), json!(e.b));
    m.insert("kind".into(), json!(e.kind.as_str()));
    m.insert("length_m".into(), json!(e.length));
    m.insert("elev_delta_m".into(), json!(e.elev_delta));
    m.insert("grade".into(), json!(e.grade));
    m.insert("curb_ramp_a".into(), json!(e.curb_ramp_a));
    m.insert("curb_ramp_b".into(), json!(e.curb_ramp_b));
    m.insert("crossed_street".into(), json!(e.crossed_street));
    m.insert("construction".into(), Value::Array(construction));
    m
}

/// LineString features for the given edges.
pub fn edges_geojson<'a>(edges: impl IntoIterator<Item = &'a GraphEdge>, projection: &Projection) -> Value {
    collection_json(
        edges
            .into_iter()
            .map(|e| {
                json!({
                    "type": "Feature",
                    "id": e.id,
                    "geometry": { "type": "LineString", "coordinates": line_json(projection, &e.geometry) },
                    "properties": edge_properties(e),
                })
            })
            .collect(),
    )
}

/// Repair connectors with their `kind` and `gap_m`, for auditing.
pub fn repair_log_geojson(repairs: &[walkgraph_core::denoise::RepairAction], projection: &Projection) -> Value {
    collection_json(
        repairs
            .iter()
            .enumerate()
            .map(|(i, r)| {
                json!({
                    "type": "Feature",
                    "id": format!("repair{i}"),
                    "geometry": { "type": "LineString", "coordinates": line_json(projection, &r.geometry) },
                    "properties": {
                        "kind": r.kind.segment_kind().as_str(),
                        "gap_m": r.gap_m,
                        "node": r.node,
                        "from": [r.joined.0.feature, r.joined.0.end],
                        "to": [r.joined.1.feature, r.joined.1.end],
                    },
                })
            })
            .collect(),
    )
}
