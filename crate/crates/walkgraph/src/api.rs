//! Route requests and responses shared by the HTTP service and the CLI.
//!
//! Coordinates are always `[lon, lat]`.
//!
//! Request:
//!
//! ```json
//! {"origin":[lon,lat],"destination":[lon,lat],
//!  "profile":"default" | {CostProfile fields},
//!  "query_date":"2015-07-01"}
//! ```
//!
//! `profile` defaults to `"default"`; `query_date` defaults to the
//! profile's own date, then to today.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use walkgraph_core::features::SegmentKind;
use walkgraph_core::network::RoutingGraph;
use walkgraph_core::router::{directions, preset, shortest_path, snap, CostProfile, Route, Step, PRESET_NAMES};
use walkgraph_core::{Error as CoreError, GeoPoint, Projection};

/// Snapping distance above which the response carries a warning.
pub const SNAP_WARNING_M: f64 = 25.0;

#[derive(Debug, Clone, PartialEq)]
pub struct RouteRequest {
    pub origin: GeoPoint,
    pub destination: GeoPoint,
    pub profile: CostProfile,
    pub query_date: Option<NaiveDate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnappedWaypoint {
    pub node: usize,
    pub distance_m: f64,
}

/// Per-edge detail for elevation profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseEdge {
    pub id: usize,
    pub kind: SegmentKind,
    pub length_m: f64,
    pub cumulative_m: f64,
    pub elevation_m: f64,
    pub grade: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteResponse {
    pub status: String,
    pub profile: String,
    pub query_date: NaiveDate,
    pub origin: SnappedWaypoint,
    pub destination: SnappedWaypoint,
    pub geometry: Vec<[f64; 2]>,
    pub steps: Vec<Step>,
    pub edges: Vec<ResponseEdge>,
    pub total_length_m: f64,
    pub total_cost: f64,
    pub max_grade: f64,
    pub warnings: Vec<String>,
}

/// A failed request, with its HTTP status and JSON body.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: u16,
    pub code: &'static str,
    pub message: String,
    pub details: Value,
}

impl ApiError {
    pub fn bad_request(message: impl Into<String>) -> ApiError {
        ApiError {
            status: 400,
            code: "bad_request",
            message: message.into(),
            details: Value::Null,
        }
    }

    pub fn body(&self) -> Value {
        let mut error = json!({ "code": self.code, "message": self.message });
        if let Value::Object(extra) = &self.details {
            for (k, v) in extra {
                error[k] = v.clone();
            }
        }
        json!({ "status": "error", "error": error })
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for ApiError {}

/// Compact JSON followed by a newline; the exact bytes both the service and
/// the CLI emit.
pub fn render(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string(value).expect("responses serialise");
    s.push('\n');
    s
}

fn waypoint(v: Option<&Value>, field: &str) -> Result<GeoPoint, ApiError> {
    let v = v.ok_or_else(|| ApiError::bad_request(format!("{field}: missing field")))?;
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| ApiError::bad_request(format!("{field}: expected [lon, lat]")))?;
    let (Some(lon), Some(lat)) = (arr[0].as_f64(), arr[1].as_f64()) else {
        return Err(ApiError::bad_request(format!("{field}: coordinates must be numbers")));
    };
    GeoPoint::new(lon, lat).map_err(|e| ApiError::bad_request(format!("{field}: {e}")))
}

/// Resolves a profile given as a preset name or a full JSON object.
pub fn parse_profile(v: &Value) -> Result<CostProfile, ApiError> {
    let profile = match v {
        Value::String(name) => preset(name).ok_or_else(|| {
            ApiError::bad_request(format!("profile: unknown preset {name:?} (expected one of {})", PRESET_NAMES.join(", ")))
        })?,
        Value::Object(_) => serde_json::from_value::<CostProfile>(v.clone()).map_err(|e| ApiError::bad_request(format!("profile: {e}")))?,
        _ => return Err(ApiError::bad_request("profile: expected a preset name or a profile object")),
    };
    profile.validate().map_err(|e| ApiError::bad_request(format!("profile: {e}")))?;
    Ok(profile)
}

pub fn parse_route_request(body: &[u8]) -> Result<RouteRequest, ApiError> {
    let v: Value = serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed JSON: {e}")))?;
    let obj = v.as_object().ok_or_else(|| ApiError::bad_request("request must be a JSON object"))?;
    if let Some(k) = obj.keys().find(|k| !["origin", "destination", "profile", "query_date"].contains(&k.as_str())) {
        return Err(ApiError::bad_request(format!("{k}: unknown field")));
    }
    let origin = waypoint(obj.get("origin"), "origin")?;
    let destination = waypoint(obj.get("destination"), "destination")?;
    let profile = match obj.get("profile") {
        None | Some(Value::Null) => CostProfile::default(),
        Some(p) => parse_profile(p)?,
    };
    let query_date = match obj.get("query_date") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => {
            Some(NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|e| ApiError::bad_request(format!("query_date: {e}")))?)
        }
        Some(_) => return Err(ApiError::bad_request("query_date: expected a YYYY-MM-DD string")),
    };
    Ok(RouteRequest {
        origin,
        destination,
        profile,
        query_date,
    })
}

/// A loaded graph ready to answer route requests.
#[derive(Debug, Clone)]
pub struct RouteContext {
    pub graph: RoutingGraph,
    pub projection: Projection,
    pub snap_radius: f64,
}

fn snap_error(e: CoreError, which: &str) -> ApiError {
    match e {
        CoreError::UnroutableWaypoint { nearest_m, radius_m } => ApiError {
            status: 422,
            code: "unroutable_waypoint",
            message: format!("{which}: {e}"),
            details: json!({ "waypoint": which, "nearest_m": nearest_m, "radius_m": radius_m }),
        },
        other => ApiError {
            status: 500,
            code: "internal",
            message: other.to_string(),
            details: Value::Null,
        },
    }
}

impl RouteContext {
    /// Snaps both waypoints, routes and builds directions. `today` is used
    /// when neither the request nor the profile carries a date.
    pub fn route(&self, req: &RouteRequest, today: NaiveDate) -> Result<RouteResponse, ApiError> {
        let (o, od) = snap(&self.graph, &self.projection, req.origin, self.snap_radius).map_err(|e| snap_error(e, "origin"))?;
        let (d, dd) = snap(&self.graph, &self.projection, req.destination, self.snap_radius).map_err(|e| snap_error(e, "destination"))?;
        let date = req.query_date.or(req.profile.query_date).unwrap_or(today);
        let profile = req.profile.clone().with_date(date);
        let route = shortest_path(&self.graph, &profile, o, d).map_err(|e| match e {
            CoreError::NoRoute { ref binding } => ApiError {
                status: 404,
                code: "no_route",
                message: e.to_string(),
                details: json!({ "binding": binding }),
            },
            other => ApiError {
                status: 500,
                code: "internal",
                message: other.to_string(),
                details: Value::Null,
            },
        })?;

        let mut warnings = Vec::new();
        for (which, dist) in [("origin", od), ("destination", dd)] {
            if dist > SNAP_WARNING_M {
                warnings.push(format!("{which} snapped {dist:.1} m to the nearest network node"));
            }
        }
        let unramped = route
            .edges
            .iter()
            .map(|re| &self.graph.edges()[re.edge])
            .filter(|e| e.kind == SegmentKind::Crossing && !(e.curb_ramp_a && e.curb_ramp_b))
            .count();
        if unramped > 0 {
            warnings.push(format!("route uses {unramped} crossing(s) without curb ramps at both ends"));
        }

        Ok(RouteResponse {
            status: "ok".into(),
            profile: profile.name.clone(),
            query_date: date,
            origin: SnappedWaypoint { node: o, distance_m: od },
            destination: SnappedWaypoint { node: d, distance_m: dd },
            geometry: self.geometry(&route),
            steps: directions(&self.graph, &route),
            edges: route
                .edges
                .iter()
                .map(|re| ResponseEdge {
                    id: re.edge,
                    kind: self.graph.edges()[re.edge].kind,
                    length_m: re.length,
                    cumulative_m: re.cumulative_length,
                    elevation_m: re.elevation,
                    grade: self.graph.edges()[re.edge].grade,
                    cost: re.cost,
                })
                .collect(),
            total_length_m: route.total_length,
            total_cost: route.total_cost,
            max_grade: route.max_grade,
            warnings,
        })
    }

    fn geometry(&self, route: &Route) -> Vec<[f64; 2]> {
        let mut pts = vec![self.graph.nodes()[route.nodes[0]].location];
        for re in &route.edges {
            let line = self.graph.edges()[re.edge].geometry_from(re.from);
            pts.extend_from_slice(&line.points()[1..]);
        }
        pts.into_iter()
            .map(|p| {
                let g = self.projection.unproject(p);
                [g.lon, g.lat]
            })
            .collect()
    }
}
