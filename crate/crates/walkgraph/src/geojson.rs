//! GeoJSON FeatureCollection reading and writing.
//!
//! Features are first read into WGS84 [`RawFeature`]s so the projection
//! origin can be chosen from the street extent, then projected into the
//! typed core sets.

use std::path::Path;

use chrono::NaiveDate;
use serde_json::{json, Map, Value};
use walkgraph_core::features::{
    CurbRampSet, DateInterval, FeatureGeometry, LineFeature, LineSet, Permit, PermitSet, PointFeature, PointSet, Properties, Scalar,
};
use walkgraph_core::{GeoPoint, LocalPoint, Polyline, Projection};

use crate::error::{read_to_string, Error, Result};

/// Permit property holding the first active day (ISO-8601 date).
pub const START_DATE_KEY: &str = "start_date";
/// Permit property holding the last active day (ISO-8601 date).
pub const END_DATE_KEY: &str = "end_date";
/// Permit property flagging an impact on the sidewalk (boolean).
pub const SIDEWALK_IMPACT_KEY: &str = "sidewalk_impact";

#[derive(Debug, Clone, PartialEq)]
pub enum RawGeometry {
    Point(GeoPoint),
    Line(Vec<GeoPoint>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryKind {
    Point,
    LineString,
}

impl GeometryKind {
    fn as_str(self) -> &'static str {
        match self {
            GeometryKind::Point => "Point",
            GeometryKind::LineString => "LineString",
        }
    }
}

/// A feature as read from disk, in WGS84.
#[derive(Debug, Clone, PartialEq)]
pub struct RawFeature {
    pub id: String,
    pub geometry: RawGeometry,
    pub properties: Properties,
}

impl RawFeature {
    pub fn kind(&self) -> GeometryKind {
        match self.geometry {
            RawGeometry::Point(_) => GeometryKind::Point,
            RawGeometry::Line(_) => GeometryKind::LineString,
        }
    }

    fn points(&self) -> &[GeoPoint] {
        match &self.geometry {
            RawGeometry::Point(p) => std::slice::from_ref(p),
            RawGeometry::Line(l) => l,
        }
    }
}

fn schema(path: &Path, feature: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_path_buf(),
        feature: feature.to_string(),
        message: message.into(),
    }
}

fn scalar(v: &Value) -> Scalar {
    match v {
        Value::Null => Scalar::Null,
        Value::Bool(b) => Scalar::Bool(*b),
        Value::Number(n) => Scalar::Number(n.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) => Scalar::Text(s.clone()),
        // Nested values are kept as their JSON text.
        other => Scalar::Text(other.to_string()),
    }
}

fn position(path: &Path, id: &str, v: &Value) -> Result<GeoPoint> {
    let coords = v.as_array().filter(|a| a.len() >= 2).ok_or_else(|| schema(path, id, "position must be an array [lon, lat]"))?;
    let (Some(lon), Some(lat)) = (coords[0].as_f64(), coords[1].as_f64()) else {
        return Err(schema(path, id, "position coordinates must be numbers"));
    };
    GeoPoint::new(lon, lat).map_err(|e| schema(path, id, e.to_string()))
}

/// Parses a FeatureCollection. `path` is only used in error messages.
pub fn parse_feature_collection(text: &str, path: &Path) -> Result<Vec<RawFeature>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let top_level = |message: &str| Error::Format {
        path: path.to_path_buf(),
        line: 1,
        column: 1,
        message: message.to_string(),
    };
    if doc.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(top_level("expected a GeoJSON FeatureCollection"));
    }
    let features = doc.get("features").and_then(Value::as_array).ok_or_else(|| top_level("FeatureCollection has no features array"))?;

    let mut out = Vec::with_capacity(features.len());
    let mut seen = std::collections::HashSet::new();
    for (i, f) in features.iter().enumerate() {
        let id = match f.get("id") {
            Some(Value::String(s)) if !s.is_empty() => s.clone(),
            Some(Value::Number(n)) => n.to_string(),
            _ => format!("f{i}"),
        };
        if !seen.insert(id.clone()) {
            return Err(schema(path, &id, "duplicate feature id"));
        }
        let geometry = f.get("geometry").filter(|g| g.is_object()).ok_or_else(|| schema(path, &id, "missing geometry"))?;
        let coords = geometry.get("coordinates").ok_or_else(|| schema(path, &id, "geometry has no coordinates"))?;
        let geometry = match geometry.get("type").and_then(Value::as_str) {
            Some("Point") => RawGeometry::Point(position(path, &id, coords)?),
            Some("LineString") => {
                let pts = coords.as_array().ok_or_else(|| schema(path, &id, "LineString coordinates must be an array"))?;
                RawGeometry::Line(pts.iter().map(|p| position(path, &id, p)).collect::<Result<_>>()?)
            }
            Some(other) => return Err(schema(path, &id, format!("unsupported geometry type {other}"))),
            None => return Err(schema(path, &id, "geometry has no type")),
        };
        let properties = match f.get("properties") {
            Some(Value::Object(m)) => m.iter().map(|(k, v)| (k.clone(), scalar(v))).collect(),
            Some(Value::Null) | None => Properties::new(),
            Some(_) => return Err(schema(path, &id, "properties must be an object")),
        };
        out.push(RawFeature { id, geometry, properties });
    }
    Ok(out)
}

pub fn read_feature_collection(path: &Path) -> Result<Vec<RawFeature>> {
    parse_feature_collection(&read_to_string(path)?, path)
}

/// Centre of the bounding box of every coordinate, or `None` when empty.
pub fn bbox_center(features: &[RawFeature]) -> Option<GeoPoint> {
    let mut it = features.iter().flat_map(RawFeature::points);
    let first = it.next()?;
    let (mut min, mut max) = ((first.lon, first.lat), (first.lon, first.lat));
    for p in it {
        min = (min.0.min(p.lon), min.1.min(p.lat));
        max = (max.0.max(p.lon), max.1.max(p.lat));
    }
    GeoPoint::new((min.0 + max.0) / 2.0, (min.1 + max.1) / 2.0).ok()
}

fn expect_kind(path: &Path, f: &RawFeature, expected: GeometryKind) -> Result<()> {
    if f.kind() != expected {
        return Err(schema(path, &f.id, format!("expected {} geometry, found {}", expected.as_str(), f.kind().as_str())));
    }
    Ok(())
}

fn project_point(path: &Path, id: &str, proj: &Projection, p: GeoPoint) -> Result<LocalPoint> {
    proj.project(p).map_err(|e| schema(path, id, e.to_string()))
}

fn project_line(path: &Path, id: &str, proj: &Projection, pts: &[GeoPoint]) -> Result<Polyline> {
    let local = pts.iter().map(|&p| project_point(path, id, proj, p)).collect::<Result<Vec<_>>>()?;
    Polyline::new(local).map_err(|e| schema(path, id, e.to_string()))
}

/// Projects LineString features into a line set.
pub fn to_lines(raw: &[RawFeature], proj: &Projection, path: &Path) -> Result<LineSet> {
    let mut out = Vec::with_capacity(raw.len());
    for f in raw {
        expect_kind(path, f, GeometryKind::LineString)?;
        let RawGeometry::Line(pts) = &f.geometry else { unreachable!() };
        out.push(LineFeature {
            id: f.id.clone(),
            line: project_line(path, &f.id, proj, pts)?,
            properties: f.properties.clone(),
        });
    }
    Ok(LineSet::new(out))
}

/// Projects Point features into a point set.
pub fn to_points(raw: &[RawFeature], proj: &Projection, path: &Path) -> Result<PointSet> {
    let mut out = Vec::with_capacity(raw.len());
    for f in raw {
        expect_kind(path, f, GeometryKind::Point)?;
        let RawGeometry::Point(p) = f.geometry else { unreachable!() };
        out.push(PointFeature {
            id: f.id.clone(),
            point: project_point(path, &f.id, proj, p)?,
            properties: f.properties.clone(),
        });
    }
    Ok(PointSet::new(out))
}

fn date_property(path: &Path, f: &RawFeature, key: &str) -> Result<NaiveDate> {
    let text = f
        .properties
        .get(key)
        .and_then(Scalar::as_str)
        .ok_or_else(|| schema(path, &f.id, format!("missing date property {key}")))?;
    NaiveDate::parse_from_str(text, "%Y-%m-%d").map_err(|e| schema(path, &f.id, format!("{key}: {e}")))
}

/// Projects permit features (Point or LineString) and reads their active
/// interval and sidewalk impact flag.
pub fn to_permits(raw: &[RawFeature], proj: &Projection, path: &Path) -> Result<PermitSet> {
    let mut permits = Vec::with_capacity(raw.len());
    for f in raw {
        let geometry = match &f.geometry {
            RawGeometry::Point(p) => FeatureGeometry::Point(project_point(path, &f.id, proj, *p)?),
            RawGeometry::Line(pts) => FeatureGeometry::Line(project_line(path, &f.id, proj, pts)?),
        };
        let start = date_property(path, f, START_DATE_KEY)?;
        let end = date_property(path, f, END_DATE_KEY)?;
        if start > end {
            return Err(schema(path, &f.id, format!("{START_DATE_KEY} {start} is after {END_DATE_KEY} {end}")));
        }
        let sidewalk_impact = match f.properties.get(SIDEWALK_IMPACT_KEY) {
            Some(Scalar::Bool(b)) => *b,
            _ => return Err(schema(path, &f.id, format!("missing boolean property {SIDEWALK_IMPACT_KEY}"))),
        };
        permits.push(Permit {
            id: f.id.clone(),
            geometry,
            active: DateInterval { start, end },
            sidewalk_impact,
            properties: f.properties.clone(),
        });
    }
    Ok(PermitSet { permits })
}

/// Reads a file and projects it as lines.
pub fn load_lines(path: &Path, proj: &Projection) -> Result<LineSet> {
    to_lines(&read_feature_collection(path)?, proj, path)
}

pub fn load_points(path: &Path, proj: &Projection) -> Result<CurbRampSet> {
    to_points(&read_feature_collection(path)?, proj, path)
}

pub fn load_permits(path: &Path, proj: &Projection) -> Result<PermitSet> {
    to_permits(&read_feature_collection(path)?, proj, path)
}

fn scalar_json(s: &Scalar) -> Value {
    match s {
        Scalar::Null => Value::Null,
        Scalar::Bool(b) => Value::Bool(*b),
        Scalar::Number(n) => json!(n),
        Scalar::Text(t) => Value::String(t.clone()),
    }
}

pub fn properties_json(p: &Properties) -> Map<String, Value> {
    p.iter().map(|(k, v)| (k.clone(), scalar_json(v))).collect()
}

pub fn position_json(p: GeoPoint) -> Value {
    json!([p.lon, p.lat])
}

pub fn line_json(proj: &Projection, line: &Polyline) -> Vec<Value> {
    line.points().iter().map(|&p| position_json(proj.unproject(p))).collect()
}

fn feature_json(id: &str, geometry: Value, properties: Map<String, Value>) -> Value {
    json!({ "type": "Feature", "id": id, "geometry": geometry, "properties": properties })
}

pub fn collection_json(features: Vec<Value>) -> Value {
    json!({ "type": "FeatureCollection", "features": features })
}

/// Serialises raw features back to a FeatureCollection.
pub fn raw_collection_json(features: &[RawFeature]) -> Value {
    collection_json(
        features
            .iter()
            .map(|f| {
                let geometry = match &f.geometry {
                    RawGeometry::Point(p) => json!({ "type": "Point", "coordinates": position_json(*p) }),
                    RawGeometry::Line(l) => json!({ "type": "LineString", "coordinates": l.iter().map(|&p| position_json(p)).collect::<Vec<_>>() }),
                };
                feature_json(&f.id, geometry, properties_json(&f.properties))
            })
            .collect(),
    )
}

pub fn lines_json(set: &LineSet, proj: &Projection) -> Value {
    collection_json(
        set.iter()
            .map(|f| feature_json(&f.id, json!({ "type": "LineString", "coordinates": line_json(proj, &f.line) }), properties_json(&f.properties)))
            .collect(),
    )
}

pub fn points_json(set: &PointSet, proj: &Projection) -> Value {
    collection_json(
        set.features
            .iter()
            .map(|f| feature_json(&f.id, json!({ "type": "Point", "coordinates": position_json(proj.unproject(f.point)) }), properties_json(&f.properties)))
            .collect(),
    )
}

/// Permits with their interval and impact written back as properties.
pub fn permits_json(set: &PermitSet, proj: &Projection) -> Value {
    collection_json(
        set.permits
            .iter()
            .map(|p| {
                let geometry = match &p.geometry {
                    FeatureGeometry::Point(pt) => json!({ "type": "Point", "coordinates": position_json(proj.unproject(*pt)) }),
                    FeatureGeometry::Line(l) => json!({ "type": "LineString", "coordinates": line_json(proj, l) }),
                };
                let mut props = properties_json(&p.properties);
                props.insert(START_DATE_KEY.into(), Value::String(p.active.start.to_string()));
                props.insert(END_DATE_KEY.into(), Value::String(p.active.end.to_string()));
                props.insert(SIDEWALK_IMPACT_KEY.into(), Value::Bool(p.sidewalk_impact));
                feature_json(&p.id, geometry, props)
            })
            .collect(),
    )
}
