//! Typed feature collections for the input datasets.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::geometry::{LocalPoint, Polyline};

/// Scalar attribute value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Null,
    Bool(bool),
    Number(f64),
    Text(String),
}

impl Scalar {
    pub fn as_str(&self) -> Option<&str> {
        match self {
            Scalar::Text(s) => Some(s),
            _ => None,
        }
    }
}

pub type Properties = BTreeMap<String, Scalar>;

/// Property key carrying the segment kind of sidewalk-set features.
pub const KIND_KEY: &str = "kind";
/// Property key carrying the gap length of generated connectors.
pub const GAP_KEY: &str = "gap_m";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    Sidewalk,
    TConnector,
    CornerConnector,
    Crossing,
}

impl SegmentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SegmentKind::Sidewalk => "sidewalk",
            SegmentKind::TConnector => "t_connector",
            SegmentKind::CornerConnector => "corner_connector",
            SegmentKind::Crossing => "crossing",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "sidewalk" => SegmentKind::Sidewalk,
            "t_connector" => SegmentKind::TConnector,
            "corner_connector" => SegmentKind::CornerConnector,
            "crossing" => SegmentKind::Crossing,
            _ => return None,
        })
    }

    pub fn is_connector(&self) -> bool {
        matches!(self, SegmentKind::TConnector | SegmentKind::CornerConnector)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineFeature {
    pub id: String,
    pub line: Polyline,
    pub properties: Properties,
}

impl LineFeature {
    pub fn new(id: impl Into<String>, line: Polyline) -> Self {
        LineFeature {
            id: id.into(),
            line,
            properties: Properties::new(),
        }
    }

    /// Kind from the `kind` property; untagged features are sidewalks.
    pub fn kind(&self) -> SegmentKind {
        self.properties
            .get(KIND_KEY)
            .and_then(Scalar::as_str)
            .and_then(SegmentKind::parse)
            .unwrap_or(SegmentKind::Sidewalk)
    }
}

/// Polyline dataset: sidewalks (disconnected segments) or streets
/// (connected centerline segments).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LineSet {
    pub features: Vec<LineFeature>,
}

pub type SidewalkSet = LineSet;
pub type StreetSet = LineSet;

impl LineSet {
    pub fn new(features: Vec<LineFeature>) -> Self {
        LineSet { features }
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &LineFeature> {
        self.features.iter()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointFeature {
    pub id: String,
    pub point: LocalPoint,
    pub properties: Properties,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointSet {
    pub features: Vec<PointFeature>,
}

pub type CurbRampSet = PointSet;

impl PointSet {
    pub fn new(features: Vec<PointFeature>) -> Self {
        PointSet { features }
    }

    pub fn points(&self) -> impl Iterator<Item = LocalPoint> + '_ {
        self.features.iter().map(|f| f.point)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeatureGeometry {
    Point(LocalPoint),
    Line(Polyline),
}

/// Date range during which a permit is active, inclusive on both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DateInterval {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateInterval {
    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Permit {
    pub id: String,
    pub geometry: FeatureGeometry,
    pub active: DateInterval,
    pub sidewalk_impact: bool,
    pub properties: Properties,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PermitSet {
    pub permits: Vec<Permit>,
}

/// Keeps permits that affect the sidewalk and are active on `query_date`.
pub fn filter_permits(permits: &PermitSet, query_date: NaiveDate) -> PermitSet {
    PermitSet {
        permits: permits
            .permits
            .iter()
            .filter(|p| p.sidewalk_impact && p.active.contains(query_date))
            .cloned()
            .collect(),
    }
}
