//! Sidewalk de-noising: street topology, T-intersection gap repair, corner
//! classification and within-block corner connection.
//!
//! Raw sidewalk data arrives as disconnected segments whose endpoints can be
//! displaced far enough to sit closer to the wrong neighbour than to the right
//! one. Proximity alone therefore never decides a join: endpoints are first
//! bucketed by street corner (the wedge between two consecutive streets at an
//! intersection) and only joined within a bucket. Input geometry is never
//! moved; every repair is a new straight connector feature.

mod blocks;
mod corners;
mod t_repair;
mod topology;

pub use blocks::{assign_to_blocks, block_connectivity, extract_blocks, Block, BlockConnectivity};
pub use corners::{classify_corner_endpoints, connect_block_corners, CornerResult, CornerSector, SectorReport};
pub use t_repair::{repair_t_gaps, TNodeReport, TRepairResult};
pub use topology::{
    build_street_topology, detect_t_intersections, is_t_intersection, t_through_pair, Incidence, StreetNode, StreetTopology,
    TIntersection, DEPARTURE_SPAN_M, T_MIN_SEPARATION_DEG,
};

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::features::{LineFeature, Scalar, SegmentKind, SidewalkSet, GAP_KEY, KIND_KEY};
use crate::geometry::{LocalPoint, Polyline};
use crate::spatial::PointGrid;

/// One end of a sidewalk feature: `end` 0 is the first point, 1 the last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EndpointRef {
    pub feature: usize,
    pub end: u8,
}

impl EndpointRef {
    pub fn new(feature: usize, end: u8) -> Self {
        EndpointRef { feature, end }
    }

    pub(crate) fn from_index(i: usize) -> Self {
        EndpointRef {
            feature: i / 2,
            end: (i % 2) as u8,
        }
    }

    pub(crate) fn index(&self) -> usize {
        self.feature * 2 + self.end as usize
    }

    pub fn locate(&self, set: &SidewalkSet) -> LocalPoint {
        set.features[self.feature].line.endpoint(self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepairKind {
    TRepair,
    CornerConnect,
}

impl RepairKind {
    pub fn segment_kind(&self) -> SegmentKind {
        match self {
            RepairKind::TRepair => SegmentKind::TConnector,
            RepairKind::CornerConnect => SegmentKind::CornerConnector,
        }
    }
}

/// A connector added between two sidewalk endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct RepairAction {
    pub kind: RepairKind,
    pub geometry: Polyline,
    pub joined: (EndpointRef, EndpointRef),
    pub gap_m: f64,
    /// Street node the repair was made at.
    pub node: usize,
}

/// Tuning for the de-noising stage. Distances in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DenoiseConfig {
    pub snap_tol: f64,
    /// Largest T-intersection gap to close (100 ft).
    pub t_max_gap: f64,
    /// Largest angle between a T connector and the through street.
    pub t_max_skew_deg: f64,
    pub corner_radius: f64,
    /// Largest corner gap to close (100 ft).
    pub max_connect: f64,
}

impl Default for DenoiseConfig {
    fn default() -> Self {
        DenoiseConfig {
            snap_tol: 0.5,
            t_max_gap: 30.48,
            t_max_skew_deg: 45.0,
            corner_radius: 30.0,
            max_connect: 30.48,
        }
    }
}

/// Endpoint grid over the sidewalk-kind features of a set, keyed by
/// [`EndpointRef::index`]. Endpoints of other kinds are parked far away.
pub(crate) fn sidewalk_endpoint_grid(set: &SidewalkSet, cell: f64) -> PointGrid {
    let far = LocalPoint::new(f64::MAX / 4.0, f64::MAX / 4.0);
    let pts: Vec<LocalPoint> = set
        .iter()
        .flat_map(|f| {
            if f.kind() == SegmentKind::Sidewalk {
                [f.line.first(), f.line.last()]
            } else {
                [far, far]
            }
        })
        .collect();
    PointGrid::new(pts, cell)
}

pub(crate) fn connector_feature(action: &RepairAction, seq: usize) -> LineFeature {
    let prefix = action.kind.segment_kind().as_str();
    let mut f = LineFeature::new(format!("{prefix}:{}:{seq}", action.node), action.geometry.clone());
    f.properties.insert(KIND_KEY.into(), Scalar::Text(prefix.into()));
    f.properties.insert(GAP_KEY.into(), Scalar::Number(action.gap_m));
    f
}

/// Greedy closest-pair matching: candidate pairs are taken in increasing
/// gap order, each endpoint used at most once.
pub(crate) fn greedy_pairs(mut candidates: Vec<(f64, EndpointRef, EndpointRef)>) -> Vec<(f64, EndpointRef, EndpointRef)> {
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut used: Vec<EndpointRef> = Vec::new();
    let mut out = Vec::new();
    for (gap, a, b) in candidates {
        if used.contains(&a) || used.contains(&b) {
            continue;
        }
        used.push(a);
        used.push(b);
        out.push((gap, a, b));
    }
    out
}

/// Whether an endpoint already touches an endpoint of a different feature.
pub(crate) fn touches_other_feature(set: &SidewalkSet, grid: &PointGrid, e: EndpointRef) -> bool {
    let p = e.locate(set);
    grid.within(&p, crate::geometry::EPS).into_iter().any(|i| i / 2 != e.feature)
}

/// Endpoint grid over every feature regardless of kind.
pub(crate) fn all_endpoint_grid(set: &SidewalkSet, cell: f64) -> PointGrid {
    PointGrid::new(set.iter().flat_map(|f| [f.line.first(), f.line.last()]).collect(), cell)
}

/// Renders repair actions as `(kind, gap, geometry)` rows; used for the
/// audit export.
pub fn repair_log(actions: &[RepairAction]) -> Vec<(SegmentKind, f64, &Polyline)> {
    actions.iter().map(|a| (a.kind.segment_kind(), a.gap_m, &a.geometry)).collect()
}
