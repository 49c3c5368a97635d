use alloc::vec::Vec;

use super::{all_endpoint_grid, connector_feature, greedy_pairs, touches_other_feature, EndpointRef, RepairAction, RepairKind, StreetTopology};
use crate::features::{SegmentKind, SidewalkSet};
use crate::geometry::{bearing, normalize_bearing, Polyline, EPS};
use crate::spatial::PointGrid;

/// Angular wedge at an intersection between two consecutive incident streets,
/// holding the sidewalk endpoints of one block corner.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerSector {
    /// Position in the sector list returned by [`classify_corner_endpoints`].
    pub id: usize,
    pub node: usize,
    /// Position of this sector among the node's sectors, clockwise.
    pub index: usize,
    /// Number of sectors at the node.
    pub node_sectors: usize,
    /// Clockwise wedge `[b_lo, b_hi)`; `b_hi` may exceed 360 when wrapping.
    pub b_lo: f64,
    pub b_hi: f64,
    /// Incidence indices (into the node's list) of the bounding streets.
    pub lo_incidence: usize,
    pub hi_incidence: usize,
    pub members: Vec<EndpointRef>,
}

impl CornerSector {
    pub fn contains_bearing(&self, b: f64) -> bool {
        normalize_bearing(b - self.b_lo) < self.b_hi - self.b_lo
    }
}

/// Assigns every sidewalk endpoint within `corner_radius` of an intersection
/// (degree >= 3) to one corner sector.
///
/// Endpoints near several intersections go to the nearest one (lowest node id
/// on ties). An endpoint lying exactly on a street bearing belongs to the
/// sector that starts at that street, i.e. the one following it clockwise.
pub fn classify_corner_endpoints(sidewalks: &SidewalkSet, topo: &StreetTopology, corner_radius: f64) -> Vec<CornerSector> {
    let mut sectors: Vec<CornerSector> = Vec::new();
    let mut first_sector_of_node: Vec<Option<usize>> = alloc::vec![None; topo.nodes.len()];
    let mut intersection_ids = Vec::new();
    for node in topo.intersections() {
        let mut unique: Vec<(f64, usize)> = Vec::new();
        for (i, inc) in node.incident.iter().enumerate() {
            if unique.last().map_or(true, |&(b, _)| inc.bearing - b > 1e-9) {
                unique.push((inc.bearing, i));
            }
        }
        if unique.len() > 1 && unique[0].0 + 360.0 - unique[unique.len() - 1].0 <= 1e-9 {
            unique.pop();
        }
        if unique.len() < 2 {
            continue;
        }
        first_sector_of_node[node.id] = Some(sectors.len());
        intersection_ids.push(node.id);
        let k = unique.len();
        for (idx, &(b_lo, lo_inc)) in unique.iter().enumerate() {
            let (next_b, hi_inc) = unique[(idx + 1) % k];
            let b_hi = if idx + 1 == k { next_b + 360.0 } else { next_b };
            sectors.push(CornerSector {
                id: sectors.len(),
                node: node.id,
                index: idx,
                node_sectors: k,
                b_lo,
                b_hi,
                lo_incidence: lo_inc,
                hi_incidence: hi_inc,
                members: Vec::new(),
            });
        }
    }
    if intersection_ids.is_empty() {
        return sectors;
    }

    let node_grid = PointGrid::new(intersection_ids.iter().map(|&id| topo.nodes[id].location).collect(), corner_radius.max(1.0));
    for (fi, feature) in sidewalks.iter().enumerate() {
        if feature.kind() != SegmentKind::Sidewalk {
            continue;
        }
        for end in 0..2u8 {
            let p = feature.line.endpoint(end);
            // Grid ids follow node id order, so the grid's tie rule picks the lowest node id.
            let Some((gi, _)) = node_grid.nearest_within(&p, corner_radius) else { continue };
            let node = &topo.nodes[intersection_ids[gi]];
            let first = first_sector_of_node[node.id].expect("intersection has sectors");
            let k = sectors[first].node_sectors;
            let slot = match bearing(&node.location, &p) {
                Ok(b) => (0..k).find(|&s| sectors[first + s].contains_bearing(b)).unwrap_or(0),
                Err(_) => 0,
            };
            sectors[first + slot].members.push(EndpointRef::new(fi, end));
        }
    }
    sectors
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SectorReport {
    pub sector: usize,
    pub members: usize,
    /// At least two members from distinct features.
    pub connectable: bool,
    /// Members that already touched another feature before this stage.
    pub joined_before: usize,
    pub connectors: usize,
}

impl SectorReport {
    /// A connectable corner counts as handled when some member got joined.
    pub fn handled(&self) -> bool {
        self.connectable && (self.connectors > 0 || self.joined_before > 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CornerResult {
    /// Input features followed by the new `corner_connector` features.
    pub sidewalks: SidewalkSet,
    pub actions: Vec<RepairAction>,
    pub sectors: Vec<SectorReport>,
}

impl CornerResult {
    pub fn corner_edit_rate(&self) -> Option<f64> {
        let connectable = self.sectors.iter().filter(|s| s.connectable).count();
        if connectable == 0 {
            return None;
        }
        Some(self.sectors.iter().filter(|s| s.handled()).count() as f64 / connectable as f64)
    }
}

/// Joins endpoints of distinct sidewalk features within each corner sector,
/// closest pair first, when the gap is at most `max_connect`. Endpoints that
/// already touch another feature (including through a T connector) are
/// skipped.
pub fn connect_block_corners(sidewalks: &SidewalkSet, sectors: &[CornerSector], max_connect: f64) -> CornerResult {
    let grid = all_endpoint_grid(sidewalks, max_connect.max(1.0));
    let mut out = sidewalks.clone();
    let mut actions = Vec::new();
    let mut reports = Vec::with_capacity(sectors.len());

    for sector in sectors {
        let mut report = SectorReport {
            sector: sector.id,
            members: sector.members.len(),
            ..Default::default()
        };
        report.connectable = sector
            .members
            .iter()
            .any(|a| sector.members.iter().any(|b| b.feature != a.feature));

        let mut free = Vec::new();
        for &m in &sector.members {
            if touches_other_feature(sidewalks, &grid, m) {
                report.joined_before += 1;
            } else {
                free.push(m);
            }
        }

        let mut pairs = Vec::new();
        for (i, a) in free.iter().enumerate() {
            for b in &free[i + 1..] {
                if a.feature == b.feature {
                    continue;
                }
                let gap = a.locate(sidewalks).distance(&b.locate(sidewalks));
                if gap > EPS && gap <= max_connect {
                    let (x, y) = if a < b { (*a, *b) } else { (*b, *a) };
                    pairs.push((gap, x, y));
                }
            }
        }
        for (gap, a, b) in greedy_pairs(pairs) {
            let Ok(geometry) = Polyline::segment(a.locate(sidewalks), b.locate(sidewalks)) else { continue };
            let action = RepairAction {
                kind: RepairKind::CornerConnect,
                geometry,
                joined: (a, b),
                gap_m: gap,
                node: sector.node,
            };
            let mut feature = connector_feature(&action, report.connectors);
            feature.id = alloc::format!("{}:{}:{}", SegmentKind::CornerConnector.as_str(), sector.id, report.connectors);
            out.features.push(feature);
            report.connectors += 1;
            actions.push(action);
        }
        reports.push(report);
    }

    CornerResult {
        sidewalks: out,
        actions,
        sectors: reports,
    }
}
