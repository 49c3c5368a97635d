use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::crossings::Crossing;
use crate::denoise::{BlockConnectivity, CornerSector, SectorReport, TNodeReport};

/// Raw counts behind the coverage rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CoverageCounts {
    pub t_intersections: usize,
    /// T-intersections with sidewalk endpoints on the through-street side.
    pub t_with_sidewalks: usize,
    pub t_handled: usize,
    pub t_connectors: usize,
    pub corners: usize,
    pub corners_with_endpoints: usize,
    pub corners_connectable: usize,
    pub corners_handled: usize,
    pub corner_connectors: usize,
    pub blocks_with_sidewalks: usize,
    pub blocks_connected: usize,
    pub corners_crossed: usize,
    pub crossings: usize,
}

/// Pipeline coverage metrics. Rates lie in `[0, 1]`; a rate whose
/// denominator is zero is reported as 0 and named in `zero_denominator`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CoverageReport {
    /// T-intersections with far-side sidewalks that ended up continuous.
    pub t_repair_rate: f64,
    /// Connectable corners with at least one join.
    pub corner_edit_rate: f64,
    /// Blocks whose sidewalks form one connected piece.
    pub block_connectivity_rate: f64,
    /// Corners with sidewalk endpoints that received a crossing. Empty
    /// corners are left out; `counts.corners` includes them.
    pub crossing_corner_rate: f64,
    pub component_count: usize,
    pub zero_denominator: Vec<String>,
    pub counts: CoverageCounts,
}

/// Per-stage results the report is computed from.
#[derive(Debug, Clone, Copy)]
pub struct CoverageInputs<'a> {
    pub t_nodes: &'a [TNodeReport],
    pub t_connectors: usize,
    pub corner_sectors: &'a [CornerSector],
    pub corner_reports: &'a [SectorReport],
    pub corner_connectors: usize,
    pub blocks: &'a BlockConnectivity,
    pub crossings: &'a [Crossing],
    pub component_count: usize,
}

pub fn coverage_report(inputs: &CoverageInputs<'_>) -> CoverageReport {
    let mut crossed = alloc::vec![false; inputs.corner_sectors.len()];
    for c in inputs.crossings {
        crossed[c.from_sector] = true;
        if let Some(s) = c.to_sector {
            crossed[s] = true;
        }
    }
    let t_with: Vec<&TNodeReport> = inputs.t_nodes.iter().filter(|t| t.candidates > 0).collect();
    let counts = CoverageCounts {
        t_intersections: inputs.t_nodes.len(),
        t_with_sidewalks: t_with.len(),
        t_handled: t_with.iter().filter(|t| t.repaired + t.already_joined > 0).count(),
        t_connectors: inputs.t_connectors,
        corners: inputs.corner_sectors.len(),
        corners_with_endpoints: inputs.corner_sectors.iter().filter(|s| !s.members.is_empty()).count(),
        corners_connectable: inputs.corner_reports.iter().filter(|r| r.connectable).count(),
        corners_handled: inputs.corner_reports.iter().filter(|r| r.handled()).count(),
        corner_connectors: inputs.corner_connectors,
        blocks_with_sidewalks: inputs.blocks.blocks_with_sidewalks,
        blocks_connected: inputs.blocks.fully_connected,
        corners_crossed: crossed.iter().filter(|&&c| c).count(),
        crossings: inputs.crossings.len(),
    };

    let mut zero_denominator = Vec::new();
    let mut rate = |name: &str, hits: usize, total: usize| {
        if total == 0 {
            zero_denominator.push(String::from(name));
            0.0
        } else {
            hits as f64 / total as f64
        }
    };
    CoverageReport {
        t_repair_rate: rate("t_repair_rate", counts.t_handled, counts.t_with_sidewalks),
        corner_edit_rate: rate("corner_edit_rate", counts.corners_handled, counts.corners_connectable),
        block_connectivity_rate: rate("block_connectivity_rate", counts.blocks_connected, counts.blocks_with_sidewalks),
        crossing_corner_rate: rate("crossing_corner_rate", counts.corners_crossed, counts.corners_with_endpoints),
        component_count: inputs.component_count,
        zero_denominator,
        counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_inputs_flag_every_rate() {
        let blocks = BlockConnectivity::default();
        let report = coverage_report(&CoverageInputs {
            t_nodes: &[],
            t_connectors: 0,
            corner_sectors: &[],
            corner_reports: &[],
            corner_connectors: 0,
            blocks: &blocks,
            crossings: &[],
            component_count: 0,
        });
        assert_eq!(report.t_repair_rate, 0.0);
        assert_eq!(report.crossing_corner_rate, 0.0);
        assert_eq!(report.zero_denominator.len(), 4);
    }

    #[test]
    fn t_rate_counts_only_nodes_with_sidewalks() {
        let blocks = BlockConnectivity::default();
        let t_nodes = [
            TNodeReport { node: 0, candidates: 2, repaired: 1, already_joined: 0 },
            TNodeReport { node: 1, candidates: 2, repaired: 0, already_joined: 1 },
            TNodeReport { node: 2, candidates: 2, repaired: 0, already_joined: 0 },
            TNodeReport { node: 3, candidates: 0, repaired: 0, already_joined: 0 },
        ];
        let report = coverage_report(&CoverageInputs {
            t_nodes: &t_nodes,
            t_connectors: 1,
            corner_sectors: &[],
            corner_reports: &[],
            corner_connectors: 0,
            blocks: &blocks,
            crossings: &[],
            component_count: 1,
        });
        assert!((report.t_repair_rate - 2.0 / 3.0).abs() < 1e-15);
        assert!(!report.zero_denominator.contains(&String::from("t_repair_rate")));
    }
}
