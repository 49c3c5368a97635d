//! End-to-end network build: de-noising, crossings, assembly, annotation and
//! the coverage report, in one call.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::denoise::{
    block_connectivity, build_street_topology, classify_corner_endpoints, connect_block_corners, detect_t_intersections, extract_blocks,
    repair_t_gaps, BlockConnectivity, CornerSector, DenoiseConfig, RepairAction, SectorReport, StreetTopology, TNodeReport,
};
use crate::elevation::ElevationGrid;
use crate::error::{Error, Result};
use crate::features::{CurbRampSet, PermitSet, SidewalkSet, StreetSet};
use crate::network::{
    annotate_construction, annotate_curb_ramps, annotate_elevation, assemble_graph, coverage_report, edge_drafts, generate_crossings,
    CoverageInputs, CoverageReport, Crossing, NetworkConfig, RoutingGraph,
};
use crate::spatial::PointGrid;

/// Curb ramps farther than this from every sidewalk endpoint are orphans.
pub const ORPHAN_RAMP_DISTANCE_M: f64 = 50.0;

/// Every threshold of the build, with defaults.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BuildConfig {
    pub denoise: DenoiseConfig,
    pub network: NetworkConfig,
}

/// Input datasets, already projected.
#[derive(Debug, Clone, Copy)]
pub struct BuildInputs<'a> {
    pub streets: &'a StreetSet,
    pub sidewalks: &'a SidewalkSet,
    pub curb_ramps: &'a CurbRampSet,
    pub elevation: Option<&'a ElevationGrid>,
    pub permits: &'a PermitSet,
}

/// Non-fatal findings about the inputs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Ids of curb ramps with no sidewalk endpoint within
    /// [`ORPHAN_RAMP_DISTANCE_M`].
    pub orphan_ramps: Vec<String>,
}

/// Everything a build produces, including intermediate results used for
/// auditing and evaluation.
#[derive(Debug, Clone)]
pub struct BuildOutput {
    pub graph: RoutingGraph,
    pub coverage: CoverageReport,
    pub validation: ValidationReport,
    pub topology: StreetTopology,
    /// Input sidewalks followed by T connectors and then corner connectors.
    pub sidewalks: SidewalkSet,
    /// T repairs followed by corner connections.
    pub repairs: Vec<RepairAction>,
    pub t_nodes: Vec<TNodeReport>,
    pub sectors: Vec<CornerSector>,
    pub sector_reports: Vec<SectorReport>,
    pub blocks: BlockConnectivity,
    pub crossings: Vec<Crossing>,
}

/// Ids of ramps with no input sidewalk endpoint within the orphan distance.
pub fn orphan_ramps(sidewalks: &SidewalkSet, ramps: &CurbRampSet) -> Vec<String> {
    let grid = PointGrid::new(sidewalks.iter().flat_map(|f| [f.line.first(), f.line.last()]).collect(), ORPHAN_RAMP_DISTANCE_M);
    ramps
        .features
        .iter()
        .filter(|r| grid.nearest_within(&r.point, ORPHAN_RAMP_DISTANCE_M).is_none())
        .map(|r| r.id.clone())
        .collect()
}

/// Runs the whole build.
///
/// Order: street topology, T-gap repair, corner classification on the
/// repaired set, corner connection, block census, crossings, assembly, then
/// elevation, curb-ramp and construction annotation.
pub fn build_network(inputs: &BuildInputs<'_>, config: &BuildConfig) -> Result<BuildOutput> {
    let d = &config.denoise;
    let n = &config.network;
    if inputs.sidewalks.is_empty() {
        return Err(Error::EmptyDataset("sidewalks"));
    }
    let topology = build_street_topology(inputs.streets, d.snap_tol)?;
    let t_found = detect_t_intersections(&topology.nodes);
    let t = repair_t_gaps(inputs.sidewalks, &topology, &t_found, d.t_max_gap, d.t_max_skew_deg);
    let sectors = classify_corner_endpoints(&t.sidewalks, &topology, d.corner_radius);
    let corners = connect_block_corners(&t.sidewalks, &sectors, d.max_connect);

    let t_connectors = t.actions.len();
    let corner_connectors = corners.actions.len();
    let mut repairs = t.actions;
    repairs.extend(corners.actions);

    let sidewalks = corners.sidewalks;
    let block_faces = extract_blocks(inputs.streets, &topology);
    let blocks = block_connectivity(&sidewalks, &repairs, &block_faces, n.merge_tol);

    let crossings = generate_crossings(&sidewalks, inputs.streets, &topology, &sectors, n.max_cross);
    let drafts = edge_drafts(&sidewalks, &crossings);
    let mut graph = assemble_graph(&drafts, n.merge_tol)?;
    annotate_elevation(&mut graph, inputs.elevation)?;
    annotate_curb_ramps(&mut graph, inputs.curb_ramps, n.ramp_radius);
    annotate_construction(&mut graph, inputs.permits, n.construction_buffer);

    let coverage = coverage_report(&CoverageInputs {
        t_nodes: &t.nodes,
        t_connectors,
        corner_sectors: &sectors,
        corner_reports: &corners.sectors,
        corner_connectors,
        blocks: &blocks,
        crossings: &crossings,
        component_count: graph.component_count(),
    });
    Ok(BuildOutput {
        graph,
        coverage,
        validation: ValidationReport {
            orphan_ramps: orphan_ramps(inputs.sidewalks, inputs.curb_ramps),
        },
        topology,
        sidewalks,
        repairs,
        t_nodes: t.nodes,
        sectors,
        sector_reports: corners.sectors,
        blocks,
        crossings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{LineFeature, PointFeature, Properties};
    use crate::geometry::{LocalPoint, Polyline};

    fn line(id: &str, pts: &[(f64, f64)]) -> LineFeature {
        LineFeature::new(id, Polyline::new(pts.iter().map(|&(x, y)| LocalPoint::new(x, y)).collect()).unwrap())
    }

    /// A plus-shaped intersection with an L of sidewalk in each quadrant.
    fn plus() -> (StreetSet, SidewalkSet) {
        let streets = StreetSet::new(vec![
            line("n", &[(0.0, 0.0), (0.0, 100.0)]),
            line("e", &[(0.0, 0.0), (100.0, 0.0)]),
            line("s", &[(0.0, 0.0), (0.0, -100.0)]),
            line("w", &[(0.0, 0.0), (-100.0, 0.0)]),
        ]);
        let mut sw = Vec::new();
        for (i, (sx, sy)) in [(1.0, 1.0), (1.0, -1.0), (-1.0, -1.0), (-1.0, 1.0)].into_iter().enumerate() {
            sw.push(line(&alloc::format!("a{i}"), &[(5.0 * sx, 5.0 * sy), (5.0 * sx, 90.0 * sy)]));
            sw.push(line(&alloc::format!("b{i}"), &[(5.0 * sx, 5.0 * sy), (90.0 * sx, 5.0 * sy)]));
        }
        (streets, SidewalkSet::new(sw))
    }

    #[test]
    fn builds_a_single_component() {
        let (streets, sidewalks) = plus();
        let ramps = CurbRampSet::new(vec![PointFeature {
            id: "far".into(),
            point: LocalPoint::new(500.0, 500.0),
            properties: Properties::new(),
        }]);
        let out = build_network(
            &BuildInputs {
                streets: &streets,
                sidewalks: &sidewalks,
                curb_ramps: &ramps,
                elevation: None,
                permits: &PermitSet::default(),
            },
            &BuildConfig::default(),
        )
        .unwrap();
        assert_eq!(out.graph.component_count(), 1);
        assert_eq!(out.crossings.len(), 4);
        assert_eq!(out.coverage.crossing_corner_rate, 1.0);
        assert_eq!(out.validation.orphan_ramps, ["far"]);
    }

    #[test]
    fn no_sidewalks_is_an_error() {
        let (streets, _) = plus();
        let err = build_network(
            &BuildInputs {
                streets: &streets,
                sidewalks: &SidewalkSet::default(),
                curb_ramps: &CurbRampSet::default(),
                elevation: None,
                permits: &PermitSet::default(),
            },
            &BuildConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::EmptyDataset("sidewalks")));
    }
}
