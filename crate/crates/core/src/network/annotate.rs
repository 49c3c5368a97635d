use alloc::vec::Vec;

use super::graph::RoutingGraph;
use crate::elevation::ElevationGrid;
use crate::error::Result;
use crate::features::{CurbRampSet, FeatureGeometry, PermitSet, SegmentKind};
use crate::geometry::{point_polyline_distance, polyline_distance};
use crate::spatial::{LineGrid, PointGrid};

/// Samples node elevations and sets each edge's signed elevation change
/// (`b` minus `a`) and grade. Without a grid every elevation is zero.
///
/// Sampling failures are reported against the first edge touching the
/// offending node.
pub fn annotate_elevation(graph: &mut RoutingGraph, grid: Option<&ElevationGrid>) -> Result<()> {
    let mut elevation: Vec<Option<f64>> = alloc::vec![None; graph.nodes.len()];
    for e in &graph.edges {
        for n in [e.a, e.b] {
            if elevation[n].is_none() {
                let z = match grid {
                    Some(g) => g.sample(&graph.nodes[n].location).map_err(|err| err.on_edge(e.id))?,
                    None => 0.0,
                };
                elevation[n] = Some(z);
            }
        }
    }
    for (node, z) in graph.nodes.iter_mut().zip(&elevation) {
        node.elevation = z.unwrap_or(0.0);
    }
    for e in &mut graph.edges {
        e.elev_delta = graph.nodes[e.b].elevation - graph.nodes[e.a].elevation;
        e.grade = e.elev_delta.abs() / e.length;
    }
    Ok(())
}

/// Flags each crossing end that has a curb ramp within `radius`
/// (inclusive). Other edge kinds keep both flags false.
pub fn annotate_curb_ramps(graph: &mut RoutingGraph, ramps: &CurbRampSet, radius: f64) {
    let index = PointGrid::new(ramps.points().collect(), radius.max(1.0));
    for e in &mut graph.edges {
        if e.kind == SegmentKind::Crossing {
            e.curb_ramp_a = index.nearest_within(&graph.nodes[e.a].location, radius).is_some();
            e.curb_ramp_b = index.nearest_within(&graph.nodes[e.b].location, radius).is_some();
        } else {
            e.curb_ramp_a = false;
            e.curb_ramp_b = false;
        }
    }
}

/// Attaches the active interval of every sidewalk-impacting permit within
/// `buffer` of an edge. Intervals are kept regardless of date; routing
/// filters them by the trip date.
pub fn annotate_construction(graph: &mut RoutingGraph, permits: &PermitSet, buffer: f64) {
    let index = LineGrid::new(graph.edges.iter().map(|e| &e.geometry), buffer.max(1.0) * 4.0);
    for e in &mut graph.edges {
        e.construction.clear();
    }
    for permit in permits.permits.iter().filter(|p| p.sidewalk_impact) {
        let (probe, reach) = match &permit.geometry {
            FeatureGeometry::Point(p) => (*p, buffer),
            FeatureGeometry::Line(l) => {
                let (min, max) = l.bbox();
                let centre = min.lerp(&max, 0.5);
                (centre, buffer + min.distance(&max) / 2.0)
            }
        };
        for id in index.candidates(&probe, reach) {
            let e = &mut graph.edges[id];
            let d = match &permit.geometry {
                FeatureGeometry::Point(p) => point_polyline_distance(p, &e.geometry),
                FeatureGeometry::Line(l) => polyline_distance(l, &e.geometry),
            };
            if d <= buffer && !e.construction.contains(&permit.active) {
                e.construction.push(permit.active);
            }
        }
    }
    for e in &mut graph.edges {
        e.construction.sort();
    }
}
