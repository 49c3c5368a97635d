#[allow(unused_imports)] // std supplies these as inherent methods when linked
use num_traits::Float;
use alloc::vec::Vec;


use super::{connector_feature, greedy_pairs, sidewalk_endpoint_grid, EndpointRef, RepairAction, RepairKind, StreetTopology, TIntersection};
use crate::features::{SegmentKind, SidewalkSet};
use crate::geometry::{angle_between_bearings, bearing, side_of, LocalPoint, Polyline, EPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TNodeReport {
    pub node: usize,
    /// Sidewalk endpoints on the through-street side within range.
    pub candidates: usize,
    pub repaired: usize,
    /// Candidate pairs that already touch.
    pub already_joined: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TRepairResult {
    /// Input features followed by the new `t_connector` features.
    pub sidewalks: SidewalkSet,
    pub actions: Vec<RepairAction>,
    pub nodes: Vec<TNodeReport>,
}

/// Closes sidewalk gaps on the far side of T-intersections.
///
/// At each T-node the sidewalk running along the two through streets, on the
/// side away from the stem, should be continuous. Endpoints there that lie
/// within `max_gap` of the node and of each other, and whose connector runs
/// within `max_skew_deg` of the through street, are joined closest pair first.
pub fn repair_t_gaps(sidewalks: &SidewalkSet, topo: &StreetTopology, t_nodes: &[TIntersection], max_gap: f64, max_skew_deg: f64) -> TRepairResult {
    let grid = sidewalk_endpoint_grid(sidewalks, max_gap.max(1.0));
    let mut used: Vec<bool> = alloc::vec![false; sidewalks.len() * 2];
    let mut out = sidewalks.clone();
    let mut actions = Vec::new();
    let mut reports = Vec::new();

    let mut ordered: Vec<&TIntersection> = t_nodes.iter().collect();
    ordered.sort_by_key(|t| t.node);
    for t in ordered {
        let node = &topo.nodes[t.node];
        let axis = node.incident[t.through.0].bearing;
        let stem_bearing = node.incident[t.stem].bearing.to_radians();
        let stem_probe = LocalPoint::new(node.location.x + stem_bearing.sin(), node.location.y + stem_bearing.cos());
        let stem_side = side_of(&node.location, axis, &stem_probe);

        let candidates: Vec<EndpointRef> = grid
            .within(&node.location, max_gap)
            .into_iter()
            .map(EndpointRef::from_index)
            .filter(|e| !used[e.index()] && sidewalks.features[e.feature].kind() == SegmentKind::Sidewalk)
            .filter(|e| {
                let s = side_of(&node.location, axis, &e.locate(sidewalks));
                s.abs() > EPS && s * stem_side < 0.0
            })
            .collect();

        let mut report = TNodeReport {
            node: t.node,
            candidates: candidates.len(),
            repaired: 0,
            already_joined: 0,
        };
        let mut pairs = Vec::new();
        for (i, a) in candidates.iter().enumerate() {
            for b in &candidates[i + 1..] {
                if a.feature == b.feature {
                    continue;
                }
                let (pa, pb) = (a.locate(sidewalks), b.locate(sidewalks));
                let gap = pa.distance(&pb);
                if gap <= EPS {
                    report.already_joined += 1;
                    used[a.index()] = true;
                    used[b.index()] = true;
                    continue;
                }
                if gap > max_gap {
                    continue;
                }
                let Ok(dir) = bearing(&pa, &pb) else { continue };
                let sep = angle_between_bearings(dir, axis);
                if sep.min(180.0 - sep) > max_skew_deg {
                    continue;
                }
                pairs.push((gap, *a, *b));
            }
        }
        pairs.retain(|(_, a, b)| !used[a.index()] && !used[b.index()]);
        for (gap, a, b) in greedy_pairs(pairs) {
            let Ok(geometry) = Polyline::segment(a.locate(sidewalks), b.locate(sidewalks)) else { continue };
            used[a.index()] = true;
            used[b.index()] = true;
            let action = RepairAction {
                kind: RepairKind::TRepair,
                geometry,
                joined: (a, b),
                gap_m: gap,
                node: t.node,
            };
            out.features.push(connector_feature(&action, report.repaired));
            report.repaired += 1;
            actions.push(action);
        }
        reports.push(report);
    }

    TRepairResult {
        sidewalks: out,
        actions,
        nodes: reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::denoise::{build_street_topology, detect_t_intersections};
    use crate::features::{LineFeature, StreetSet};

    fn line(id: &str, pts: &[(f64, f64)]) -> LineFeature {
        LineFeature::new(id, Polyline::new(pts.iter().map(|&(x, y)| LocalPoint::new(x, y)).collect()).unwrap())
    }

    /// Through street along y = 0, stem going north from the origin.
    fn t_streets() -> StreetSet {
        StreetSet::new(vec![
            line("west", &[(-100.0, 0.0), (0.0, 0.0)]),
            line("east", &[(0.0, 0.0), (100.0, 0.0)]),
            line("stem", &[(0.0, 0.0), (0.0, 100.0)]),
        ])
    }

    fn far_side(half_gap: f64) -> SidewalkSet {
        SidewalkSet::new(vec![
            line("sw_left", &[(-95.0, -5.0), (-half_gap, -5.0)]),
            line("sw_right", &[(half_gap, -5.0), (95.0, -5.0)]),
        ])
    }

    fn run(sidewalks: &SidewalkSet) -> TRepairResult {
        let topo = build_street_topology(&t_streets(), 0.5).unwrap();
        let ts = detect_t_intersections(&topo.nodes);
        assert_eq!(ts.len(), 1);
        repair_t_gaps(sidewalks, &topo, &ts, 30.48, 45.0)
    }

    #[test]
    fn ten_meter_gap_gets_one_connector() {
        let res = run(&far_side(5.0));
        assert_eq!(res.actions.len(), 1);
        assert_eq!(res.actions[0].gap_m, 10.0);
        assert_eq!(res.actions[0].geometry.length(), 10.0);
        assert_eq!(res.sidewalks.len(), 3);
        assert_eq!(res.sidewalks.features[2].kind(), SegmentKind::TConnector);
        // Input geometry is untouched.
        assert_eq!(&res.sidewalks.features[..2], &far_side(5.0).features[..]);
    }

    #[test]
    fn gap_threshold_is_inclusive_at_100_feet() {
        assert_eq!(run(&far_side(15.24)).actions.len(), 1);
        assert_eq!(run(&far_side(15.245)).actions.len(), 0);
        assert_eq!(run(&far_side(20.0)).actions.len(), 0);
    }

    #[test]
    fn stem_side_is_left_alone() {
        let sidewalks = SidewalkSet::new(vec![line("a", &[(-95.0, 5.0), (-5.0, 5.0)]), line("b", &[(5.0, 5.0), (95.0, 5.0)])]);
        let res = run(&sidewalks);
        assert!(res.actions.is_empty());
        assert_eq!(res.nodes[0].candidates, 0);
    }

    #[test]
    fn nothing_nearby() {
        let sidewalks = SidewalkSet::new(vec![line("a", &[(-95.0, -60.0), (-50.0, -60.0)])]);
        let res = run(&sidewalks);
        assert!(res.actions.is_empty());
        assert_eq!(res.sidewalks, sidewalks);
    }

    #[test]
    fn touching_ends_count_as_joined() {
        let res = run(&far_side(0.0));
        assert!(res.actions.is_empty());
        assert_eq!(res.nodes[0].already_joined, 1);
    }

    #[test]
    fn connectors_end_on_recorded_endpoints() {
        let res = run(&far_side(7.0));
        for a in &res.actions {
            assert!(a.gap_m <= 30.48);
            assert!(a.geometry.first().coincides(&a.joined.0.locate(&res.sidewalks)));
            assert!(a.geometry.last().coincides(&a.joined.1.locate(&res.sidewalks)));
        }
    }
}
