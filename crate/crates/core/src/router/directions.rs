use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::search::Route;
use crate::features::SegmentKind;
use crate::geometry::{bearing, signed_turn, LocalPoint};
use crate::network::RoutingGraph;

/// Heading change, in degrees, that starts a new turn step.
pub const TURN_THRESHOLD_DEG: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Maneuver {
    Depart,
    Continue,
    TurnLeft,
    TurnRight,
    CrossStreet,
    Arrive,
}

/// One instruction covering consecutive route edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub maneuver: Maneuver,
    pub instruction: String,
    pub length: f64,
    /// Graph edge ids in travel order.
    pub edges: Vec<usize>,
}

fn end_bearings(points: &[LocalPoint]) -> (Option<f64>, Option<f64>) {
    let start = points.windows(2).find_map(|w| bearing(&w[0], &w[1]).ok());
    let end = points.windows(2).rev().find_map(|w| bearing(&w[0], &w[1]).ok());
    (start, end)
}

fn describe(maneuver: Maneuver, street: Option<&str>, length: f64) -> String {
    let meters = (length + 0.5) as u64;
    match maneuver {
        Maneuver::Depart => alloc::format!("Depart and continue for {meters} m"),
        Maneuver::Continue => alloc::format!("Continue for {meters} m"),
        Maneuver::TurnLeft => alloc::format!("Turn left and continue for {meters} m"),
        Maneuver::TurnRight => alloc::format!("Turn right and continue for {meters} m"),
        Maneuver::CrossStreet => match street {
            Some(s) if !s.is_empty() => alloc::format!("Cross {s} ({meters} m)"),
            _ => alloc::format!("Cross the street ({meters} m)"),
        },
        Maneuver::Arrive => String::from("Arrive at destination"),
    }
}

/// Groups a route into steps.
///
/// The first step departs along the first edge, or is empty when the route
/// starts with a crossing. Each crossing is its own step. After a crossing,
/// and wherever the heading changes by at least the turn threshold, a new
/// continue or turn step begins; smaller bends extend the current step. A
/// zero-length arrive step closes the list.
pub fn directions(graph: &RoutingGraph, route: &Route) -> Vec<Step> {
    let mut steps: Vec<Step> = Vec::new();
    let mut prev_heading: Option<f64> = None;
    let mut prev_crossing = false;
    if route.edges.is_empty() {
        steps.push(Step {
            maneuver: Maneuver::Depart,
            instruction: String::new(),
            length: 0.0,
            edges: Vec::new(),
        });
    }
    for (i, re) in route.edges.iter().enumerate() {
        let edge = &graph.edges()[re.edge];
        let geometry = edge.geometry_from(re.from);
        let (start, end) = end_bearings(geometry.points());
        let crossing = edge.kind == SegmentKind::Crossing;
        let turn = match (prev_heading, start) {
            (Some(a), Some(b)) => signed_turn(a, b),
            _ => 0.0,
        };
        let maneuver = if i == 0 {
            if crossing {
                steps.push(Step {
                    maneuver: Maneuver::Depart,
                    instruction: String::new(),
                    length: 0.0,
                    edges: Vec::new(),
                });
                Some(Maneuver::CrossStreet)
            } else {
                Some(Maneuver::Depart)
            }
        } else if crossing {
            Some(Maneuver::CrossStreet)
        } else if turn >= TURN_THRESHOLD_DEG {
            Some(Maneuver::TurnRight)
        } else if turn <= -TURN_THRESHOLD_DEG {
            Some(Maneuver::TurnLeft)
        } else if prev_crossing {
            Some(Maneuver::Continue)
        } else {
            None
        };
        match maneuver {
            Some(m) => steps.push(Step {
                maneuver: m,
                instruction: String::new(),
                length: re.length,
                edges: alloc::vec![re.edge],
            }),
            None => {
                let step = steps.last_mut().expect("a step precedes every continuation");
                step.length += re.length;
                step.edges.push(re.edge);
            }
        }
        if end.is_some() {
            prev_heading = end;
        }
        prev_crossing = crossing;
    }
    steps.push(Step {
        maneuver: Maneuver::Arrive,
        instruction: String::new(),
        length: 0.0,
        edges: Vec::new(),
    });
    for step in &mut steps {
        if step.maneuver == Maneuver::Depart && step.edges.is_empty() {
            step.instruction = String::from("Depart");
            continue;
        }
        let street = step.edges.first().and_then(|&e| graph.edges()[e].crossed_street.as_deref());
        step.instruction = describe(step.maneuver, street, step.length);
    }
    steps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Polyline;
    use crate::network::{assemble_graph, EdgeDraft};
    use crate::router::{shortest_path, CostProfile};

    fn draft(pts: &[(f64, f64)], kind: SegmentKind, street: Option<&str>) -> EdgeDraft {
        EdgeDraft {
            geometry: Polyline::new(pts.iter().map(|&(x, y)| LocalPoint::new(x, y)).collect()).unwrap(),
            kind,
            crossed_street: street.map(String::from),
        }
    }

    fn route_steps(drafts: &[EdgeDraft], from: LocalPoint, to: LocalPoint) -> Vec<Step> {
        let g = assemble_graph(drafts, 0.01).unwrap();
        let o = g.nearest_node(&from).unwrap().0;
        let d = g.nearest_node(&to).unwrap().0;
        let r = shortest_path(&g, &CostProfile::default(), o, d).unwrap();
        directions(&g, &r)
    }

    fn maneuvers(steps: &[Step]) -> Vec<Maneuver> {
        steps.iter().map(|s| s.maneuver).collect()
    }

    #[test]
    fn straight_walk_with_a_crossing() {
        // North along a sidewalk, across a street, and on north.
        let steps = route_steps(
            &[
                draft(&[(0.0, 0.0), (0.0, 50.0)], SegmentKind::Sidewalk, None),
                draft(&[(0.0, 50.0), (0.0, 60.0)], SegmentKind::Crossing, Some("Pine St")),
                draft(&[(0.0, 60.0), (0.0, 90.0)], SegmentKind::Sidewalk, None),
                draft(&[(0.0, 90.0), (0.0, 120.0)], SegmentKind::Sidewalk, None),
            ],
            LocalPoint::new(0.0, 0.0),
            LocalPoint::new(0.0, 120.0),
        );
        assert_eq!(maneuvers(&steps), [Maneuver::Depart, Maneuver::CrossStreet, Maneuver::Continue, Maneuver::Arrive]);
        assert_eq!(steps[1].instruction, "Cross Pine St (10 m)");
        assert_eq!(steps[2].length, 60.0);
        assert_eq!(steps[2].edges.len(), 2);
        assert_eq!(steps[3].length, 0.0);
    }

    #[test]
    fn left_and_right_turns() {
        // North, then east (right), then north again (left).
        let steps = route_steps(
            &[
                draft(&[(0.0, 0.0), (0.0, 40.0)], SegmentKind::Sidewalk, None),
                draft(&[(0.0, 40.0), (30.0, 40.0)], SegmentKind::Sidewalk, None),
                draft(&[(30.0, 40.0), (30.0, 80.0)], SegmentKind::Sidewalk, None),
            ],
            LocalPoint::new(0.0, 0.0),
            LocalPoint::new(30.0, 80.0),
        );
        assert_eq!(maneuvers(&steps), [Maneuver::Depart, Maneuver::TurnRight, Maneuver::TurnLeft, Maneuver::Arrive]);
        assert_eq!(steps[1].instruction, "Turn right and continue for 30 m");
    }

    #[test]
    fn gentle_bends_extend_the_step() {
        let steps = route_steps(
            &[
                draft(&[(0.0, 0.0), (0.0, 40.0)], SegmentKind::Sidewalk, None),
                draft(&[(0.0, 40.0), (10.0, 80.0)], SegmentKind::Sidewalk, None),
            ],
            LocalPoint::new(0.0, 0.0),
            LocalPoint::new(10.0, 80.0),
        );
        assert_eq!(maneuvers(&steps), [Maneuver::Depart, Maneuver::Arrive]);
        assert_eq!(steps[0].edges.len(), 2);
    }

    #[test]
    fn route_starting_with_a_crossing() {
        let steps = route_steps(
            &[
                draft(&[(0.0, 0.0), (0.0, 10.0)], SegmentKind::Crossing, Some("Oak Ave")),
                draft(&[(0.0, 10.0), (0.0, 50.0)], SegmentKind::Sidewalk, None),
            ],
            LocalPoint::new(0.0, 0.0),
            LocalPoint::new(0.0, 50.0),
        );
        assert_eq!(maneuvers(&steps), [Maneuver::Depart, Maneuver::CrossStreet, Maneuver::Continue, Maneuver::Arrive]);
        assert!(steps[0].edges.is_empty());
        assert_eq!(steps[0].length, 0.0);
    }

    #[test]
    fn empty_route_is_depart_then_arrive() {
        let g = assemble_graph(&[draft(&[(0.0, 0.0), (0.0, 10.0)], SegmentKind::Sidewalk, None)], 0.01).unwrap();
        let r = shortest_path(&g, &CostProfile::default(), 0, 0).unwrap();
        let steps = directions(&g, &r);
        assert_eq!(maneuvers(&steps), [Maneuver::Depart, Maneuver::Arrive]);
    }

    #[test]
    fn step_lengths_sum_to_the_route_length() {
        let steps = route_steps(
            &[
                draft(&[(0.0, 0.0), (0.0, 40.0)], SegmentKind::Sidewalk, None),
                draft(&[(0.0, 40.0), (0.0, 52.0)], SegmentKind::Crossing, Some("A St")),
                draft(&[(0.0, 52.0), (30.0, 52.0)], SegmentKind::Sidewalk, None),
                draft(&[(30.0, 52.0), (30.0, 90.0)], SegmentKind::Sidewalk, None),
            ],
            LocalPoint::new(0.0, 0.0),
            LocalPoint::new(30.0, 90.0),
        );
        let total: f64 = steps.iter().map(|s| s.length).sum();
        assert!((total - 120.0).abs() < 1e-9);
    }
}
