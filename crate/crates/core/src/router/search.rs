use alloc::collections::{BinaryHeap, VecDeque};
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use serde::{Deserialize, Serialize};

use super::cost::{edge_cost, ClassSet, ConstraintClass, EdgeCost};
use super::profile::CostProfile;
use crate::error::{Error, Result};
use crate::geometry::{GeoPoint, Projection};
use crate::network::RoutingGraph;

/// Default waypoint snapping radius, in meters.
pub const SNAP_RADIUS_M: f64 = 100.0;

/// Snaps a waypoint to the nearest graph node within `radius` meters.
/// Returns the node and the snapping distance.
pub fn snap(graph: &RoutingGraph, projection: &Projection, waypoint: GeoPoint, radius: f64) -> Result<(usize, f64)> {
    let local = projection.project_unchecked(waypoint);
    match graph.nearest_node(&local) {
        Some((node, d)) if d <= radius => Ok((node, d)),
        Some((_, d)) => Err(Error::UnroutableWaypoint { nearest_m: d, radius_m: radius }),
        None => Err(Error::UnroutableWaypoint {
            nearest_m: f64::INFINITY,
            radius_m: radius,
        }),
    }
}

/// One traversed edge of a route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteEdge {
    pub edge: usize,
    pub from: usize,
    pub to: usize,
    pub cost: f64,
    pub length: f64,
    /// Distance from the origin to the end of this edge.
    pub cumulative_length: f64,
    /// Elevation of `to`.
    pub elevation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub nodes: Vec<usize>,
    pub edges: Vec<RouteEdge>,
    pub total_cost: f64,
    pub total_length: f64,
    pub max_grade: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64, usize);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Node sequence from the origin to `node` following predecessor links.
fn path_to(pred: &[Option<(usize, usize)>], node: usize) -> Vec<usize> {
    let mut path = alloc::vec![node];
    let mut cur = node;
    while let Some((p, _)) = pred[cur] {
        path.push(p);
        cur = p;
    }
    path.reverse();
    path
}

/// Minimum-cost route from `origin` to `dest`.
///
/// Costs accumulate left to right along the path. Among routes of exactly
/// equal cost the one whose node-id sequence is lexicographically smallest
/// wins, and between parallel edges the lower edge id. The tie-break is
/// exact when every edge cost is positive.
pub fn shortest_path(graph: &RoutingGraph, profile: &CostProfile, origin: usize, dest: usize) -> Result<Route> {
    let n = graph.nodes().len();
    for node in [origin, dest] {
        if node >= n {
            return Err(Error::UnknownNode(node));
        }
    }
    let mut dist = alloc::vec![f64::INFINITY; n];
    let mut pred: Vec<Option<(usize, usize)>> = alloc::vec![None; n];
    let mut settled = alloc::vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[origin] = 0.0;
    heap.push(Reverse(Key(0.0, origin)));

    while let Some(Reverse(Key(d, u))) = heap.pop() {
        if settled[u] || d > dist[u] {
            continue;
        }
        settled[u] = true;
        if u == dest {
            break;
        }
        for &(e, v) in graph.neighbors(u) {
            if settled[v] {
                continue;
            }
            let EdgeCost::Cost(c) = edge_cost(&graph.edges()[e], u, profile) else {
                continue;
            };
            let nd = d + c;
            let better = match nd.total_cmp(&dist[v]) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => match pred[v] {
                    None => false,
                    Some((pu, pe)) if pu == u => e < pe,
                    Some((pu, _)) => {
                        let mut via_u = path_to(&pred, u);
                        let mut via_pu = path_to(&pred, pu);
                        via_u.push(v);
                        via_pu.push(v);
                        via_u < via_pu
                    }
                },
            };
            if better {
                dist[v] = nd;
                pred[v] = Some((u, e));
                heap.push(Reverse(Key(nd, v)));
            }
        }
    }

    if !settled[dest] {
        return Err(Error::NoRoute {
            binding: binding_constraints(graph, profile, origin, dest),
        });
    }
    let nodes = path_to(&pred, dest);
    let mut edges = Vec::with_capacity(nodes.len().saturating_sub(1));
    let mut cumulative = 0.0;
    let mut total_cost = 0.0;
    let mut max_grade: f64 = 0.0;
    for w in nodes.windows(2) {
        let (from, to) = (w[0], w[1]);
        let (_, e) = pred[to].expect("path nodes have predecessors");
        let edge = &graph.edges()[e];
        let cost = edge_cost(edge, from, profile).finite().expect("route edges are traversable");
        cumulative += edge.length;
        total_cost += cost;
        max_grade = max_grade.max(edge.grade);
        edges.push(RouteEdge {
            edge: e,
            from,
            to,
            cost,
            length: edge.length,
            cumulative_length: cumulative,
            elevation: graph.nodes()[to].elevation,
        });
    }
    Ok(Route {
        nodes,
        edges,
        total_cost,
        total_length: cumulative,
        max_grade,
    })
}

fn reachable(graph: &RoutingGraph, profile: &CostProfile, origin: usize, dest: usize, allowed: ClassSet) -> bool {
    let mut seen = alloc::vec![false; graph.nodes().len()];
    let mut queue = VecDeque::from([origin]);
    seen[origin] = true;
    while let Some(u) = queue.pop_front() {
        if u == dest {
            return true;
        }
        for &(e, v) in graph.neighbors(u) {
            if seen[v] {
                continue;
            }
            let passable = match edge_cost(&graph.edges()[e], u, profile) {
                EdgeCost::Cost(_) => true,
                EdgeCost::Excluded(s) => s.is_subset(allowed),
            };
            if passable {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

/// Constraint classes responsible for a missing route.
///
/// Empty when the endpoints lie in different components of the unconstrained
/// graph. Otherwise the classes that alone restore a route, or, when no
/// single class does, every class that excludes some edge of the component.
pub fn binding_constraints(graph: &RoutingGraph, profile: &CostProfile, origin: usize, dest: usize) -> Vec<ConstraintClass> {
    if graph.component_of(origin) != graph.component_of(dest) {
        return Vec::new();
    }
    let single: Vec<ConstraintClass> = ConstraintClass::ALL
        .into_iter()
        .filter(|&c| reachable(graph, profile, origin, dest, ClassSet::EMPTY.with(c)))
        .collect();
    if !single.is_empty() {
        return single;
    }
    let component = graph.component_of(origin);
    let mut present = ClassSet::EMPTY;
    for e in graph.edges().iter().filter(|e| graph.component_of(e.a) == component) {
        for from in [e.a, e.b] {
            if let EdgeCost::Excluded(s) = edge_cost(e, from, profile) {
                for c in ConstraintClass::ALL {
                    if s.contains(c) {
                        present = present.with(c);
                    }
                }
            }
        }
    }
    ConstraintClass::ALL.into_iter().filter(|c| present.contains(*c)).collect()
}
