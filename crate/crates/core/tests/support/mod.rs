//! Graph builders and an exhaustive path oracle shared by the integration
//! tests.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use walkgraph_core::features::SegmentKind;
use walkgraph_core::network::{GraphEdge, GraphNode, RoutingGraph};
use walkgraph_core::router::{edge_cost, CostProfile, EdgeCost};
use walkgraph_core::{LocalPoint, Polyline};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeSpec {
    pub a: usize,
    pub b: usize,
    pub length: f64,
    pub kind: SegmentKind,
    pub ramps: (bool, bool),
}

impl EdgeSpec {
    pub fn sidewalk(a: usize, b: usize, length: f64) -> EdgeSpec {
        EdgeSpec {
            a,
            b,
            length,
            kind: SegmentKind::Sidewalk,
            ramps: (false, false),
        }
    }
}

fn location(i: usize) -> LocalPoint {
    LocalPoint::new(i as f64 * 10.0, (i % 3) as f64)
}

/// Flat graph whose edges have the given lengths regardless of where the
/// nodes sit.
pub fn graph(n: usize, edges: &[EdgeSpec]) -> RoutingGraph {
    let nodes = (0..n)
        .map(|id| GraphNode {
            id,
            location: location(id),
            elevation: 0.0,
        })
        .collect();
    let edges = edges
        .iter()
        .enumerate()
        .map(|(id, s)| GraphEdge {
            id,
            a: s.a,
            b: s.b,
            geometry: Polyline::segment(location(s.a), location(s.b)).unwrap(),
            kind: s.kind,
            length: s.length,
            elev_delta: 0.0,
            grade: 0.0,
            curb_ramp_a: s.ramps.0,
            curb_ramp_b: s.ramps.1,
            crossed_street: (s.kind == SegmentKind::Crossing).then(|| String::from("street")),
            construction: Vec::new(),
        })
        .collect();
    RoutingGraph::from_parts(nodes, edges).unwrap()
}

/// Random multigraph with 2 to 10 nodes. `integer` draws lengths from
/// 1..=4, which produces many exact ties; crossings get random ramps.
pub fn random_specs(rng: &mut ChaCha8Rng, integer: bool, crossings: bool) -> (usize, Vec<EdgeSpec>) {
    let n = rng.random_range(2..=10);
    let m = rng.random_range(1..=n * 2);
    let mut specs = Vec::new();
    for _ in 0..m {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        let length = if integer { rng.random_range(1..=4) as f64 } else { rng.random_range(0.5..50.0) };
        let kind = if crossings && rng.random_bool(0.4) { SegmentKind::Crossing } else { SegmentKind::Sidewalk };
        let ramps = (rng.random_bool(0.5), rng.random_bool(0.5));
        if a != b {
            specs.push(EdgeSpec { a, b, length, kind, ramps });
        }
    }
    if specs.is_empty() {
        specs.push(EdgeSpec::sidewalk(0, 1, 1.0));
    }
    (n, specs)
}

/// A simple path with its cost summed from the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub cost: f64,
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Every simple path from `o` to `d` over non-excluded edges.
pub fn all_paths(g: &RoutingGraph, p: &CostProfile, o: usize, d: usize) -> Vec<Path> {
    fn walk(g: &RoutingGraph, p: &CostProfile, d: usize, cur: &mut Path, out: &mut Vec<Path>) {
        let u = *cur.nodes.last().unwrap();
        if u == d {
            out.push(cur.clone());
            return;
        }
        for &(e, v) in g.neighbors(u) {
            if cur.nodes.contains(&v) {
                continue;
            }
            if let EdgeCost::Cost(c) = edge_cost(&g.edges()[e], u, p) {
                let before = cur.cost;
                cur.cost += c;
                cur.nodes.push(v);
                cur.edges.push(e);
                walk(g, p, d, cur, out);
                cur.nodes.pop();
                cur.edges.pop();
                cur.cost = before;
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = Path {
        cost: 0.0,
        nodes: vec![o],
        edges: Vec::new(),
    };
    walk(g, p, d, &mut cur, &mut out);
    out
}

/// Cheapest cost over all simple paths.
pub fn min_cost(paths: &[Path]) -> Option<f64> {
    paths.iter().map(|p| p.cost).min_by(f64::total_cmp)
}

/// Edge sequences of every cheapest path, sorted.
pub fn argmin_set(paths: &[Path]) -> Vec<Vec<usize>> {
    let Some(best) = min_cost(paths) else { return Vec::new() };
    let mut set: Vec<Vec<usize>> = paths.iter().filter(|p| p.cost == best).map(|p| p.edges.clone()).collect();
    set.sort();
    set
}
