use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{DateInterval, SegmentKind};
use crate::geometry::{LocalPoint, Polyline, EPS};
use crate::spatial::PointGrid;

/// Cell size of the node index, in meters.
const NODE_INDEX_CELL: f64 = 25.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: usize,
    pub location: LocalPoint,
    /// Meters; zero when no elevation grid was supplied.
    pub elevation: f64,
}

/// Undirected edge between nodes `a` and `b`. Geometry runs from `a` to `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub id: usize,
    pub a: usize,
    pub b: usize,
    pub geometry: Polyline,
    pub kind: SegmentKind,
    pub length: f64,
    /// Elevation at `b` minus elevation at `a`.
    pub elev_delta: f64,
    pub grade: f64,
    /// Curb ramp presence at each end; only set on crossings.
    pub curb_ramp_a: bool,
    pub curb_ramp_b: bool,
    pub crossed_street: Option<String>,
    pub construction: Vec<DateInterval>,
}

impl GraphEdge {
    /// The node at the other end from `node`.
    pub fn other(&self, node: usize) -> usize {
        if node == self.a {
            self.b
        } else {
            self.a
        }
    }

    /// Elevation change when traversing away from `from`.
    pub fn elev_delta_from(&self, from: usize) -> f64 {
        if from == self.a {
            self.elev_delta
        } else {
            -self.elev_delta
        }
    }

    /// Curb ramp flags as `(entry, exit)` when traversing away from `from`.
    pub fn ramps_from(&self, from: usize) -> (bool, bool) {
        if from == self.a {
            (self.curb_ramp_a, self.curb_ramp_b)
        } else {
            (self.curb_ramp_b, self.curb_ramp_a)
        }
    }

    /// Geometry oriented away from `from`.
    pub fn geometry_from(&self, from: usize) -> Polyline {
        if from == self.a {
            self.geometry.clone()
        } else {
            self.geometry.reversed()
        }
    }
}

/// Unassembled edge: geometry plus the attributes known before node merging.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeDraft {
    pub geometry: Polyline,
    pub kind: SegmentKind,
    pub crossed_street: Option<String>,
}

/// Immutable undirected routing graph with adjacency and node indices.
#[derive(Debug, Clone)]
pub struct RoutingGraph {
    pub(crate) nodes: Vec<GraphNode>,
    pub(crate) edges: Vec<GraphEdge>,
    /// `(edge, neighbour)` pairs per node, in edge id order.
    adjacency: Vec<Vec<(usize, usize)>>,
    index: PointGrid,
    component: Vec<usize>,
    component_count: usize,
}

impl PartialEq for RoutingGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl RoutingGraph {
    /// Validates nodes and edges and builds the indices.
    pub fn from_parts(nodes: Vec<GraphNode>, edges: Vec<GraphEdge>) -> Result<Self> {
        for (i, n) in nodes.iter().enumerate() {
            if n.id != i {
                return Err(Error::InvalidGraph(alloc::format!("node at position {i} has id {}", n.id)));
            }
        }
        let mut adjacency: Vec<Vec<(usize, usize)>> = alloc::vec![Vec::new(); nodes.len()];
        for (i, e) in edges.iter().enumerate() {
            if e.id != i {
                return Err(Error::InvalidGraph(alloc::format!("edge at position {i} has id {}", e.id)));
            }
            if e.a >= nodes.len() || e.b >= nodes.len() || e.a == e.b {
                return Err(Error::InvalidGraph(alloc::format!("edge {i} has invalid endpoints ({}, {})", e.a, e.b)));
            }
            if !(e.length > 0.0) || !(e.grade >= 0.0) {
                return Err(Error::InvalidGraph(alloc::format!("edge {i} has invalid length or grade")));
            }
            if e.geometry.first().distance(&nodes[e.a].location) > EPS || e.geometry.last().distance(&nodes[e.b].location) > EPS {
                return Err(Error::InvalidGraph(alloc::format!("edge {i} geometry does not end on its nodes")));
            }
            adjacency[e.a].push((i, e.b));
            adjacency[e.b].push((i, e.a));
        }

        let mut parent: Vec<usize> = (0..nodes.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for e in &edges {
            let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut label: Vec<Option<usize>> = alloc::vec![None; nodes.len()];
        let mut component = Vec::with_capacity(nodes.len());
        let mut component_count = 0;
        for i in 0..nodes.len() {
            let r = find(&mut parent, i);
            let c = *label[r].get_or_insert_with(|| {
                component_count += 1;
                component_count - 1
            });
            component.push(c);
        }

        let index = PointGrid::new(nodes.iter().map(|n| n.location).collect(), NODE_INDEX_CELL);
        Ok(RoutingGraph {
            nodes,
            edges,
            adjacency,
            index,
            component,
            component_count,
        })
    }

    pub fn nodes(&self) -> &[GraphNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn node(&self, id: usize) -> Option<&GraphNode> {
        self.nodes.get(id)
    }

    pub fn edge(&self, id: usize) -> Option<&GraphEdge> {
        self.edges.get(id)
    }

    /// `(edge id, neighbour id)` pairs incident to `node`.
    pub fn neighbors(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    /// Nodes within `radius` (inclusive) of `p`, sorted by id.
    pub fn nodes_within(&self, p: &LocalPoint, radius: f64) -> Vec<usize> {
        self.index.within(p, radius)
    }

    /// Nearest node within `radius`; ties go to the lowest id.
    pub fn nearest_node_within(&self, p: &LocalPoint, radius: f64) -> Option<(usize, f64)> {
        self.index.nearest_within(p, radius)
    }

    pub fn nearest_node(&self, p: &LocalPoint) -> Option<(usize, f64)> {
        self.index.nearest(p)
    }

    pub fn component_of(&self, node: usize) -> usize {
        self.component[node]
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    /// Node counts of each component, indexed by component id.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut sizes = alloc::vec![0; self.component_count];
        for &c in &self.component {
            sizes[c] += 1;
        }
        sizes
    }

    /// The graph's edges as drafts, for reassembly.
    pub fn drafts(&self) -> Vec<EdgeDraft> {
        self.edges
            .iter()
            .map(|e| EdgeDraft {
                geometry: e.geometry.clone(),
                kind: e.kind,
                crossed_street: e.crossed_street.clone(),
            })
            .collect()
    }
}

/// Arc-length position `d` along `line` as a `(segment, t)` cut.
fn cut_at_length(line: &Polyline, d: f64) -> (usize, f64) {
    let mut remaining = d;
    let n = line.points().len() - 1;
    for (i, (a, b)) in line.segments().enumerate() {
        let len = a.distance(&b);
        if remaining <= len || i + 1 == n {
            return (i, (remaining / len).clamp(0.0, 1.0));
        }
        remaining -= len;
    }
    unreachable!("polyline has at least one segment")
}

/// Merges draft endpoints closer than `merge_tol` into nodes and builds the
/// graph.
///
/// Each node sits at the first draft endpoint of its cluster and edge
/// geometry is snapped onto it. Edges that collapse onto one node are
/// dropped, as are repeats of an edge with the same end nodes and kind.
/// Closed loops are first split in three so they survive as a triangle. Node
/// ids follow first use by the surviving edges, which makes reassembling
/// an assembled graph a no-op.
pub fn assemble_graph(drafts: &[EdgeDraft], merge_tol: f64) -> Result<RoutingGraph> {
    if drafts.is_empty() {
        return Err(Error::EmptyDataset("edge set"));
    }
    let mut parts: Vec<EdgeDraft> = Vec::with_capacity(drafts.len());
    for d in drafts {
        if d.geometry.first().distance(&d.geometry.last()) <= merge_tol {
            // Thirds, since halves would form a duplicate pair of edges.
            let len = d.geometry.length();
            let cuts = [cut_at_length(&d.geometry, len / 3.0), cut_at_length(&d.geometry, 2.0 * len / 3.0)];
            for geometry in d.geometry.split_at(&cuts) {
                parts.push(EdgeDraft { geometry, ..d.clone() });
            }
        } else {
            parts.push(d.clone());
        }
    }

    let endpoints: Vec<LocalPoint> = parts.iter().flat_map(|d| [d.geometry.first(), d.geometry.last()]).collect();
    let grid = PointGrid::new(endpoints.clone(), merge_tol.max(1e-3) * 4.0);
    let mut parent: Vec<usize> = (0..endpoints.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, p) in endpoints.iter().enumerate() {
        for j in grid.within(p, merge_tol) {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }

    let mut node_of_root: Vec<Option<usize>> = alloc::vec![None; endpoints.len()];
    let mut nodes: Vec<GraphNode> = Vec::new();
    let mut edges: Vec<GraphEdge> = Vec::new();
    let mut seen: Vec<(usize, usize, SegmentKind)> = Vec::new();
    for (i, d) in parts.iter().enumerate() {
        let (ra, rb) = (find(&mut parent, 2 * i), find(&mut parent, 2 * i + 1));
        if ra == rb {
            continue;
        }
        let key = (ra.min(rb), ra.max(rb), d.kind);
        if seen.contains(&key) {
            continue;
        }
        let mut pts = d.geometry.points().to_vec();
        let last = pts.len() - 1;
        pts[0] = endpoints[ra];
        pts[last] = endpoints[rb];
        let Ok(geometry) = Polyline::new_dedup(pts) else { continue };
        seen.push(key);
        let mut node_id = |root: usize| {
            *node_of_root[root].get_or_insert_with(|| {
                nodes.push(GraphNode {
                    id: nodes.len(),
                    location: endpoints[root],
                    elevation: 0.0,
                });
                nodes.len() - 1
            })
        };
        let (a, b) = (node_id(ra), node_id(rb));
        edges.push(GraphEdge {
            id: edges.len(),
            a,
            b,
            length: geometry.length(),
            geometry,
            kind: d.kind,
            elev_delta: 0.0,
            grade: 0.0,
            curb_ramp_a: false,
            curb_ramp_b: false,
            crossed_street: d.crossed_street.clone(),
            construction: Vec::new(),
        });
    }
    if edges.is_empty() {
        return Err(Error::EmptyDataset("edge set"));
    }
    RoutingGraph::from_parts(nodes, edges)
}
