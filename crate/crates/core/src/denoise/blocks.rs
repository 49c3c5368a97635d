use alloc::vec::Vec;

use super::{RepairAction, StreetTopology};
use crate::features::{SegmentKind, SidewalkSet, StreetSet};
use crate::geometry::{point_in_ring, ring_area, LocalPoint, EPS};
use crate::spatial::PointGrid;

/// A city block: a bounded face of the planar street graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub id: usize,
    /// Counter-clockwise boundary ring (not closed).
    pub ring: Vec<LocalPoint>,
    pub area: f64,
    pub bbox: (LocalPoint, LocalPoint),
}

impl Block {
    pub fn contains(&self, p: &LocalPoint) -> bool {
        p.x >= self.bbox.0.x && p.x <= self.bbox.1.x && p.y >= self.bbox.0.y && p.y <= self.bbox.1.y && point_in_ring(p, &self.ring)
    }
}

/// Traces the faces of the street graph and returns the bounded ones.
///
/// Half-edge `2 * s` runs street `s` forwards and `2 * s + 1` backwards.
/// Walking always takes the next street clockwise from the one we arrived
/// by, which keeps the face on the left; bounded faces come out
/// counter-clockwise with positive area.
pub fn extract_blocks(streets: &StreetSet, topo: &StreetTopology) -> Vec<Block> {
    let n_half = streets.len() * 2;
    // Outgoing half-edges at each node, clockwise.
    let mut outgoing: Vec<Vec<usize>> = alloc::vec![Vec::new(); topo.nodes.len()];
    for node in &topo.nodes {
        outgoing[node.id] = node.incident.iter().map(|inc| inc.street * 2 + inc.end as usize).collect();
    }
    let head = |h: usize| topo.street_ends[h / 2][1 - h % 2];

    let mut visited = alloc::vec![false; n_half];
    let mut blocks = Vec::new();
    for start in 0..n_half {
        if visited[start] {
            continue;
        }
        let mut ring: Vec<LocalPoint> = Vec::new();
        let mut h = start;
        let mut steps = 0;
        while !visited[h] && steps <= n_half {
            visited[h] = true;
            steps += 1;
            let line = &streets.features[h / 2].line;
            let pts = line.points();
            let iter: Vec<LocalPoint> = if h % 2 == 0 { pts.to_vec() } else { pts.iter().rev().copied().collect() };
            for p in iter {
                if ring.last().map_or(true, |l| l.distance(&p) > EPS) {
                    ring.push(p);
                }
            }
            let v = head(h);
            let twin = h ^ 1;
            let out = &outgoing[v];
            let pos = out.iter().position(|&o| o == twin).expect("twin leaves the head node");
            h = out[(pos + 1) % out.len()];
        }
        if ring.len() > 1 && ring[0].distance(&ring[ring.len() - 1]) <= EPS {
            ring.pop();
        }
        let area = ring_area(&ring);
        if ring.len() >= 3 && area > EPS {
            let mut min = ring[0];
            let mut max = ring[0];
            for p in &ring {
                min.x = min.x.min(p.x);
                min.y = min.y.min(p.y);
                max.x = max.x.max(p.x);
                max.y = max.y.max(p.y);
            }
            blocks.push(Block {
                id: blocks.len(),
                ring,
                area,
                bbox: (min, max),
            });
        }
    }
    blocks
}

/// Block of each sidewalk feature, by the position of its midpoint.
/// Connectors and features outside every block map to `None`.
pub fn assign_to_blocks(sidewalks: &SidewalkSet, blocks: &[Block]) -> Vec<Option<usize>> {
    sidewalks
        .iter()
        .map(|f| {
            if f.kind() != SegmentKind::Sidewalk {
                return None;
            }
            let mid = f.line.point_along(0, f.line.length() / 2.0);
            blocks
                .iter()
                .filter(|b| b.contains(&mid))
                .min_by(|a, b| a.area.total_cmp(&b.area).then(a.id.cmp(&b.id)))
                .map(|b| b.id)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlockConnectivity {
    pub blocks_with_sidewalks: usize,
    pub fully_connected: usize,
    /// Component count of each block's sidewalk subgraph (0 when empty).
    pub components: Vec<usize>,
}

impl BlockConnectivity {
    pub fn rate(&self) -> Option<f64> {
        (self.blocks_with_sidewalks > 0).then(|| self.fully_connected as f64 / self.blocks_with_sidewalks as f64)
    }
}

/// Counts blocks whose sidewalks form a single connected piece once the
/// given repairs are applied. Sidewalks join when their endpoints lie within
/// `merge_tol` or a repair links them; only joins between sidewalks of the
/// same block count.
pub fn block_connectivity(sidewalks: &SidewalkSet, actions: &[RepairAction], blocks: &[Block], merge_tol: f64) -> BlockConnectivity {
    let owner = assign_to_blocks(sidewalks, blocks);
    let mut parent: Vec<usize> = (0..sidewalks.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
        if owner[a].is_some() && owner[a] == owner[b] {
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    };

    let grid = PointGrid::new(sidewalks.iter().flat_map(|f| [f.line.first(), f.line.last()]).collect(), merge_tol.max(0.01) * 4.0);
    for i in 0..grid.len() {
        for j in grid.within(&grid.point(i), merge_tol) {
            union(&mut parent, i / 2, j / 2);
        }
    }
    for a in actions {
        union(&mut parent, a.joined.0.feature, a.joined.1.feature);
    }

    let mut roots: Vec<Vec<usize>> = alloc::vec![Vec::new(); blocks.len()];
    for f in 0..sidewalks.len() {
        if let Some(b) = owner[f] {
            let r = find(&mut parent, f);
            if !roots[b].contains(&r) {
                roots[b].push(r);
            }
        }
    }
    let components: Vec<usize> = roots.iter().map(Vec::len).collect();
    BlockConnectivity {
        blocks_with_sidewalks: components.iter().filter(|&&c| c > 0).count(),
        fully_connected: components.iter().filter(|&&c| c == 1).count(),
        components,
    }
}
