use alloc::string::String;
use alloc::vec::Vec;


use crate::error::{Error, Result};
use crate::features::StreetSet;
use crate::geometry::{angle_between_bearings, bearing, LocalPoint};
use crate::spatial::PointGrid;

/// Length of street used to measure a departure bearing.
pub const DEPARTURE_SPAN_M: f64 = 10.0;

/// Smallest folded separation between two streets of a T-intersection.
pub const T_MIN_SEPARATION_DEG: f64 = 170.0;

/// A street leaving a node.
#[derive(Debug, Clone, PartialEq)]
pub struct Incidence {
    /// Index of the street in its [`StreetSet`].
    pub street: usize,
    pub street_id: String,
    /// Which end of the street sits at the node (0 = first point).
    pub end: u8,
    /// Departure bearing away from the node, in `[0, 360)`.
    pub bearing: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StreetNode {
    pub id: usize,
    pub location: LocalPoint,
    /// Incident streets sorted clockwise by departure bearing.
    pub incident: Vec<Incidence>,
}

impl StreetNode {
    pub fn degree(&self) -> usize {
        self.incident.len()
    }

    pub fn is_intersection(&self) -> bool {
        self.degree() >= 3
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StreetTopology {
    pub nodes: Vec<StreetNode>,
    /// Node id at each end of each street, indexed by street.
    pub street_ends: Vec<[usize; 2]>,
}

impl StreetTopology {
    pub fn intersections(&self) -> impl Iterator<Item = &StreetNode> {
        self.nodes.iter().filter(|n| n.is_intersection())
    }
}

/// Merges street endpoints closer than `snap_tol` into nodes and records the
/// departure bearing of every incident street.
pub fn build_street_topology(streets: &StreetSet, snap_tol: f64) -> Result<StreetTopology> {
    if streets.is_empty() {
        return Err(Error::EmptyDataset("street set"));
    }
    let endpoints: Vec<LocalPoint> = streets.iter().flat_map(|s| [s.line.first(), s.line.last()]).collect();
    let grid = PointGrid::new(endpoints.clone(), snap_tol.max(1e-3) * 2.0);

    let mut parent: Vec<usize> = (0..endpoints.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, p) in endpoints.iter().enumerate() {
        for j in grid.within(p, snap_tol) {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                // The smaller index stays the root so node order is stable.
                let (lo, hi) = if ri < rj { (ri, rj) } else { (rj, ri) };
                parent[hi] = lo;
            }
        }
    }

    let mut node_of_root: Vec<Option<usize>> = alloc::vec![None; endpoints.len()];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for i in 0..endpoints.len() {
        let r = find(&mut parent, i);
        let id = *node_of_root[r].get_or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        members[id].push(i);
    }

    let mut street_ends = alloc::vec![[0usize; 2]; streets.len()];
    let mut nodes = Vec::with_capacity(members.len());
    for (id, ms) in members.iter().enumerate() {
        let n = ms.len() as f64;
        let location = LocalPoint::new(
            ms.iter().map(|&i| endpoints[i].x).sum::<f64>() / n,
            ms.iter().map(|&i| endpoints[i].y).sum::<f64>() / n,
        );
        let mut incident = Vec::with_capacity(ms.len());
        for &i in ms {
            let (street, end) = (i / 2, (i % 2) as u8);
            street_ends[street][end as usize] = id;
            let feature = &streets.features[street];
            let line = &feature.line;
            let span = DEPARTURE_SPAN_M.min(line.length());
            let from = line.endpoint(end);
            let towards = line.point_along(end, span);
            let b = bearing(&from, &towards)?;
            incident.push(Incidence {
                street,
                street_id: feature.id.clone(),
                end,
                bearing: b,
            });
        }
        incident.sort_by(|a, b| a.bearing.total_cmp(&b.bearing).then(a.street.cmp(&b.street)).then(a.end.cmp(&b.end)));
        nodes.push(StreetNode { id, location, incident });
    }
    Ok(StreetTopology { nodes, street_ends })
}

/// A degree-3 node where two streets are nearly collinear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TIntersection {
    pub node: usize,
    /// Indices into the node's incidence list of the two through streets.
    pub through: (usize, usize),
    /// Index of the stem street.
    pub stem: usize,
    pub separation: f64,
}

/// Finds the most nearly collinear pair among three bearings, if their
/// folded separation is within `[170, 180]`.
pub fn t_through_pair(bearings: &[f64]) -> Option<((usize, usize), f64)> {
    if bearings.len() != 3 {
        return None;
    }
    let mut best: Option<((usize, usize), f64)> = None;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let sep = angle_between_bearings(bearings[i], bearings[j]);
        if sep >= T_MIN_SEPARATION_DEG && best.map_or(true, |(_, s)| sep > s) {
            best = Some(((i, j), sep));
        }
    }
    best
}

/// Whether a bearing set describes a T-intersection: exactly three streets,
/// two of which are 170 to 190 degrees apart. That window folds to a
/// separation in `[170, 180]`.
pub fn is_t_intersection(bearings: &[f64]) -> bool {
    t_through_pair(bearings).is_some()
}

pub fn detect_t_intersections(nodes: &[StreetNode]) -> Vec<TIntersection> {
    nodes
        .iter()
        .filter_map(|node| {
            let bearings: Vec<f64> = node.incident.iter().map(|i| i.bearing).collect();
            let ((a, b), separation) = t_through_pair(&bearings)?;
            let stem = 3 - a - b;
            Some(TIntersection {
                node: node.id,
                through: (a, b),
                stem,
                separation,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::LineFeature;
    use crate::geometry::Polyline;

    fn street(id: &str, pts: &[(f64, f64)]) -> LineFeature {
        LineFeature::new(id, Polyline::new(pts.iter().map(|&(x, y)| LocalPoint::new(x, y)).collect()).unwrap())
    }

    fn node_with(bearings: &[f64]) -> StreetNode {
        StreetNode {
            id: 0,
            location: LocalPoint::default(),
            incident: bearings
                .iter()
                .enumerate()
                .map(|(i, &b)| Incidence {
                    street: i,
                    street_id: alloc::format!("s{i}"),
                    end: 0,
                    bearing: b,
                })
                .collect(),
        }
    }

    #[test]
    fn shared_endpoint_makes_one_node() {
        let set = StreetSet::new(vec![street("a", &[(0.0, 0.0), (100.0, 0.0)]), street("b", &[(100.0, 0.0), (100.0, 100.0)])]);
        let topo = build_street_topology(&set, 0.5).unwrap();
        assert_eq!(topo.nodes.len(), 3);
        assert_eq!(topo.nodes.iter().filter(|n| n.degree() == 2).count(), 1);
    }

    #[test]
    fn plus_shape() {
        let set = StreetSet::new(vec![
            street("n", &[(0.0, 0.0), (0.0, 50.0)]),
            street("e", &[(0.0, 0.0), (50.0, 0.0)]),
            street("s", &[(0.0, -50.0), (0.0, 0.0)]),
            street("w", &[(-50.0, 0.0), (0.0, 0.0)]),
        ]);
        let topo = build_street_topology(&set, 0.5).unwrap();
        let centre = topo.nodes.iter().find(|n| n.degree() == 4).unwrap();
        let bearings: Vec<f64> = centre.incident.iter().map(|i| i.bearing).collect();
        assert_eq!(bearings, vec![0.0, 90.0, 180.0, 270.0]);
        assert_eq!(topo.nodes.len(), 5);
    }

    #[test]
    fn snap_tolerance_is_inclusive_of_close_ends() {
        let set = StreetSet::new(vec![street("a", &[(0.0, 0.0), (100.0, 0.0)]), street("b", &[(100.4, 0.0), (200.0, 0.0)])]);
        assert_eq!(build_street_topology(&set, 0.5).unwrap().nodes.len(), 3);
        assert_eq!(build_street_topology(&set, 0.3).unwrap().nodes.len(), 4);
    }

    #[test]
    fn departure_bearing_uses_first_ten_meters() {
        let set = StreetSet::new(vec![street("a", &[(0.0, 0.0), (0.0, 10.0), (100.0, 10.0)])]);
        let topo = build_street_topology(&set, 0.5).unwrap();
        assert_eq!(topo.nodes[0].incident[0].bearing, 0.0);
        assert_eq!(topo.nodes[1].incident[0].bearing, 270.0);
    }

    #[test]
    fn empty_streets_rejected() {
        assert!(matches!(build_street_topology(&StreetSet::default(), 0.5), Err(Error::EmptyDataset(_))));
    }

    #[test]
    fn t_detection_rules() {
        assert!(is_t_intersection(&[0.0, 90.0, 180.0]));
        assert!(!is_t_intersection(&[0.0, 120.0, 240.0]));
        assert!(is_t_intersection(&[0.0, 95.0, 175.0]));
        assert!(is_t_intersection(&[0.0, 95.0, 170.0]));
        assert!(!is_t_intersection(&[0.0, 95.0, 169.9]));
        // 190 degrees the other way round folds to 170.
        assert!(is_t_intersection(&[0.0, 100.0, 190.0]));
        assert!(!is_t_intersection(&[0.0, 90.0, 180.0, 270.0]));
    }

    #[test]
    fn detection_reports_stem() {
        let found = detect_t_intersections(&[node_with(&[0.0, 90.0, 180.0])]);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].through, (0, 2));
        assert_eq!(found[0].stem, 1);
    }

    #[test]
    fn detection_ignores_incidence_order() {
        let sets = [[0.0, 95.0, 175.0], [95.0, 0.0, 175.0], [175.0, 95.0, 0.0], [0.0, 120.0, 240.0], [240.0, 0.0, 120.0]];
        for b in sets {
            let mut perms = Vec::new();
            for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                perms.push(detect_t_intersections(&[node_with(&[b[p[0]], b[p[1]], b[p[2]]])]).len());
            }
            assert!(perms.windows(2).all(|w| w[0] == w[1]));
        }
    }
}
