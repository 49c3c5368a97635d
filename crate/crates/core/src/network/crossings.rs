use alloc::string::String;
use alloc::vec::Vec;

use super::graph::EdgeDraft;
use crate::denoise::{CornerSector, EndpointRef, StreetTopology};
use crate::features::{SegmentKind, SidewalkSet, StreetSet};
use crate::geometry::{closest_point_on_polyline, segment_intersection, LocalPoint, Polyline, EPS};
use crate::spatial::LineGrid;

/// Far end of a crossing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossingTarget {
    Endpoint(EndpointRef),
    /// Interior point of a sidewalk, `t` along segment `segment`. The
    /// sidewalk is split there when the graph is assembled.
    Split { feature: usize, segment: usize, t: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    pub from: EndpointRef,
    pub to: CrossingTarget,
    pub geometry: Polyline,
    /// Index of the crossed street in its [`StreetSet`].
    pub street: usize,
    pub crossed_street: String,
    pub node: usize,
    pub from_sector: usize,
    /// Set when the crossing lands on a member of the opposite sector.
    pub to_sector: Option<usize>,
}

impl Crossing {
    /// Unordered identity of the two ends, used for deduplication.
    fn key(&self) -> (EndpointRef, EndpointRef, usize, u64) {
        match self.to {
            CrossingTarget::Endpoint(b) => (self.from.min(b), self.from.max(b), 0, 0),
            CrossingTarget::Split { feature, segment, t } => (self.from, EndpointRef::new(feature, 2), segment, t.to_bits()),
        }
    }
}

fn split_point(line: &Polyline, segment: usize, t: f64) -> LocalPoint {
    let pts = line.points();
    pts[segment].lerp(&pts[segment + 1], t)
}

/// A crossing must touch the street it crosses and no other street at the
/// same intersection, which rules out diagonals through the node.
fn crosses_only(a: &LocalPoint, b: &LocalPoint, street: usize, streets: &StreetSet, others: &[usize]) -> bool {
    let hits = |s: usize| streets.features[s].line.segments().any(|(p, q)| segment_intersection(a, b, &p, &q).is_some());
    hits(street) && !others.iter().any(|&s| s != street && hits(s))
}

/// Proposes street crossings between neighbouring corner sectors.
///
/// For every sector and each of its two bounding streets, the candidate
/// target is the sector across that street. Member pairs are tried closest
/// first (ties by endpoint order) and the first whose straight segment
/// crosses the street and is at most `max_cross` long is kept. When the
/// opposite sector is empty, the closest point on the nearest sidewalk
/// across the street is used instead. Crossings are emitted once per
/// unordered endpoint pair.
pub fn generate_crossings(
    sidewalks: &SidewalkSet,
    streets: &StreetSet,
    topo: &StreetTopology,
    sectors: &[CornerSector],
    max_cross: f64,
) -> Vec<Crossing> {
    let line_grid = LineGrid::new(sidewalks.iter().map(|f| &f.line), max_cross.max(1.0));
    let mut out: Vec<Crossing> = Vec::new();
    let mut seen: Vec<(EndpointRef, EndpointRef, usize, u64)> = Vec::new();

    for sector in sectors {
        if sector.members.is_empty() || sector.node_sectors < 2 {
            continue;
        }
        let node = &topo.nodes[sector.node];
        let incident_streets: Vec<usize> = node.incident.iter().map(|i| i.street).collect();
        let first = sector.id - sector.index;
        let k = sector.node_sectors;
        let sides = [
            (sector.hi_incidence, first + (sector.index + 1) % k),
            (sector.lo_incidence, first + (sector.index + k - 1) % k),
        ];
        for (incidence, opposite_id) in sides {
            let street = node.incident[incidence].street;
            let opposite = &sectors[opposite_id];
            let found = if opposite.members.is_empty() {
                across_to_sidewalk(sidewalks, streets, &line_grid, sector, street, &incident_streets, max_cross)
            } else {
                across_to_corner(sidewalks, streets, sector, opposite, street, &incident_streets, max_cross)
            };
            let Some((from, to, geometry)) = found else { continue };
            let crossing = Crossing {
                from,
                to,
                geometry,
                street,
                crossed_street: streets.features[street].id.clone(),
                node: node.id,
                from_sector: sector.id,
                to_sector: matches!(to, CrossingTarget::Endpoint(b) if opposite.members.contains(&b)).then_some(opposite_id),
            };
            let key = crossing.key();
            if !seen.contains(&key) {
                seen.push(key);
                out.push(crossing);
            }
        }
    }
    out
}

fn across_to_corner(
    sidewalks: &SidewalkSet,
    streets: &StreetSet,
    sector: &CornerSector,
    opposite: &CornerSector,
    street: usize,
    others: &[usize],
    max_cross: f64,
) -> Option<(EndpointRef, CrossingTarget, Polyline)> {
    let mut pairs: Vec<(f64, EndpointRef, EndpointRef)> = Vec::new();
    for &a in &sector.members {
        for &b in &opposite.members {
            if a == b {
                continue;
            }
            let d = a.locate(sidewalks).distance(&b.locate(sidewalks));
            if d > EPS && d <= max_cross {
                pairs.push((d, a, b));
            }
        }
    }
    // Order by distance, then by the unordered pair so both directions agree.
    pairs.sort_by(|x, y| {
        let kx = (x.1.min(x.2), x.1.max(x.2));
        let ky = (y.1.min(y.2), y.1.max(y.2));
        x.0.total_cmp(&y.0).then(kx.cmp(&ky))
    });
    pairs.into_iter().find_map(|(_, a, b)| {
        let (pa, pb) = (a.locate(sidewalks), b.locate(sidewalks));
        if !crosses_only(&pa, &pb, street, streets, others) {
            return None;
        }
        Some((a, CrossingTarget::Endpoint(b), Polyline::segment(pa, pb).ok()?))
    })
}

fn across_to_sidewalk(
    sidewalks: &SidewalkSet,
    streets: &StreetSet,
    line_grid: &LineGrid,
    sector: &CornerSector,
    street: usize,
    others: &[usize],
    max_cross: f64,
) -> Option<(EndpointRef, CrossingTarget, Polyline)> {
    let mut candidates: Vec<(f64, EndpointRef, usize, usize, f64)> = Vec::new();
    for &a in &sector.members {
        let pa = a.locate(sidewalks);
        for f in line_grid.candidates(&pa, max_cross) {
            let feature = &sidewalks.features[f];
            if f == a.feature || feature.kind() != SegmentKind::Sidewalk {
                continue;
            }
            let cp = closest_point_on_polyline(&pa, &feature.line);
            if cp.distance > EPS && cp.distance <= max_cross {
                candidates.push((cp.distance, a, f, cp.segment_index, cp.t));
            }
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    candidates.into_iter().find_map(|(_, a, f, segment, t)| {
        let line = &sidewalks.features[f].line;
        let pa = a.locate(sidewalks);
        let mut pb = split_point(line, segment, t);
        // Landing on (or within tolerance of) an end needs no split.
        let target = if pb.distance(&line.first()) <= EPS {
            pb = line.first();
            CrossingTarget::Endpoint(EndpointRef::new(f, 0))
        } else if pb.distance(&line.last()) <= EPS {
            pb = line.last();
            CrossingTarget::Endpoint(EndpointRef::new(f, 1))
        } else {
            CrossingTarget::Split { feature: f, segment, t }
        };
        if !crosses_only(&pa, &pb, street, streets, others) {
            return None;
        }
        Some((a, target, Polyline::segment(pa, pb).ok()?))
    })
}

/// Turns the repaired sidewalk set and the crossings into edge drafts,
/// splitting sidewalks where crossings land on their interior.
pub fn edge_drafts(sidewalks: &SidewalkSet, crossings: &[Crossing]) -> Vec<EdgeDraft> {
    let mut cuts: Vec<Vec<(usize, f64)>> = alloc::vec![Vec::new(); sidewalks.len()];
    for c in crossings {
        if let CrossingTarget::Split { feature, segment, t } = c.to {
            cuts[feature].push((segment, t));
        }
    }
    let mut drafts = Vec::new();
    for (f, feature) in sidewalks.iter().enumerate() {
        let kind = feature.kind();
        let pieces = if cuts[f].is_empty() { alloc::vec![feature.line.clone()] } else { feature.line.split_at(&cuts[f]) };
        for geometry in pieces {
            drafts.push(EdgeDraft {
                geometry,
                kind,
                crossed_street: None,
            });
        }
    }
    for c in crossings {
        drafts.push(EdgeDraft {
            geometry: c.geometry.clone(),
            kind: SegmentKind::Crossing,
            crossed_street: Some(c.crossed_street.clone()),
        });
    }
    drafts
}
