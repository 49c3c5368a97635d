//! Planar geometry over locally projected coordinates.
//!
//! Everything downstream of IO works in meters on an equirectangular
//! projection centred on a single city. At that scale the projection error
//! is well below the noise in municipal data and the transform is trivially
//! invertible.

#[allow(unused_imports)] // std supplies these as inherent methods when linked
use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean Earth radius in meters.
pub const EARTH_RADIUS_M: f64 = 6_371_008.8;

/// Coincidence tolerance in meters.
pub const EPS: f64 = 1e-6;

/// Maximum distance in degrees (per axis) between a point and the
/// projection origin.
pub const MAX_EXTENT_DEG: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lon: f64,
    pub lat: f64,
}

impl GeoPoint {
    pub fn new(lon: f64, lat: f64) -> Result<Self> {
        if !lon.is_finite() || !lat.is_finite() || !(-180.0..=180.0).contains(&lon) || !(-90.0..=90.0).contains(&lat) {
            return Err(Error::InvalidCoordinate { lon, lat });
        }
        Ok(GeoPoint { lon, lat })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LocalPoint {
    pub x: f64,
    pub y: f64,
}

impl LocalPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        LocalPoint { x, y }
    }

    pub fn distance(&self, other: &LocalPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn distance_sq(&self, other: &LocalPoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn coincides(&self, other: &LocalPoint) -> bool {
        self.distance(other) <= EPS
    }

    pub(crate) fn sub(&self, other: &LocalPoint) -> (f64, f64) {
        (self.x - other.x, self.y - other.y)
    }

    pub fn lerp(&self, other: &LocalPoint, t: f64) -> LocalPoint {
        LocalPoint::new(self.x + (other.x - self.x) * t, self.y + (other.y - self.y) * t)
    }

    /// Lexicographic total order, used to canonicalise symmetric operations.
    pub(crate) fn lex_cmp(&self, other: &LocalPoint) -> core::cmp::Ordering {
        self.x.total_cmp(&other.x).then(self.y.total_cmp(&other.y))
    }
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn dot(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.0 + a.1 * b.1
}

/// Equirectangular projection around a fixed origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    origin: GeoPoint,
    cos_lat: f64,
}

impl Projection {
    pub fn new(origin: GeoPoint) -> Self {
        Projection {
            origin,
            cos_lat: (origin.lat * PI / 180.0).cos(),
        }
    }

    pub fn origin(&self) -> GeoPoint {
        self.origin
    }

    pub fn project(&self, p: GeoPoint) -> Result<LocalPoint> {
        if (p.lon - self.origin.lon).abs() > MAX_EXTENT_DEG || (p.lat - self.origin.lat).abs() > MAX_EXTENT_DEG {
            return Err(Error::Extent { lon: p.lon, lat: p.lat });
        }
        Ok(self.project_unchecked(p))
    }

    /// Projects without the extent check. Only meaningful for rough
    /// distance reporting far from the origin.
    pub fn project_unchecked(&self, p: GeoPoint) -> LocalPoint {
        let dlon = (p.lon - self.origin.lon) * PI / 180.0;
        let dlat = (p.lat - self.origin.lat) * PI / 180.0;
        LocalPoint::new(EARTH_RADIUS_M * self.cos_lat * dlon, EARTH_RADIUS_M * dlat)
    }

    pub fn unproject(&self, p: LocalPoint) -> GeoPoint {
        let dlon = p.x / (EARTH_RADIUS_M * self.cos_lat) * 180.0 / PI;
        let dlat = p.y / EARTH_RADIUS_M * 180.0 / PI;
        GeoPoint {
            lon: self.origin.lon + dlon,
            lat: self.origin.lat + dlat,
        }
    }
}

/// Normalises an angle in degrees to `[0, 360)`.
pub fn normalize_bearing(deg: f64) -> f64 {
    let mut r = deg % 360.0;
    if r < 0.0 {
        r += 360.0;
    }
    if r >= 360.0 {
        r -= 360.0;
    }
    r
}

/// Clockwise-from-north bearing of `b` seen from `a`, in `[0, 360)`.
pub fn bearing(a: &LocalPoint, b: &LocalPoint) -> Result<f64> {
    let (dx, dy) = b.sub(a);
    if dx.hypot(dy) <= EPS {
        return Err(Error::DegenerateGeometry("bearing between coincident points"));
    }
    Ok(normalize_bearing(dx.atan2(dy) * 180.0 / PI))
}

/// Unsigned separation of two bearings, in `[0, 180]`.
///
/// Separations fold at 180, so a reflex angle of 190 degrees between two
/// streets reads as 170 here.
pub fn angle_between_bearings(b1: f64, b2: f64) -> f64 {
    let d = (b1 - b2).abs() % 360.0;
    if d > 180.0 {
        360.0 - d
    } else {
        d
    }
}

/// Signed turn from heading `from` to heading `to`, in `(-180, 180]`.
/// Positive is clockwise (a right turn).
pub fn signed_turn(from: f64, to: f64) -> f64 {
    let d = normalize_bearing(to - from);
    if d > 180.0 {
        d - 360.0
    } else {
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosestPoint {
    pub point: LocalPoint,
    pub distance: f64,
    pub segment_index: usize,
    /// Parameter along the segment, in `[0, 1]`.
    pub t: f64,
}

pub fn closest_point_on_segment(p: &LocalPoint, a: &LocalPoint, b: &LocalPoint) -> (LocalPoint, f64) {
    let ab = b.sub(a);
    let len_sq = dot(ab, ab);
    if len_sq == 0.0 {
        return (*a, 0.0);
    }
    let t = (dot(p.sub(a), ab) / len_sq).clamp(0.0, 1.0);
    let point = if t == 0.0 {
        *a
    } else if t == 1.0 {
        *b
    } else {
        a.lerp(b, t)
    };
    (point, t)
}

pub fn point_segment_distance(p: &LocalPoint, a: &LocalPoint, b: &LocalPoint) -> f64 {
    closest_point_on_segment(p, a, b).0.distance(p)
}

/// Intersection of segments `a1-a2` and `b1-b2`.
///
/// Touching endpoints count as an intersection. Collinear overlaps report the
/// midpoint of the overlap. The result does not depend on argument order.
pub fn segment_intersection(a1: &LocalPoint, a2: &LocalPoint, b1: &LocalPoint, b2: &LocalPoint) -> Option<LocalPoint> {
    let canon = |p: &LocalPoint, q: &LocalPoint| {
        if p.lex_cmp(q).is_le() {
            (*p, *q)
        } else {
            (*q, *p)
        }
    };
    let (sa, sb) = (canon(a1, a2), canon(b1, b2));
    let ((p1, p2), (q1, q2)) = match sa.0.lex_cmp(&sb.0).then(sa.1.lex_cmp(&sb.1)) {
        core::cmp::Ordering::Greater => (sb, sa),
        _ => (sa, sb),
    };

    let r = p2.sub(&p1);
    let s = q2.sub(&q1);
    let r_len = dot(r, r).sqrt();
    let s_len = dot(s, s).sqrt();
    if r_len == 0.0 || s_len == 0.0 {
        return None;
    }
    let qp = q1.sub(&p1);
    let denom = cross(r, s);

    if denom.abs() <= 1e-12 * r_len * s_len {
        // Parallel: only collinear overlap can intersect.
        if cross(qp, r).abs() / r_len > EPS {
            return None;
        }
        let t0 = dot(qp, r) / (r_len * r_len);
        let t1 = dot(q2.sub(&p1), r) / (r_len * r_len);
        let lo = t0.min(t1).max(0.0);
        let hi = t0.max(t1).min(1.0);
        let tol = EPS / r_len;
        if lo > hi + tol {
            return None;
        }
        if (hi - lo).abs() <= tol {
            let t = (lo + hi) / 2.0;
            return Some(snap_to_end(&p1, &p2, t, tol));
        }
        return Some(p1.lerp(&p2, (lo + hi) / 2.0));
    }

    let t = cross(qp, s) / denom;
    let u = cross(qp, r) / denom;
    let tol_t = EPS / r_len;
    let tol_u = EPS / s_len;
    if t < -tol_t || t > 1.0 + tol_t || u < -tol_u || u > 1.0 + tol_u {
        return None;
    }
    if t.abs() <= tol_t || (t - 1.0).abs() <= tol_t {
        return Some(snap_to_end(&p1, &p2, t, tol_t));
    }
    if u.abs() <= tol_u || (u - 1.0).abs() <= tol_u {
        return Some(snap_to_end(&q1, &q2, u, tol_u));
    }
    Some(p1.lerp(&p2, t))
}

fn snap_to_end(a: &LocalPoint, b: &LocalPoint, t: f64, tol: f64) -> LocalPoint {
    if t.abs() <= tol {
        *a
    } else if (t - 1.0).abs() <= tol {
        *b
    } else {
        a.lerp(b, t)
    }
}

/// Minimum distance between two segments.
pub fn segment_segment_distance(a1: &LocalPoint, a2: &LocalPoint, b1: &LocalPoint, b2: &LocalPoint) -> f64 {
    if segment_intersection(a1, a2, b1, b2).is_some() {
        return 0.0;
    }
    point_segment_distance(a1, b1, b2)
        .min(point_segment_distance(a2, b1, b2))
        .min(point_segment_distance(b1, a1, a2))
        .min(point_segment_distance(b2, a1, a2))
}

/// An ordered chain of at least two points with positive length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<LocalPoint>", into = "Vec<LocalPoint>")]
pub struct Polyline {
    points: Vec<LocalPoint>,
}

impl TryFrom<Vec<LocalPoint>> for Polyline {
    type Error = Error;

    fn try_from(points: Vec<LocalPoint>) -> Result<Self> {
        Polyline::new(points)
    }
}

impl From<Polyline> for Vec<LocalPoint> {
    fn from(line: Polyline) -> Self {
        line.points
    }
}

impl Polyline {
    pub fn new(points: Vec<LocalPoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPolyline(alloc::format!("{} point(s), need at least 2", points.len())));
        }
        for p in &points {
            if !p.x.is_finite() || !p.y.is_finite() || p.x.abs() >= 1e7 || p.y.abs() >= 1e7 {
                return Err(Error::InvalidPolyline(alloc::format!("coordinate ({}, {}) out of range", p.x, p.y)));
            }
        }
        for (i, w) in points.windows(2).enumerate() {
            if w[0].distance(&w[1]) <= EPS {
                return Err(Error::InvalidPolyline(alloc::format!("points {} and {} coincide", i, i + 1)));
            }
        }
        Ok(Polyline { points })
    }

    /// Builds a polyline after dropping consecutive coincident points.
    pub fn new_dedup(points: Vec<LocalPoint>) -> Result<Self> {
        let mut kept: Vec<LocalPoint> = Vec::with_capacity(points.len());
        for p in points {
            match kept.last() {
                Some(last) if last.distance(&p) <= EPS => {}
                _ => kept.push(p),
            }
        }
        Polyline::new(kept)
    }

    pub fn segment(a: LocalPoint, b: LocalPoint) -> Result<Self> {
        Polyline::new(alloc::vec![a, b])
    }

    pub fn points(&self) -> &[LocalPoint] {
        &self.points
    }

    pub fn first(&self) -> LocalPoint {
        self.points[0]
    }

    pub fn last(&self) -> LocalPoint {
        self.points[self.points.len() - 1]
    }

    /// Endpoint `0` is the first point, endpoint `1` the last.
    pub fn endpoint(&self, end: u8) -> LocalPoint {
        if end == 0 {
            self.first()
        } else {
            self.last()
        }
    }

    pub fn segments(&self) -> impl Iterator<Item = (LocalPoint, LocalPoint)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn length(&self) -> f64 {
        polyline_length(self)
    }

    pub fn reversed(&self) -> Polyline {
        let mut points = self.points.clone();
        points.reverse();
        Polyline { points }
    }

    /// Point at arc length `d` from the given endpoint, clamped to the line.
    pub fn point_along(&self, from_end: u8, d: f64) -> LocalPoint {
        let pts: Vec<LocalPoint> = if from_end == 0 {
            self.points.clone()
        } else {
            self.points.iter().rev().copied().collect()
        };
        let mut remaining = d.max(0.0);
        for w in pts.windows(2) {
            let seg = w[0].distance(&w[1]);
            if remaining <= seg {
                return w[0].lerp(&w[1], remaining / seg);
            }
            remaining -= seg;
        }
        pts[pts.len() - 1]
    }

    /// Bounding box as `(min, max)`.
    pub fn bbox(&self) -> (LocalPoint, LocalPoint) {
        let mut min = self.points[0];
        let mut max = self.points[0];
        for p in &self.points[1..] {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        (min, max)
    }

    /// Splits the line at the given cut points, each expressed as
    /// `(segment_index, t)`. Cuts at the line's own endpoints are ignored and
    /// coincident cuts collapse into one.
    pub fn split_at(&self, cuts: &[(usize, f64)]) -> Vec<Polyline> {
        let mut cuts: Vec<(usize, f64)> = cuts.to_vec();
        cuts.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let (start, end) = (self.first(), self.last());

        let mut pieces = Vec::new();
        let mut current: Vec<LocalPoint> = alloc::vec![start];
        let mut cuts = cuts.into_iter().peekable();
        for (i, w) in self.points.windows(2).enumerate() {
            while let Some(&(seg, t)) = cuts.peek() {
                if seg != i {
                    break;
                }
                cuts.next();
                let p = w[0].lerp(&w[1], t);
                if p.distance(&start) <= EPS || p.distance(&end) <= EPS {
                    continue;
                }
                let last = *current.last().expect("piece is never empty");
                if last.distance(&p) > EPS {
                    current.push(p);
                }
                if current.len() >= 2 {
                    let cut_at = *current.last().unwrap();
                    pieces.push(Polyline { points: core::mem::take(&mut current) });
                    current.push(cut_at);
                }
            }
            if current.last().map_or(true, |l| l.distance(&w[1]) > EPS) {
                current.push(w[1]);
            }
        }
        if current.len() >= 2 {
            pieces.push(Polyline { points: current });
        } else if let Some(last_piece) = pieces.last_mut() {
            // The final vertex coincided with the last cut; keep the exact endpoint.
            let n = last_piece.points.len();
            last_piece.points[n - 1] = end;
        }
        pieces
    }
}

pub fn polyline_length(line: &Polyline) -> f64 {
    line.segments().map(|(a, b)| a.distance(&b)).sum()
}

/// Closest point on `line` to `p`; ties go to the lowest segment index.
pub fn closest_point_on_polyline(p: &LocalPoint, line: &Polyline) -> ClosestPoint {
    let mut best: Option<ClosestPoint> = None;
    for (i, (a, b)) in line.segments().enumerate() {
        let (point, t) = closest_point_on_segment(p, &a, &b);
        let distance = point.distance(p);
        if best.map_or(true, |c| distance < c.distance) {
            best = Some(ClosestPoint {
                point,
                distance,
                segment_index: i,
                t,
            });
        }
    }
    best.expect("polyline has at least one segment")
}

/// Minimum distance between two polylines (zero if they touch).
pub fn polyline_distance(a: &Polyline, b: &Polyline) -> f64 {
    let mut best = f64::INFINITY;
    for (a1, a2) in a.segments() {
        for (b1, b2) in b.segments() {
            best = best.min(segment_segment_distance(&a1, &a2, &b1, &b2));
            if best == 0.0 {
                return 0.0;
            }
        }
    }
    best
}

pub fn point_polyline_distance(p: &LocalPoint, line: &Polyline) -> f64 {
    closest_point_on_polyline(p, line).distance
}

/// Side of the directed line through `origin` with heading `bearing_deg`:
/// positive to the right, negative to the left.
pub fn side_of(origin: &LocalPoint, bearing_deg: f64, p: &LocalPoint) -> f64 {
    let rad = bearing_deg * PI / 180.0;
    let dir = (rad.sin(), rad.cos());
    // cross(dir, v) is positive when v is counter-clockwise of dir (left).
    -cross(dir, p.sub(origin))
}

/// Whether point `p` lies inside the polygon `ring` (even-odd rule).
pub fn point_in_ring(p: &LocalPoint, ring: &[LocalPoint]) -> bool {
    let n = ring.len();
    if n < 3 {
        return false;
    }
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (pi, pj) = (ring[i], ring[j]);
        if (pi.y > p.y) != (pj.y > p.y) {
            let x = pj.x + (p.y - pj.y) * (pi.x - pj.x) / (pi.y - pj.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Signed shoelace area; positive for counter-clockwise rings.
pub fn ring_area(ring: &[LocalPoint]) -> f64 {
    let n = ring.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    acc / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lp(x: f64, y: f64) -> LocalPoint {
        LocalPoint::new(x, y)
    }

    #[test]
    fn origin_projects_to_zero() {
        let origin = GeoPoint::new(-122.33, 47.61).unwrap();
        let proj = Projection::new(origin);
        assert_eq!(proj.project(origin).unwrap(), lp(0.0, 0.0));
    }

    #[test]
    fn thousandth_degree_north() {
        let proj = Projection::new(GeoPoint::new(0.0, 0.0).unwrap());
        let p = proj.project(GeoPoint::new(0.0, 0.001).unwrap()).unwrap();
        // Hand computation: 6371008.8 * 0.001 * pi / 180.
        let expected = 6_371_008.8 * 0.001 * core::f64::consts::PI / 180.0;
        assert!((p.y - expected).abs() < 1e-9);
        assert!((p.y - 111.19).abs() < 0.01);
        assert_eq!(p.x, 0.0);
    }

    #[test]
    fn far_points_are_rejected() {
        let proj = Projection::new(GeoPoint::new(-122.0, 47.0).unwrap());
        let err = proj.project(GeoPoint::new(-119.5, 47.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Extent { .. }));
    }

    #[test]
    fn round_trip_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let origin = GeoPoint::new(-122.33, 47.61).unwrap();
        let proj = Projection::new(origin);
        for _ in 0..1000 {
            let p = GeoPoint::new(origin.lon + rng.random_range(-1.0..1.0), origin.lat + rng.random_range(-1.0..1.0)).unwrap();
            let back = proj.unproject(proj.project(p).unwrap());
            assert!((back.lon - p.lon).abs() < 1e-9 && (back.lat - p.lat).abs() < 1e-9);
        }
    }

    #[test]
    fn bearings_of_cardinal_directions() {
        assert_eq!(bearing(&lp(0.0, 0.0), &lp(0.0, 1.0)).unwrap(), 0.0);
        assert_eq!(bearing(&lp(0.0, 0.0), &lp(1.0, 0.0)).unwrap(), 90.0);
        let sw = bearing(&lp(0.0, 0.0), &lp(-1.0, -1.0)).unwrap();
        let oracle = normalize_bearing((-1.0f64).atan2(-1.0).to_degrees());
        assert!((sw - oracle).abs() < 1e-12);
        assert!((sw - 225.0).abs() < 1e-12);
        assert!(matches!(bearing(&lp(1.0, 1.0), &lp(1.0, 1.0)), Err(Error::DegenerateGeometry(_))));
    }

    #[test]
    fn bearing_separation() {
        assert_eq!(angle_between_bearings(0.0, 180.0), 180.0);
        assert_eq!(angle_between_bearings(350.0, 10.0), 20.0);
        assert_eq!(angle_between_bearings(45.0, 225.0), 180.0);
    }

    #[test]
    fn closest_point_cases() {
        let line = Polyline::segment(lp(-1.0, 0.0), lp(1.0, 0.0)).unwrap();
        let c = closest_point_on_polyline(&lp(0.0, 1.0), &line);
        assert_eq!(c.point, lp(0.0, 0.0));
        assert_eq!(c.distance, 1.0);
        let on = closest_point_on_polyline(&lp(0.5, 0.0), &line);
        assert_eq!(on.distance, 0.0);
    }

    #[test]
    fn closest_point_beyond_endpoint_matches_sampling() {
        let line = Polyline::new(vec![lp(0.0, 0.0), lp(3.0, 0.0), lp(3.0, 2.0)]).unwrap();
        let p = lp(5.0, 3.5);
        let c = closest_point_on_polyline(&p, &line);
        // Brute-force oracle: sample the line every millimeter.
        let mut best = (f64::INFINITY, lp(0.0, 0.0));
        for (a, b) in line.segments() {
            let n = (a.distance(&b) / 0.001).round() as usize;
            for k in 0..=n {
                let q = a.lerp(&b, k as f64 / n as f64);
                let d = q.distance(&p);
                if d < best.0 {
                    best = (d, q);
                }
            }
        }
        assert!((c.distance - best.0).abs() < 1e-3);
        assert!(c.point.distance(&best.1) < 1e-3);
        assert_eq!(c.point, lp(3.0, 2.0));
        assert_eq!(c.segment_index, 1);
    }

    #[test]
    fn closest_point_ties_use_lowest_segment() {
        let line = Polyline::new(vec![lp(-1.0, 0.0), lp(0.0, 1.0), lp(1.0, 0.0)]).unwrap();
        let c = closest_point_on_polyline(&lp(0.0, 0.0), &line);
        assert_eq!(c.segment_index, 0);
    }

    #[test]
    fn intersection_cases() {
        assert_eq!(segment_intersection(&lp(0.0, -1.0), &lp(0.0, 1.0), &lp(-1.0, 0.0), &lp(1.0, 0.0)), Some(lp(0.0, 0.0)));
        assert_eq!(segment_intersection(&lp(0.0, 0.0), &lp(1.0, 0.0), &lp(0.0, 1.0), &lp(1.0, 1.0)), None);
        assert_eq!(segment_intersection(&lp(0.0, 0.0), &lp(1.0, 1.0), &lp(1.0, 1.0), &lp(2.0, 0.0)), Some(lp(1.0, 1.0)));
        assert_eq!(segment_intersection(&lp(0.0, 0.0), &lp(2.0, 0.0), &lp(1.0, 0.0), &lp(3.0, 0.0)), Some(lp(1.5, 0.0)));
        assert_eq!(segment_intersection(&lp(0.0, 0.0), &lp(1.0, 0.0), &lp(2.0, 0.0), &lp(3.0, 0.0)), None);
    }

    #[test]
    fn lengths() {
        assert_eq!(Polyline::segment(lp(0.0, 0.0), lp(3.0, 4.0)).unwrap().length(), 5.0);
        let square = Polyline::new(vec![lp(0.0, 0.0), lp(1.0, 0.0), lp(1.0, 1.0), lp(0.0, 1.0), lp(0.0, 0.0)]).unwrap();
        assert_eq!(square.length(), 4.0);
    }

    #[test]
    fn jittered_length_matches_pairwise_sum() {
        fn pairwise(v: &[f64]) -> f64 {
            match v.len() {
                0 => 0.0,
                1 => v[0],
                n => pairwise(&v[..n / 2]) + pairwise(&v[n / 2..]),
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<LocalPoint> = (0..1000).map(|i| lp(i as f64 * 0.5, rng.random_range(-0.1..0.1))).collect();
        let line = Polyline::new(pts.clone()).unwrap();
        let seg: Vec<f64> = pts.windows(2).map(|w| ((w[1].x - w[0].x).powi(2) + (w[1].y - w[0].y).powi(2)).sqrt()).collect();
        assert!((line.length() - pairwise(&seg)).abs() < 1e-9);
    }

    #[test]
    fn invalid_polylines() {
        assert!(Polyline::new(vec![lp(0.0, 0.0)]).is_err());
        assert!(Polyline::new(vec![lp(0.0, 0.0), lp(0.0, 0.0)]).is_err());
        assert!(Polyline::new_dedup(vec![lp(0.0, 0.0), lp(0.0, 0.0), lp(1.0, 0.0)]).is_ok());
    }

    #[test]
    fn split_keeps_total_length() {
        let line = Polyline::new(vec![lp(0.0, 0.0), lp(10.0, 0.0), lp(10.0, 10.0)]).unwrap();
        let parts = line.split_at(&[(0, 0.3), (1, 0.5)]);
        assert_eq!(parts.len(), 3);
        let total: f64 = parts.iter().map(|p| p.length()).sum();
        assert!((total - 20.0).abs() < 1e-12);
        assert_eq!(parts[0].last(), lp(3.0, 0.0));
        assert_eq!(parts[2].first(), lp(10.0, 5.0));
        // Cuts on the endpoints are ignored.
        assert_eq!(line.split_at(&[(0, 0.0), (1, 1.0)]).len(), 1);
    }

    #[test]
    fn side_test() {
        let o = lp(0.0, 0.0);
        assert!(side_of(&o, 90.0, &lp(1.0, -1.0)) > 0.0);
        assert!(side_of(&o, 90.0, &lp(1.0, 1.0)) < 0.0);
    }

    fn arb_point() -> impl Strategy<Value = LocalPoint> {
        (-100.0..100.0f64, -100.0..100.0f64).prop_map(|(x, y)| lp(x, y))
    }

    proptest! {
        #[test]
        fn bearing_reverse_differs_by_180(a in arb_point(), b in arb_point()) {
            prop_assume!(a.distance(&b) > 1e-3);
            let f = bearing(&a, &b).unwrap();
            let r = bearing(&b, &a).unwrap();
            prop_assert!((angle_between_bearings(f, r) - 180.0).abs() < 1e-9);
        }

        #[test]
        fn separation_symmetric_and_bounded(b1 in 0.0..360.0f64, b2 in 0.0..360.0f64) {
            let s = angle_between_bearings(b1, b2);
            prop_assert_eq!(s, angle_between_bearings(b2, b1));
            prop_assert!((0.0..=180.0).contains(&s));
        }

        #[test]
        fn closest_point_no_farther_than_vertices(p in arb_point(), pts in prop::collection::vec(arb_point(), 2..8)) {
            if let Ok(line) = Polyline::new_dedup(pts) {
                let c = closest_point_on_polyline(&p, &line);
                for v in line.points() {
                    prop_assert!(c.distance <= v.distance(&p) + 1e-12);
                }
            }
        }

        #[test]
        fn intersection_symmetric(a1 in arb_point(), a2 in arb_point(), b1 in arb_point(), b2 in arb_point()) {
            prop_assume!(a1.distance(&a2) > 1e-3 && b1.distance(&b2) > 1e-3);
            prop_assert_eq!(segment_intersection(&a1, &a2, &b1, &b2), segment_intersection(&b1, &b2, &a1, &a2));
        }
    }
}
