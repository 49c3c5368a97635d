//! Uniform-grid spatial indices.

#[allow(unused_imports)] // std supplies these as inherent methods when linked
use num_traits::Float;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;


use crate::geometry::{LocalPoint, Polyline};

type Cell = (i64, i64);

fn cell_of(p: &LocalPoint, size: f64) -> Cell {
    ((p.x / size).floor() as i64, (p.y / size).floor() as i64)
}

/// Point index answering exact radius and nearest-neighbour queries.
#[derive(Debug, Clone)]
pub struct PointGrid {
    cell_size: f64,
    points: Vec<LocalPoint>,
    cells: BTreeMap<Cell, Vec<usize>>,
}

impl PointGrid {
    pub fn new(points: Vec<LocalPoint>, cell_size: f64) -> Self {
        let cell_size = if cell_size.is_finite() && cell_size > 0.0 { cell_size } else { 1.0 };
        let mut cells: BTreeMap<Cell, Vec<usize>> = BTreeMap::new();
        for (i, p) in points.iter().enumerate() {
            cells.entry(cell_of(p, cell_size)).or_default().push(i);
        }
        PointGrid { cell_size, points, cells }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, id: usize) -> LocalPoint {
        self.points[id]
    }

    fn cells_covering(&self, center: &LocalPoint, r: f64) -> impl Iterator<Item = &Vec<usize>> {
        let lo = cell_of(&LocalPoint::new(center.x - r, center.y - r), self.cell_size);
        let hi = cell_of(&LocalPoint::new(center.x + r, center.y + r), self.cell_size);
        let span = ((hi.0 - lo.0 + 1) as u128) * ((hi.1 - lo.1 + 1) as u128);
        // Huge radii would enumerate far more cells than exist.
        let scan_all = span > self.cells.len() as u128;
        self.cells
            .range(if scan_all { (i64::MIN, i64::MIN)..=(i64::MAX, i64::MAX) } else { (lo.0, i64::MIN)..=(hi.0, i64::MAX) })
            .filter(move |(c, _)| scan_all || (c.1 >= lo.1 && c.1 <= hi.1))
            .map(|(_, v)| v)
    }

    /// Ids of all points within distance `r` (inclusive) of `center`, sorted.
    pub fn within(&self, center: &LocalPoint, r: f64) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .cells_covering(center, r)
            .flat_map(|ids| ids.iter().copied())
            .filter(|&i| self.points[i].distance(center) <= r)
            .collect();
        out.sort_unstable();
        out
    }

    /// Nearest point within `max_r`; ties go to the lowest id.
    pub fn nearest_within(&self, center: &LocalPoint, max_r: f64) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for &i in self.cells_covering(center, max_r).flat_map(|v| v.iter()) {
            let d = self.points[i].distance(center);
            if d > max_r {
                continue;
            }
            best = match best {
                Some((bi, bd)) if bd < d || (bd == d && bi < i) => Some((bi, bd)),
                _ => Some((i, d)),
            };
        }
        best
    }

    /// Nearest point without a radius bound.
    pub fn nearest(&self, center: &LocalPoint) -> Option<(usize, f64)> {
        let mut r = self.cell_size;
        if self.points.is_empty() {
            return None;
        }
        loop {
            if let Some(hit) = self.nearest_within(center, r) {
                return Some(hit);
            }
            r *= 4.0;
        }
    }
}

/// Index over polylines by the grid cells their bounding boxes cover.
#[derive(Debug, Clone)]
pub struct LineGrid {
    cell_size: f64,
    cells: BTreeMap<Cell, Vec<usize>>,
}

impl LineGrid {
    pub fn new<'a>(lines: impl IntoIterator<Item = &'a Polyline>, cell_size: f64) -> Self {
        let mut cells: BTreeMap<Cell, Vec<usize>> = BTreeMap::new();
        for (i, line) in lines.into_iter().enumerate() {
            let (min, max) = line.bbox();
            let lo = cell_of(&min, cell_size);
            let hi = cell_of(&max, cell_size);
            for cx in lo.0..=hi.0 {
                for cy in lo.1..=hi.1 {
                    cells.entry((cx, cy)).or_default().push(i);
                }
            }
        }
        LineGrid { cell_size, cells }
    }

    /// Indices of lines whose bounding box may come within `r` of `center`,
    /// sorted and deduplicated.
    pub fn candidates(&self, center: &LocalPoint, r: f64) -> Vec<usize> {
        let lo = cell_of(&LocalPoint::new(center.x - r, center.y - r), self.cell_size);
        let hi = cell_of(&LocalPoint::new(center.x + r, center.y + r), self.cell_size);
        let mut out = BTreeSet::new();
        for (_, ids) in self.cells.range((lo.0, i64::MIN)..=(hi.0, i64::MAX)).filter(|(c, _)| c.1 >= lo.1 && c.1 <= hi.1) {
            out.extend(ids.iter().copied());
        }
        out.into_iter().collect()
    }
}
