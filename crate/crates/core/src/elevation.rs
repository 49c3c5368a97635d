//! Regular elevation raster with bilinear sampling.

#[allow(unused_imports)] // std supplies these as inherent methods when linked
use num_traits::Float;
use alloc::vec::Vec;


use crate::error::{Error, Result};
use crate::geometry::LocalPoint;

/// Elevation raster in projected meters.
///
/// Values are stored row-major with the top (northernmost) row first, as in
/// ESRI ASCII grids. Cell `(row, col)` has its centre at
/// `origin + ((col + 0.5) * cellsize, (nrows - row - 0.5) * cellsize)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElevationGrid {
    ncols: usize,
    nrows: usize,
    cellsize: f64,
    origin: LocalPoint,
    values: Vec<f64>,
    nodata: f64,
}

impl ElevationGrid {
    pub fn new(ncols: usize, nrows: usize, cellsize: f64, origin: LocalPoint, values: Vec<f64>, nodata: f64) -> Result<Self> {
        if ncols < 2 || nrows < 2 {
            return Err(Error::InvalidGrid(alloc::format!("grid must be at least 2x2, got {ncols}x{nrows}")));
        }
        if !(cellsize.is_finite() && cellsize > 0.0) {
            return Err(Error::InvalidGrid(alloc::format!("cellsize must be positive, got {cellsize}")));
        }
        if values.len() != ncols * nrows {
            return Err(Error::InvalidGrid(alloc::format!("expected {} values, got {}", ncols * nrows, values.len())));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() && **v != nodata) {
            return Err(Error::InvalidGrid(alloc::format!("non-finite elevation {bad}")));
        }
        Ok(ElevationGrid {
            ncols,
            nrows,
            cellsize,
            origin,
            values,
            nodata,
        })
    }

    /// Builds a grid by evaluating `f` at every cell centre.
    pub fn from_fn(ncols: usize, nrows: usize, cellsize: f64, origin: LocalPoint, f: impl Fn(LocalPoint) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(ncols * nrows);
        for row in 0..nrows {
            for col in 0..ncols {
                values.push(f(cell_center(origin, cellsize, nrows, row, col)));
            }
        }
        ElevationGrid::new(ncols, nrows, cellsize, origin, values, -9999.0)
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn cellsize(&self) -> f64 {
        self.cellsize
    }

    /// Lower-left corner of the grid.
    pub fn origin(&self) -> LocalPoint {
        self.origin
    }

    pub fn nodata(&self) -> f64 {
        self.nodata
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.ncols + col]
    }

    pub fn cell_center(&self, row: usize, col: usize) -> LocalPoint {
        cell_center(self.origin, self.cellsize, self.nrows, row, col)
    }

    pub fn contains(&self, p: &LocalPoint) -> bool {
        let (w, h) = (self.ncols as f64 * self.cellsize, self.nrows as f64 * self.cellsize);
        p.x >= self.origin.x && p.x <= self.origin.x + w && p.y >= self.origin.y && p.y <= self.origin.y + h
    }

    /// Bilinear interpolation between the four surrounding cell centres.
    ///
    /// In the half-cell border outside the outermost centres the nearest
    /// centre values are held constant.
    pub fn sample(&self, p: &LocalPoint) -> Result<f64> {
        if !self.contains(p) {
            return Err(Error::OutsideGrid { x: p.x, y: p.y });
        }
        let fx = ((p.x - self.origin.x) / self.cellsize - 0.5).clamp(0.0, (self.ncols - 1) as f64);
        let fy = ((p.y - self.origin.y) / self.cellsize - 0.5).clamp(0.0, (self.nrows - 1) as f64);
        let c0 = (fx.floor() as usize).min(self.ncols - 2);
        let b0 = (fy.floor() as usize).min(self.nrows - 2);
        let tx = fx - c0 as f64;
        let ty = fy - b0 as f64;

        let corners = [
            (b0, c0, (1.0 - tx) * (1.0 - ty)),
            (b0, c0 + 1, tx * (1.0 - ty)),
            (b0 + 1, c0, (1.0 - tx) * ty),
            (b0 + 1, c0 + 1, tx * ty),
        ];
        let mut z = 0.0;
        for (from_bottom, col, w) in corners {
            if w == 0.0 {
                continue;
            }
            let v = self.value(self.nrows - 1 - from_bottom, col);
            if v == self.nodata || !v.is_finite() {
                return Err(Error::NoData { x: p.x, y: p.y });
            }
            z += w * v;
        }
        Ok(z)
    }
}

fn cell_center(origin: LocalPoint, cellsize: f64, nrows: usize, row: usize, col: usize) -> LocalPoint {
    LocalPoint::new(
        origin.x + (col as f64 + 0.5) * cellsize,
        origin.y + ((nrows - row) as f64 - 0.5) * cellsize,
    )
}
