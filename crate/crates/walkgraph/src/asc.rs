//! ESRI ASCII grid (`.asc`) elevation rasters.
//!
//! Header coordinates are local projected meters (the same frame the build
//! projects features into), and values are meters.

use std::fmt::Write as _;
use std::path::Path;

use walkgraph_core::elevation::ElevationGrid;
use walkgraph_core::LocalPoint;

use crate::error::{read_to_string, Error, Result};

/// Header values as written in the file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscHeader {
    pub ncols: usize,
    pub nrows: usize,
    /// Lower-left corner of the lower-left cell.
    pub xllcorner: f64,
    pub yllcorner: f64,
    pub cellsize: f64,
    pub nodata: f64,
}

fn format_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        line,
        column: 1,
        message: message.into(),
    }
}

/// Parses an ESRI ASCII grid. Accepts either `xllcorner`/`yllcorner` or
/// `xllcenter`/`yllcenter`; `NODATA_value` defaults to -9999.
pub fn parse_asc(text: &str, path: &Path) -> Result<(AscHeader, ElevationGrid)> {
    let mut lines = text.lines().enumerate().peekable();
    let mut keys: Vec<(String, f64, usize)> = Vec::new();
    while let Some(&(i, line)) = lines.peek() {
        let mut parts = line.split_whitespace();
        let Some(key) = parts.next() else {
            lines.next();
            continue;
        };
        if !key.starts_with(|c: char| c.is_ascii_alphabetic()) {
            break;
        }
        let value = parts.next().ok_or_else(|| format_error(path, i + 1, format!("header {key} has no value")))?;
        let value: f64 = value.parse().map_err(|_| format_error(path, i + 1, format!("header {key}: {value:?} is not a number")))?;
        keys.push((key.to_ascii_lowercase(), value, i + 1));
        lines.next();
    }
    let get = |name: &str| keys.iter().find(|(k, _, _)| k == name).map(|&(_, v, _)| v);
    let header_line = keys.last().map_or(1, |k| k.2);
    let need = |name: &str| get(name).ok_or_else(|| format_error(path, header_line, format!("missing header {name}")));
    let count = |name: &str| -> Result<usize> {
        let v = need(name)?;
        if v.fract() != 0.0 || v < 0.0 {
            return Err(format_error(path, header_line, format!("{name} must be a non-negative integer")));
        }
        Ok(v as usize)
    };
    let ncols = count("ncols")?;
    let nrows = count("nrows")?;
    let cellsize = need("cellsize")?;
    let (xll, yll) = match (get("xllcorner"), get("yllcorner"), get("xllcenter"), get("yllcenter")) {
        (Some(x), Some(y), None, None) => (x, y),
        (None, None, Some(x), Some(y)) => (x - cellsize / 2.0, y - cellsize / 2.0),
        _ => return Err(format_error(path, header_line, "need xllcorner/yllcorner or xllcenter/yllcenter")),
    };
    let nodata = get("nodata_value").unwrap_or(-9999.0);

    let mut values = Vec::with_capacity(ncols * nrows);
    let mut last_line = header_line;
    for (i, line) in lines {
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| format_error(path, i + 1, format!("{tok:?} is not a number")))?;
            values.push(v);
        }
        last_line = i + 1;
    }
    if values.len() != ncols * nrows {
        return Err(format_error(path, last_line, format!("expected {} values ({nrows} rows of {ncols}), found {}", ncols * nrows, values.len())));
    }
    let header = AscHeader {
        ncols,
        nrows,
        xllcorner: xll,
        yllcorner: yll,
        cellsize,
        nodata,
    };
    let grid = ElevationGrid::new(ncols, nrows, cellsize, LocalPoint::new(xll, yll), values, nodata)
        .map_err(|e| format_error(path, header_line, e.to_string()))?;
    Ok((header, grid))
}

pub fn load_elevation_grid(path: &Path) -> Result<ElevationGrid> {
    Ok(parse_asc(&read_to_string(path)?, path)?.1)
}

/// Renders a grid in the corner-registered form.
pub fn write_asc(grid: &ElevationGrid) -> String {
    let o = grid.origin();
    let mut out = format!(
        "ncols {}\nnrows {}\nxllcorner {}\nyllcorner {}\ncellsize {}\nNODATA_value {}\n",
        grid.ncols(),
        grid.nrows(),
        o.x,
        o.y,
        grid.cellsize(),
        grid.nodata()
    );
    for row in grid.values().chunks(grid.ncols()) {
        let mut first = true;
        for v in row {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}
