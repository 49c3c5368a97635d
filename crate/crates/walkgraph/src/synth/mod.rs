//! Synthetic grid cities with ground truth, and a scorer that runs the
//! build on them.
//!
//! Streets form a grid of `blocks_x` by `blocks_y` blocks. Alternate bands
//! of blocks are shifted by half a block, so every interior horizontal street
//! carries T-intersections whose stems come from the shifted band. Streets
//! get 30 m stubs outward at every boundary node, which makes boundary
//! nodes four-way. Each block is ringed by sidewalks inset `sidewalk_offset`
//! from the centerlines; a side facing a T stem is split into two pieces
//! with a gap of twice the offset where the stem's crossing lands.
//! Optionally the whole city is also ringed by perimeter sidewalks outside
//! the boundary streets.

mod evaluate;

use std::path::Path;

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use walkgraph_core::denoise::EndpointRef;
use walkgraph_core::elevation::ElevationGrid;
use walkgraph_core::features::{
    CurbRampSet, DateInterval, FeatureGeometry, LineFeature, LineSet, Permit, PermitSet, PointFeature, PointSet, Properties, Scalar,
    SidewalkSet, StreetSet,
};
use walkgraph_core::{GeoPoint, LocalPoint, Polyline, Projection};

pub use evaluate::{evaluate_pipeline, Scorecard};

use crate::asc::write_asc;
use crate::error::{write, Error, Result};
use crate::geojson::{lines_json, permits_json, points_json};

/// Length of the street stubs leaving the city at boundary nodes.
pub const STUB_LENGTH_M: f64 = 30.0;
/// How far each end of a withheld corner is pulled back.
pub const WITHHELD_GAP_M: f64 = 4.0;
/// Elevation raster cell size.
pub const ELEVATION_CELL_M: f64 = 10.0;
pub const PRESET_NAMES: [&str; 3] = ["grid", "noisy", "tiny"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ElevationModel {
    Flat,
    /// `z = slope * x`.
    Plane { slope: f64 },
    /// `z = amplitude * (1 + sin(2πx/wavelength) * cos(2πy/wavelength))`.
    Hill { amplitude: f64, wavelength: f64 },
}

impl ElevationModel {
    pub fn height(&self, p: LocalPoint) -> f64 {
        match *self {
            ElevationModel::Flat => 0.0,
            ElevationModel::Plane { slope } => slope * p.x,
            ElevationModel::Hill { amplitude, wavelength } => {
                let k = 2.0 * std::f64::consts::PI / wavelength;
                amplitude * (1.0 + (k * p.x).sin() * (k * p.y).cos())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CityParams {
    pub blocks_x: usize,
    pub blocks_y: usize,
    pub block_size: f64,
    /// Distance of sidewalks from street centerlines.
    pub sidewalk_offset: f64,
    /// Standard deviation of the per-axis endpoint noise.
    pub noise_sigma: f64,
    /// Chance that a block corner is left unjoined.
    pub gap_probability: f64,
    /// Chance that a sidewalk end location gets a curb ramp.
    pub ramp_probability: f64,
    pub elevation_model: ElevationModel,
    pub seed: u64,
    pub perimeter_sidewalks: bool,
    /// Number of construction permits to place.
    pub permits: usize,
    /// Geographic position of the city centre, `[lon, lat]`.
    pub origin: [f64; 2],
}

impl Default for CityParams {
    fn default() -> Self {
        CityParams {
            blocks_x: 5,
            blocks_y: 5,
            block_size: 100.0,
            sidewalk_offset: 5.0,
            noise_sigma: 0.0,
            gap_probability: 0.0,
            ramp_probability: 1.0,
            elevation_model: ElevationModel::Flat,
            seed: 42,
            perimeter_sidewalks: true,
            permits: 0,
            origin: [-122.3321, 47.6062],
        }
    }
}

impl CityParams {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Core(walkgraph_core::Error::InvalidParameter(m)));
        if self.blocks_x == 0 || self.blocks_y == 0 {
            return fail(format!("city needs at least one block each way, got {}x{}", self.blocks_x, self.blocks_y));
        }
        if !(self.block_size.is_finite() && self.block_size > 0.0) {
            return fail(format!("block_size must be positive, got {}", self.block_size));
        }
        // Half blocks must still leave room for a sidewalk with both ends pulled back.
        let max_offset = (self.block_size / 2.0 - 2.0 * WITHHELD_GAP_M - 1.0) / 2.0;
        if !(self.sidewalk_offset.is_finite() && self.sidewalk_offset > 0.0 && self.sidewalk_offset <= max_offset) {
            return fail(format!("sidewalk_offset must be in (0, {max_offset}], got {}", self.sidewalk_offset));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return fail(format!("noise_sigma must be nonnegative, got {}", self.noise_sigma));
        }
        for (name, p) in [("gap_probability", self.gap_probability), ("ramp_probability", self.ramp_probability)] {
            if !(0.0..=1.0).contains(&p) {
                return fail(format!("{name} must be in [0, 1], got {p}"));
            }
        }
        match self.elevation_model {
            ElevationModel::Flat => {}
            ElevationModel::Plane { slope } if slope.is_finite() => {}
            ElevationModel::Hill { amplitude, wavelength } if amplitude.is_finite() && wavelength.is_finite() && wavelength > 0.0 => {}
            m => return fail(format!("invalid elevation model {m:?}")),
        }
        GeoPoint::new(self.origin[0], self.origin[1]).map_err(Error::Core)?;
        Ok(())
    }
}

/// Named parameter sets for the `synth` command.
pub fn preset(name: &str) -> Option<CityParams> {
    let grid = CityParams {
        gap_probability: 0.3,
        ramp_probability: 0.9,
        elevation_model: ElevationModel::Hill {
            amplitude: 3.0,
            wavelength: 400.0,
        },
        permits: 3,
        ..CityParams::default()
    };
    match name {
        "grid" => Some(grid),
        "noisy" => Some(CityParams { noise_sigma: 2.0, ..grid }),
        "tiny" => Some(CityParams {
            blocks_x: 1,
            blocks_y: 1,
            perimeter_sidewalks: false,
            ..CityParams::default()
        }),
        _ => None,
    }
}

/// Endpoints that belong at one street corner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrueCorner {
    /// Street node the corner belongs to.
    pub node: LocalPoint,
    pub members: Vec<EndpointRef>,
}

/// A street arm at a node with sidewalk corners on both sides, which a
/// crossing should span.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingSlot {
    pub node: LocalPoint,
    pub street: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GroundTruth {
    /// Sidewalk endpoints before gaps and noise, indexed like the sidewalks.
    pub clean_endpoints: Vec<[LocalPoint; 2]>,
    /// Endpoint pairs that should be joined.
    pub adjacency: Vec<(EndpointRef, EndpointRef)>,
    pub corners: Vec<TrueCorner>,
    pub crossings: Vec<CrossingSlot>,
}

#[derive(Debug, Clone)]
pub struct City {
    pub params: CityParams,
    pub projection: Projection,
    pub streets: StreetSet,
    pub sidewalks: SidewalkSet,
    pub curb_ramps: CurbRampSet,
    pub elevation: ElevationGrid,
    pub permits: PermitSet,
    pub truth: GroundTruth,
}

impl City {
    /// Distinct street names; each grid line is one street.
    pub fn street_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.streets.iter().filter_map(|f| f.properties.get("name").and_then(Scalar::as_str).map(String::from)).collect();
        names.sort();
        names.dedup();
        names
    }
}

fn name_prop(name: String) -> Properties {
    let mut p = Properties::new();
    p.insert("name".into(), Scalar::Text(name));
    p
}

struct Builder {
    offset: f64,
    shift: LocalPoint,
    streets: Vec<LineFeature>,
    sidewalks: Vec<[LocalPoint; 2]>,
    adjacency: Vec<(EndpointRef, EndpointRef)>,
    /// Subset of `adjacency` at block corners, which gaps may withhold.
    corner_pairs: Vec<(EndpointRef, EndpointRef)>,
    corners: Vec<TrueCorner>,
}

impl Builder {
    fn p(&self, x: f64, y: f64) -> LocalPoint {
        LocalPoint::new(x - self.shift.x, y - self.shift.y)
    }

    fn street(&mut self, id: String, name: String, a: (f64, f64), b: (f64, f64)) {
        let line = Polyline::segment(self.p(a.0, a.1), self.p(b.0, b.1)).expect("street ends are distinct");
        self.streets.push(LineFeature {
            id,
            line,
            properties: name_prop(name),
        });
    }

    fn sidewalk(&mut self, a: (f64, f64), b: (f64, f64)) -> usize {
        self.sidewalks.push([self.p(a.0, a.1), self.p(b.0, b.1)]);
        self.sidewalks.len() - 1
    }

    fn corner(&mut self, node: (f64, f64), members: Vec<EndpointRef>) {
        let node = self.p(node.0, node.1);
        self.corners.push(TrueCorner { node, members });
    }

    /// Sidewalk pieces along a line from `from` to `to` (a coordinate along
    /// the line), broken around each stem position. Returns the feature ids.
    fn side(&mut self, horizontal: bool, fixed: f64, from: f64, to: f64, stems: &[f64], at: impl Fn(f64) -> f64) -> Vec<usize> {
        let o = self.offset;
        let dir = (to - from).signum();
        let mut cuts: Vec<f64> = stems.to_vec();
        cuts.sort_by(|a, b| (dir * a).total_cmp(&(dir * b)));
        let mut starts = vec![from];
        let mut ends = Vec::new();
        for &s in &cuts {
            ends.push(s - dir * o);
            starts.push(s + dir * o);
        }
        ends.push(to);
        let mut ids = Vec::new();
        for (&s, &e) in starts.iter().zip(&ends) {
            let (a, b) = if horizontal { ((s, fixed), (e, fixed)) } else { ((fixed, s), (fixed, e)) };
            ids.push(self.sidewalk(a, b));
        }
        for (k, &s) in cuts.iter().enumerate() {
            let pair = (EndpointRef::new(ids[k], 1), EndpointRef::new(ids[k + 1], 0));
            self.adjacency.push(pair);
            let node = if horizontal { (s, at(s)) } else { (at(s), s) };
            self.corner(node, vec![pair.0, pair.1]);
        }
        ids
    }
}

/// Vertical street positions in band `j`.
fn band_columns(params: &CityParams, j: usize) -> Vec<f64> {
    let b = params.block_size;
    let nx = params.blocks_x;
    if j % 2 == 0 {
        (0..=nx).map(|i| i as f64 * b).collect()
    } else {
        let mut xs = vec![0.0];
        xs.extend((0..nx).map(|i| b / 2.0 + i as f64 * b));
        xs.push(nx as f64 * b);
        xs
    }
}

fn inside(xs: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    xs.iter().copied().filter(|&x| x > lo && x < hi).collect()
}

/// Half-block units, used to name avenues.
fn column_name(params: &CityParams, x: f64) -> String {
    format!("Avenue {}", (2.0 * x / params.block_size).round() as i64)
}

fn column_id(params: &CityParams, x: f64) -> String {
    format!("v{}", (2.0 * x / params.block_size).round() as i64)
}

/// Builds the clean city geometry and its ground truth.
fn layout(params: &CityParams) -> Builder {
    let (b, o, l) = (params.block_size, params.sidewalk_offset, STUB_LENGTH_M);
    let (nx, ny) = (params.blocks_x, params.blocks_y);
    let (w, h) = (nx as f64 * b, ny as f64 * b);
    let mut bd = Builder {
        offset: o,
        shift: LocalPoint::new(w / 2.0, h / 2.0),
        streets: Vec::new(),
        sidewalks: Vec::new(),
        adjacency: Vec::new(),
        corner_pairs: Vec::new(),
        corners: Vec::new(),
    };
    let columns: Vec<Vec<f64>> = (0..ny).map(|j| band_columns(params, j)).collect();

    // Horizontal streets, split at every node, with stubs at both ends.
    for j in 0..=ny {
        let y = j as f64 * b;
        let mut xs: Vec<f64> = Vec::new();
        if j > 0 {
            xs.extend(&columns[j - 1]);
        }
        if j < ny {
            xs.extend(&columns[j]);
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let name = format!("Street {j}");
        for (k, win) in xs.windows(2).enumerate() {
            bd.street(format!("h{j}.{k}"), name.clone(), (win[0], y), (win[1], y));
        }
        bd.street(format!("h{j}.w"), name.clone(), (0.0, y), (-l, y));
        bd.street(format!("h{j}.e"), name, (w, y), (w + l, y));
    }
    // Vertical streets per band, with stubs leaving the top and bottom.
    for (j, xs) in columns.iter().enumerate() {
        let (y0, y1) = (j as f64 * b, (j + 1) as f64 * b);
        for &x in xs {
            bd.street(format!("{}.{j}", column_id(params, x)), column_name(params, x), (x, y0), (x, y1));
        }
    }
    for &x in &columns[0] {
        bd.street(format!("{}.s", column_id(params, x)), column_name(params, x), (x, 0.0), (x, -l));
    }
    for &x in &columns[ny - 1] {
        bd.street(format!("{}.n", column_id(params, x)), column_name(params, x), (x, h), (x, h + l));
    }

    // Block rings, counterclockwise: bottom, right, top, left.
    for j in 0..ny {
        let (y0, y1) = (j as f64 * b, (j + 1) as f64 * b);
        let below = if j > 0 { columns[j - 1].clone() } else { Vec::new() };
        let above = if j + 1 < ny { columns[j + 1].clone() } else { Vec::new() };
        for win in columns[j].windows(2) {
            let (x0, x1) = (win[0], win[1]);
            let bottom = bd.side(true, y0 + o, x0 + o, x1 - o, &inside(&below, x0, x1), |_| y0);
            let right = bd.side(false, x1 - o, y0 + o, y1 - o, &[], |_| x1);
            let top = bd.side(true, y1 - o, x1 - o, x0 + o, &inside(&above, x0, x1), |_| y1);
            let left = bd.side(false, x0 + o, y1 - o, y0 + o, &[], |_| x0);
            let first = |ids: &[usize]| EndpointRef::new(ids[0], 0);
            let last = |ids: &[usize]| EndpointRef::new(*ids.last().unwrap(), 1);
            for (node, pair) in [
                ((x1, y0), (last(&bottom), first(&right))),
                ((x1, y1), (last(&right), first(&top))),
                ((x0, y1), (last(&top), first(&left))),
                ((x0, y0), (last(&left), first(&bottom))),
            ] {
                bd.adjacency.push(pair);
                bd.corner_pairs.push(pair);
                bd.corner(node, vec![pair.0, pair.1]);
            }
        }
    }

    if params.perimeter_sidewalks {
        let ring = |bd: &mut Builder, horizontal: bool, fixed: f64, street_at: f64, nodes: &[f64]| {
            for win in nodes.windows(2) {
                let ids = bd.side(horizontal, fixed, win[0] + o, win[1] - o, &[], |_| street_at);
                let node = |s: f64| if horizontal { (s, street_at) } else { (street_at, s) };
                bd.corner(node(win[0]), vec![EndpointRef::new(ids[0], 0)]);
                bd.corner(node(win[1]), vec![EndpointRef::new(ids[0], 1)]);
            }
        };
        let rows: Vec<f64> = (0..=ny).map(|j| j as f64 * b).collect();
        ring(&mut bd, true, -o, 0.0, &columns[0]);
        ring(&mut bd, true, h + o, h, &columns[ny - 1]);
        ring(&mut bd, false, -o, 0.0, &rows);
        ring(&mut bd, false, w + o, w, &rows);
    }
    bd
}

/// Street arms at every node that have a sidewalk corner on both sides.
fn crossing_slots(streets: &[LineFeature], clean: &[[LocalPoint; 2]], offset: f64) -> Vec<CrossingSlot> {
    let ends: Vec<LocalPoint> = clean.iter().flatten().copied().collect();
    let has_end = |p: LocalPoint| ends.iter().any(|e| e.distance(&p) < 0.5);
    let mut slots = Vec::new();
    for s in streets {
        for end in 0..2u8 {
            let node = s.line.endpoint(end);
            let other = s.line.endpoint(1 - end);
            let len = node.distance(&other);
            let d = LocalPoint::new((other.x - node.x) / len, (other.y - node.y) / len);
            let base = LocalPoint::new(node.x + offset * d.x, node.y + offset * d.y);
            let left = LocalPoint::new(base.x - offset * d.y, base.y + offset * d.x);
            let right = LocalPoint::new(base.x + offset * d.y, base.y - offset * d.x);
            if has_end(left) && has_end(right) {
                slots.push(CrossingSlot { node, street: s.id.clone() });
            }
        }
    }
    slots
}

fn pull_back(a: LocalPoint, b: LocalPoint, d: f64) -> LocalPoint {
    let len = a.distance(&b);
    LocalPoint::new(a.x + (b.x - a.x) * d / len, a.y + (b.y - a.y) * d / len)
}

/// Generates a city. The same parameters always give the same city.
pub fn generate_city(params: &CityParams) -> Result<City> {
    params.validate()?;
    let bd = layout(params);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let clean = bd.sidewalks.clone();

    let mut ends = clean.clone();
    for (a, b) in &bd.corner_pairs {
        if rng.random::<f64>() < params.gap_probability {
            for r in [a, b] {
                let [p, q] = clean[r.feature];
                let (from, toward) = if r.end == 0 { (p, q) } else { (q, p) };
                ends[r.feature][r.end as usize] = pull_back(from, toward, WITHHELD_GAP_M);
            }
        }
    }
    if params.noise_sigma > 0.0 {
        let normal = Normal::new(0.0, params.noise_sigma).expect("sigma is validated");
        for pair in &mut ends {
            for p in pair.iter_mut() {
                p.x += normal.sample(&mut rng);
                p.y += normal.sample(&mut rng);
            }
        }
    }
    let sidewalks = SidewalkSet::new(
        ends.iter()
            .enumerate()
            .map(|(i, &[a, b])| LineFeature::new(format!("sw{i}"), Polyline::segment(a, b).expect("sidewalk ends are distinct")))
            .collect(),
    );

    let mut ramp_sites: Vec<LocalPoint> = Vec::new();
    for p in clean.iter().flatten() {
        if !ramp_sites.iter().any(|q| q.distance(p) < 1e-6) {
            ramp_sites.push(*p);
        }
    }
    let mut ramps = Vec::new();
    for p in ramp_sites {
        if rng.random::<f64>() < params.ramp_probability {
            ramps.push(PointFeature {
                id: format!("ramp{}", ramps.len()),
                point: p,
                properties: Properties::new(),
            });
        }
    }

    let summer = DateInterval {
        start: NaiveDate::from_ymd_opt(2015, 6, 1).expect("valid date"),
        end: NaiveDate::from_ymd_opt(2015, 9, 1).expect("valid date"),
    };
    let permits = (0..params.permits)
        .map(|i| {
            let [a, b] = clean[rng.random_range(0..clean.len())];
            Permit {
                id: format!("permit{i}"),
                geometry: FeatureGeometry::Point(a.lerp(&b, 0.5)),
                active: summer,
                sidewalk_impact: i % 3 != 2,
                properties: Properties::new(),
            }
        })
        .collect();

    let (b, l) = (params.block_size, STUB_LENGTH_M);
    let margin = l + 2.0 * ELEVATION_CELL_M;
    let (w, h) = (params.blocks_x as f64 * b + 2.0 * margin, params.blocks_y as f64 * b + 2.0 * margin);
    let ncols = (w / ELEVATION_CELL_M).ceil() as usize;
    let nrows = (h / ELEVATION_CELL_M).ceil() as usize;
    let grid_origin = LocalPoint::new(-(ncols as f64) * ELEVATION_CELL_M / 2.0, -(nrows as f64) * ELEVATION_CELL_M / 2.0);
    let model = params.elevation_model;
    let shift = bd.shift;
    let elevation = ElevationGrid::from_fn(ncols, nrows, ELEVATION_CELL_M, grid_origin, |p| {
        model.height(LocalPoint::new(p.x + shift.x, p.y + shift.y))
    })?;

    let crossings = crossing_slots(&bd.streets, &clean, params.sidewalk_offset);
    Ok(City {
        params: *params,
        projection: Projection::new(GeoPoint::new(params.origin[0], params.origin[1])?),
        streets: LineSet::new(bd.streets),
        sidewalks,
        curb_ramps: PointSet::new(ramps),
        elevation,
        permits: PermitSet { permits },
        truth: GroundTruth {
            clean_endpoints: clean,
            adjacency: bd.adjacency,
            corners: bd.corners,
            crossings,
        },
    })
}

/// File names written by [`write_dataset`].
pub mod files {
    pub const STREETS: &str = "streets.geojson";
    pub const SIDEWALKS: &str = "sidewalks.geojson";
    pub const CURB_RAMPS: &str = "curbramps.geojson";
    pub const PERMITS: &str = "permits.geojson";
    pub const ELEVATION: &str = "elevation.asc";
    pub const TRUTH: &str = "truth.json";
    pub const PARAMS: &str = "params.json";
    pub const CONFIG: &str = "config.toml";
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

/// Writes the city in the build's input formats, plus `truth.json`,
/// `params.json` and a `config.toml` pinning the projection origin.
pub fn write_dataset(city: &City, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let proj = &city.projection;
    write(&dir.join(files::STREETS), pretty(&lines_json(&city.streets, proj)))?;
    write(&dir.join(files::SIDEWALKS), pretty(&lines_json(&city.sidewalks, proj)))?;
    write(&dir.join(files::CURB_RAMPS), pretty(&points_json(&city.curb_ramps, proj)))?;
    write(&dir.join(files::PERMITS), pretty(&permits_json(&city.permits, proj)))?;
    write(&dir.join(files::ELEVATION), write_asc(&city.elevation))?;
    write(&dir.join(files::TRUTH), pretty(&city.truth))?;
    write(&dir.join(files::PARAMS), pretty(&city.params))?;
    let [lon, lat] = city.params.origin;
    write(&dir.join(files::CONFIG), format!("origin = [{lon:?}, {lat:?}]\n"))?;
    Ok(())
}
