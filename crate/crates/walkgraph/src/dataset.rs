//! Loading input files and running the build.

use std::path::{Path, PathBuf};

use walkgraph_core::elevation::ElevationGrid;
use walkgraph_core::features::{CurbRampSet, PermitSet, SidewalkSet, StreetSet};
use walkgraph_core::pipeline::{build_network, BuildInputs, BuildOutput};
use walkgraph_core::Projection;

use crate::asc::load_elevation_grid;
use crate::config::Config;
use crate::error::Result;
use crate::geojson::{bbox_center, load_permits, load_points, read_feature_collection, to_lines};
use crate::graph_io::{repair_log_geojson, write_graph, GraphDocument};

/// Input file locations for a build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetPaths {
    pub sidewalks: PathBuf,
    pub streets: PathBuf,
    pub curb_ramps: PathBuf,
    pub elevation: Option<PathBuf>,
    pub permits: Option<PathBuf>,
}

impl DatasetPaths {
    /// The file names `synth` writes into `dir`.
    pub fn in_dir(dir: &Path) -> DatasetPaths {
        use crate::synth::files;
        DatasetPaths {
            sidewalks: dir.join(files::SIDEWALKS),
            streets: dir.join(files::STREETS),
            curb_ramps: dir.join(files::CURB_RAMPS),
            elevation: Some(dir.join(files::ELEVATION)),
            permits: Some(dir.join(files::PERMITS)),
        }
    }
}

/// Every input, projected into one local frame.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub projection: Projection,
    pub streets: StreetSet,
    pub sidewalks: SidewalkSet,
    pub curb_ramps: CurbRampSet,
    pub elevation: Option<ElevationGrid>,
    pub permits: PermitSet,
}

impl Dataset {
    pub fn inputs(&self) -> BuildInputs<'_> {
        BuildInputs {
            streets: &self.streets,
            sidewalks: &self.sidewalks,
            curb_ramps: &self.curb_ramps,
            elevation: self.elevation.as_ref(),
            permits: &self.permits,
        }
    }
}

/// Reads the inputs. The projection origin is the configured one, or else
/// the centre of the street extent, or of the sidewalk extent when there are
/// no streets.
pub fn load_dataset(paths: &DatasetPaths, config: &Config) -> Result<Dataset> {
    let raw_streets = read_feature_collection(&paths.streets)?;
    let raw_sidewalks = read_feature_collection(&paths.sidewalks)?;
    let origin = config
        .origin()
        .or_else(|| bbox_center(&raw_streets))
        .or_else(|| bbox_center(&raw_sidewalks))
        .ok_or(walkgraph_core::Error::EmptyDataset("sidewalks"))?;
    let projection = Projection::new(origin);
    Ok(Dataset {
        streets: to_lines(&raw_streets, &projection, &paths.streets)?,
        sidewalks: to_lines(&raw_sidewalks, &projection, &paths.sidewalks)?,
        curb_ramps: load_points(&paths.curb_ramps, &projection)?,
        elevation: paths.elevation.as_deref().map(load_elevation_grid).transpose()?,
        permits: paths.permits.as_deref().map(|p| load_permits(p, &projection)).transpose()?.unwrap_or_default(),
        projection,
    })
}

/// Loads and builds.
pub fn build_dataset(paths: &DatasetPaths, config: &Config) -> Result<(Dataset, BuildOutput)> {
    let data = load_dataset(paths, config)?;
    let out = build_network(&data.inputs(), &config.build())?;
    Ok((data, out))
}

/// Writes the graph document, with its coverage report, to `out`, and the
/// repair connectors to `repairs` when given.
pub fn write_build(data: &Dataset, built: &BuildOutput, out: &Path, repairs: Option<&Path>) -> Result<()> {
    let doc = GraphDocument::from_graph(&built.graph, &data.projection, Some(built.coverage.clone()));
    write_graph(out, &doc)?;
    if let Some(path) = repairs {
        let mut text = serde_json::to_string(&repair_log_geojson(&built.repairs, &data.projection)).expect("serialisable");
        text.push('\n');
        crate::error::write(path, text)?;
    }
    Ok(())
}
