//! TOML configuration holding every build and routing threshold.
//!
//! ```toml
//! origin = [-122.3321, 47.6062]   # optional; default is the street extent centre
//! snap_radius = 100.0
//!
//! [denoise]
//! snap_tol = 0.5
//! t_max_gap = 30.48
//! t_max_skew_deg = 45.0
//! corner_radius = 30.0
//! max_connect = 30.48
//!
//! [network]
//! max_cross = 40.0
//! merge_tol = 0.01
//! ramp_radius = 5.0
//! construction_buffer = 10.0
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use walkgraph_core::denoise::DenoiseConfig;
use walkgraph_core::network::NetworkConfig;
use walkgraph_core::pipeline::BuildConfig;
use walkgraph_core::router::SNAP_RADIUS_M;
use walkgraph_core::GeoPoint;

use crate::error::{read_to_string, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Projection origin as `[lon, lat]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub origin: Option<[f64; 2]>,
    /// Waypoint snapping radius in meters.
    pub snap_radius: f64,
    pub denoise: DenoiseConfig,
    pub network: NetworkConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            origin: None,
            snap_radius: SNAP_RADIUS_M,
            denoise: DenoiseConfig::default(),
            network: NetworkConfig::default(),
        }
    }
}

impl Config {
    pub fn parse(text: &str, path: &Path) -> Result<Config> {
        let config: Config = toml::from_str(text).map_err(|e| Error::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        config.validate().map_err(|message| Error::Config {
            path: path.to_path_buf(),
            message,
        })?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Config> {
        Config::parse(&read_to_string(path)?, path)
    }

    pub fn build(&self) -> BuildConfig {
        BuildConfig {
            denoise: self.denoise,
            network: self.network,
        }
    }

    pub fn origin(&self) -> Option<GeoPoint> {
        self.origin.and_then(|[lon, lat]| GeoPoint::new(lon, lat).ok())
    }

    /// Checks every distance is finite and positive.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let d = &self.denoise;
        let n = &self.network;
        for (name, v) in [
            ("snap_radius", self.snap_radius),
            ("denoise.snap_tol", d.snap_tol),
            ("denoise.t_max_gap", d.t_max_gap),
            ("denoise.t_max_skew_deg", d.t_max_skew_deg),
            ("denoise.corner_radius", d.corner_radius),
            ("denoise.max_connect", d.max_connect),
            ("network.max_cross", n.max_cross),
            ("network.merge_tol", n.merge_tol),
            ("network.ramp_radius", n.ramp_radius),
            ("network.construction_buffer", n.construction_buffer),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("{name} must be a positive number, got {v}"));
            }
        }
        if let Some([lon, lat]) = self.origin {
            GeoPoint::new(lon, lat).map_err(|e| format!("origin: {e}"))?;
        }
        Ok(())
    }
}
