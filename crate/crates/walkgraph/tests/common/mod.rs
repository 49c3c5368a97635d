//! Fixtures shared by the integration tests.

#![allow(dead_code)]

use std::io::{BufRead, BufReader};
use std::path::Path;
use std::process::{Child, Command, Stdio};

use serde_json::Value;
use walkgraph::api::RouteContext;
use walkgraph::synth::{generate_city, City, CityParams};
use walkgraph_core::pipeline::{build_network, BuildConfig, BuildInputs, BuildOutput};
use walkgraph_core::router::SNAP_RADIUS_M;
use walkgraph_core::GeoPoint;

pub const BIN: &str = env!("CARGO_BIN_EXE_walkgraph");

pub fn city(params: &CityParams) -> City {
    generate_city(params).unwrap()
}

pub fn inputs(city: &City) -> BuildInputs<'_> {
    BuildInputs {
        streets: &city.streets,
        sidewalks: &city.sidewalks,
        curb_ramps: &city.curb_ramps,
        elevation: Some(&city.elevation),
        permits: &city.permits,
    }
}

pub fn build(city: &City) -> BuildOutput {
    build_network(&inputs(city), &BuildConfig::default()).unwrap()
}

pub fn context(city: &City) -> RouteContext {
    RouteContext {
        graph: build(city).graph,
        projection: city.projection,
        snap_radius: SNAP_RADIUS_M,
    }
}

/// Street node of a true corner, as a waypoint.
pub fn corner(city: &City, i: usize) -> GeoPoint {
    city.projection.unproject(city.truth.corners[i].node)
}

pub fn lonlat(p: GeoPoint) -> Value {
    serde_json::json!([p.lon, p.lat])
}

pub fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

pub fn assert_valid(validator: &jsonschema::Validator, body: &Value) {
    let errors: Vec<String> = validator.iter_errors(body).map(|e| format!("{}: {e}", e.instance_path)).collect();
    assert!(errors.is_empty(), "{errors:?}\n{body}");
}

/// A `walkgraph serve` child process on an ephemeral port.
pub struct Server {
    child: Child,
    pub base: String,
}

impl Server {
    pub fn start(graph: &Path) -> Server {
        let mut child = Command::new(BIN)
            .args(["serve", "--port", "0", "--graph"])
            .arg(graph)
            .stderr(Stdio::piped())
            .spawn()
            .unwrap();
        let mut line = String::new();
        BufReader::new(child.stderr.take().unwrap()).read_line(&mut line).unwrap();
        let base = line.trim().strip_prefix("listening on ").unwrap_or_else(|| panic!("unexpected banner {line:?}")).to_string();
        Server { child, base }
    }

    pub fn url(&self, path: &str) -> String {
        format!("{}{path}", self.base)
    }
}

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// POSTs JSON and returns the status and raw body, including error statuses.
pub fn post(url: &str, body: &str) -> (u16, String) {
    let agent: ureq::Agent = ureq::Agent::config_builder().http_status_as_error(false).build().into();
    let mut resp = agent.post(url).header("content-type", "application/json").send(body).unwrap();
    (resp.status().as_u16(), resp.body_mut().read_to_string().unwrap())
}

pub fn get(url: &str) -> (u16, String) {
    let agent: ureq::Agent = ureq::Agent::config_builder().http_status_as_error(false).build().into();
    let mut resp = agent.get(url).call().unwrap();
    (resp.status().as_u16(), resp.body_mut().read_to_string().unwrap())
}

/// Runs the CLI, returning exit code, stdout and stderr.
pub fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}
