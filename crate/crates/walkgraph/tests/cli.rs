mod common;

use std::path::{Path, PathBuf};

use common::{post, run, Server};
use serde_json::{json, Value};
use walkgraph::synth::{generate_city, preset, write_dataset, CityParams};

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Writes a synthetic city with `synth` and builds it with `build`.
fn build_city(dir: &Path, preset: &str) -> PathBuf {
    let data = dir.join("data");
    let (code, _, err) = run(&["synth", "--preset", preset, "--out", s(&data)]);
    assert_eq!(code, 0, "{err}");
    build_dir(&data)
}

fn build_dir(data: &Path) -> PathBuf {
    let graph = data.join("graph.json");
    let (code, _, err) = run(&[
        "build",
        "--sidewalks",
        s(&data.join("sidewalks.geojson")),
        "--streets",
        s(&data.join("streets.geojson")),
        "--curbramps",
        s(&data.join("curbramps.geojson")),
        "--elevation",
        s(&data.join("elevation.asc")),
        "--permits",
        s(&data.join("permits.geojson")),
        "--config",
        s(&data.join("config.toml")),
        "--repairs",
        s(&data.join("repairs.geojson")),
        "--out",
        s(&graph),
    ]);
    assert_eq!(code, 0, "{err}");
    graph
}

/// The first and last true corners of the city, as `lon,lat`.
fn waypoints(params: &CityParams) -> (String, String) {
    let city = generate_city(params).unwrap();
    let a = city.projection.unproject(city.truth.corners[0].node);
    let b = city.projection.unproject(city.truth.corners[city.truth.corners.len() - 1].node);
    (format!("{},{}", a.lon, a.lat), format!("{},{}", b.lon, b.lat))
}

#[test]
fn build_then_report_gives_full_coverage() {
    let dir = tempfile::tempdir().unwrap();
    let graph = build_city(dir.path(), "grid");
    let (code, out, err) = run(&["report", "--graph", s(&graph)]);
    assert_eq!(code, 0, "{err}");
    let report: Value = serde_json::from_str(&out).unwrap();
    for rate in ["t_repair_rate", "corner_edit_rate", "block_connectivity_rate", "crossing_corner_rate"] {
        assert_eq!(report[rate], 1.0, "{rate}: {report}");
    }
    assert_eq!(report["component_count"], 1);
    let repairs: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("data/repairs.geojson")).unwrap()).unwrap();
    assert!(repairs["features"].as_array().unwrap().iter().all(|f| f["properties"]["gap_m"].as_f64().unwrap() <= 30.48));
}

#[test]
fn route_output_is_byte_identical_to_the_api() {
    let dir = tempfile::tempdir().unwrap();
    let graph = build_city(dir.path(), "grid");
    let (from, to) = waypoints(&preset("grid").unwrap());
    let (code, cli, err) = run(&["route", "--graph", s(&graph), "--from", &from, "--to", &to, "--profile", "manual_assist", "--date", "2015-07-01"]);
    assert_eq!(code, 0, "{err}");

    let server = Server::start(&graph);
    let parse = |t: &str| -> Vec<f64> { t.split(',').map(|v| v.parse().unwrap()).collect() };
    let body = json!({ "origin": parse(&from), "destination": parse(&to), "profile": "manual_assist", "query_date": "2015-07-01" });
    let (status, api) = post(&server.url("/route"), &body.to_string());
    assert_eq!(status, 200);
    assert_eq!(cli, api);
}

#[test]
fn unroutable_waypoint_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let graph = build_city(dir.path(), "tiny");
    let (code, out, err) = run(&["route", "--graph", s(&graph), "--from", "-122.0,47.6", "--to", "-122.3321,47.6062"]);
    assert_eq!(code, 2);
    assert!(err.contains("no graph node within 100 m"), "{err}");
    let body: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(body["error"]["code"], "unroutable_waypoint");
}

#[test]
fn no_route_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let params = CityParams {
        ramp_probability: 0.0,
        ..preset("grid").unwrap()
    };
    let data = dir.path().join("data");
    write_dataset(&generate_city(&params).unwrap(), &data).unwrap();
    let graph = build_dir(&data);
    let (from, to) = waypoints(&params);
    let (code, out, err) = run(&["route", "--graph", s(&graph), "--from", &from, "--to", &to, "--profile", "powered_wheelchair"]);
    assert_eq!(code, 3, "{out}{err}");
    assert!(out.contains("curb_ramps"));
}

#[test]
fn profiles_can_be_inline_json() {
    let dir = tempfile::tempdir().unwrap();
    let graph = build_city(dir.path(), "tiny");
    let (from, to) = waypoints(&preset("tiny").unwrap());
    let profile = serde_json::to_string(&walkgraph_core::router::preset("manual_assist").unwrap()).unwrap();
    let (code, out, err) = run(&["route", "--graph", s(&graph), "--from", &from, "--to", &to, "--profile", &profile]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["profile"], "manual_assist");
    let (code, _, err) = run(&["route", "--graph", s(&graph), "--from", &from, "--to", &to, "--profile", "{\"name\":\"x\"}"]);
    assert_eq!(code, 1);
    assert!(err.contains("profile"), "{err}");
}

#[test]
fn failures_exit_nonzero_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let (code, _, err) = run(&["report", "--graph", s(&missing)]);
    assert_eq!(code, 1);
    assert!(err.contains("missing.json"), "{err}");

    let (code, _, err) = run(&["synth", "--preset", "metropolis", "--out", s(dir.path())]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown preset"), "{err}");

    let (code, _, err) = run(&["synth", "--preset", "grid", "--blocks-x", "0", "--out", s(&dir.path().join("z"))]);
    assert_eq!(code, 1);
    assert!(err.contains("at least one block"), "{err}");

    let data = dir.path().join("data");
    run(&["synth", "--preset", "tiny", "--out", s(&data)]);
    std::fs::write(data.join("bad.toml"), "[network]\nmax_crossing = 3\n").unwrap();
    let (code, _, err) = run(&[
        "build",
        "--sidewalks",
        s(&data.join("sidewalks.geojson")),
        "--streets",
        s(&data.join("streets.geojson")),
        "--curbramps",
        s(&data.join("curbramps.geojson")),
        "--config",
        s(&data.join("bad.toml")),
        "--out",
        s(&data.join("g.json")),
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("bad.toml") && err.contains("max_crossing"), "{err}");

    std::fs::write(data.join("broken.geojson"), "{\"type\":\"FeatureCollection\",\n\"features\":[").unwrap();
    let (code, _, err) = run(&[
        "build",
        "--sidewalks",
        s(&data.join("broken.geojson")),
        "--streets",
        s(&data.join("streets.geojson")),
        "--curbramps",
        s(&data.join("curbramps.geojson")),
        "--out",
        s(&data.join("g.json")),
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("broken.geojson:2:"), "{err}");
}

#[test]
fn synth_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let (code, _, err) = run(&["synth", "--preset", "noisy", "--out", s(d)]);
        assert_eq!(code, 0, "{err}");
    }
    let mut names: Vec<_> = std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 8);
    for n in names {
        assert_eq!(std::fs::read(a.join(&n)).unwrap(), std::fs::read(b.join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn evaluate_prints_a_scorecard() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    run(&["synth", "--preset", "grid", "--out", s(&data)]);
    let (code, out, err) = run(&["evaluate", "--dataset", s(&data)]);
    assert_eq!(code, 0, "{err}");
    let card: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(card["precision"], 1.0);
    assert_eq!(card["recall"], 1.0);
    assert_eq!(card["crossing_coverage"], 1.0);
}
