use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use chrono::NaiveDate;
use clap::{Parser, Subcommand};
use serde_json::Value;
use walkgraph::api::{parse_profile, render, ApiError, RouteContext, RouteRequest};
use walkgraph::config::Config;
use walkgraph::dataset::{build_dataset, load_dataset, write_build, DatasetPaths};
use walkgraph::graph_io::load_graph;
use walkgraph::synth::{self, evaluate_pipeline, generate_city, write_dataset, CityParams, GroundTruth};
use walkgraph::{Error, Result};
use walkgraph_core::GeoPoint;

#[derive(Parser)]
#[command(name = "walkgraph", version, about = "Build, inspect and route on pedestrian networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Repair the sidewalk data and write the routing graph.
    Build {
        #[arg(long)]
        sidewalks: PathBuf,
        #[arg(long)]
        streets: PathBuf,
        #[arg(long)]
        curbramps: PathBuf,
        /// ESRI ASCII grid in local meters about the projection origin.
        #[arg(long)]
        elevation: Option<PathBuf>,
        #[arg(long)]
        permits: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Also write the repair connectors as GeoJSON.
        #[arg(long)]
        repairs: Option<PathBuf>,
    },
    /// Print the route between two points as JSON.
    Route {
        #[arg(long)]
        graph: PathBuf,
        /// Origin as lon,lat.
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        /// Destination as lon,lat.
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Preset name, inline profile JSON, or a path to a profile JSON file.
        #[arg(long, default_value = "default")]
        profile: String,
        /// Date for construction checks, YYYY-MM-DD; defaults to today.
        #[arg(long)]
        date: Option<NaiveDate>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Restrict CORS to this origin; any origin is allowed otherwise.
        #[arg(long)]
        cors_origin: Option<String>,
    },
    /// Print the coverage report stored with a graph.
    Report {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Write a synthetic city dataset.
    Synth {
        #[arg(long, default_value = "grid")]
        preset: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Endpoint noise standard deviation in meters.
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        blocks_x: Option<usize>,
        #[arg(long)]
        blocks_y: Option<usize>,
    },
    /// Build a synthetic dataset and score it against its ground truth.
    Evaluate {
        /// Directory written by `synth`.
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Exit status for a waypoint farther than the snap radius from the graph.
const EXIT_UNROUTABLE: u8 = 2;
/// Exit status when no route satisfies the profile.
const EXIT_NO_ROUTE: u8 = 3;

fn load_config(path: Option<&Path>) -> Result<Config> {
    path.map_or_else(|| Ok(Config::default()), Config::load)
}

fn parse_lonlat(s: &str, what: &str) -> std::result::Result<GeoPoint, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [lon, lat] = parts[..] else {
        return Err(format!("--{what}: expected lon,lat"));
    };
    let lon: f64 = lon.parse().map_err(|_| format!("--{what}: {lon:?} is not a number"))?;
    let lat: f64 = lat.parse().map_err(|_| format!("--{what}: {lat:?} is not a number"))?;
    GeoPoint::new(lon, lat).map_err(|e| format!("--{what}: {e}"))
}

fn profile_value(arg: &str) -> std::result::Result<Value, String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed).map_err(|e| format!("--profile: {e}"));
    }
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        return serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()));
    }
    Ok(Value::String(arg.to_string()))
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::FAILURE
}

fn run_route(graph: &Path, from: &str, to: &str, profile: &str, date: Option<NaiveDate>, config: Option<&Path>) -> ExitCode {
    let config = match load_config(config) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let loaded = match load_graph(graph) {
        Ok(g) => g,
        Err(e) => return fail(e),
    };
    let request = (|| -> std::result::Result<RouteRequest, String> {
        Ok(RouteRequest {
            origin: parse_lonlat(from, "from")?,
            destination: parse_lonlat(to, "to")?,
            profile: parse_profile(&profile_value(profile)?).map_err(|e| e.to_string())?,
            query_date: date,
        })
    })();
    let request = match request {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let ctx = RouteContext {
        graph: loaded.graph,
        projection: loaded.projection,
        snap_radius: config.snap_radius,
    };
    match ctx.route(&request, chrono::Local::now().date_naive()) {
        Ok(resp) => {
            emit(&render(&resp));
            ExitCode::SUCCESS
        }
        Err(e) => {
            emit(&render(&e.body()));
            eprintln!("error: {e}");
            match e {
                ApiError { status: 422, .. } => ExitCode::from(EXIT_UNROUTABLE),
                ApiError { status: 404, .. } => ExitCode::from(EXIT_NO_ROUTE),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Build {
            sidewalks,
            streets,
            curbramps,
            elevation,
            permits,
            out,
            config,
            repairs,
        } => {
            let config = load_config(config.as_deref())?;
            let paths = DatasetPaths {
                sidewalks,
                streets,
                curb_ramps: curbramps,
                elevation,
                permits,
            };
            let (data, built) = build_dataset(&paths, &config)?;
            for id in &built.validation.orphan_ramps {
                eprintln!("warning: curb ramp {id} is not near any sidewalk");
            }
            write_build(&data, &built, &out, repairs.as_deref())?;
            let c = &built.coverage;
            eprintln!(
                "wrote {}: {} nodes, {} edges, {} component(s)",
                out.display(),
                built.graph.nodes().len(),
                built.graph.edges().len(),
                c.component_count
            );
            Ok(())
        }
        Command::Serve {
            graph,
            port,
            host,
            config,
            cors_origin,
        } => {
            let config = load_config(config.as_deref())?;
            let loaded = load_graph(&graph)?;
            let ctx = Arc::new(RouteContext {
                graph: loaded.graph,
                projection: loaded.projection,
                snap_radius: config.snap_radius,
            });
            let runtime = tokio::runtime::Runtime::new().map_err(|source| Error::Io { path: graph.clone(), source })?;
            runtime
                .block_on(walkgraph::service::serve(ctx, SocketAddr::new(host, port), cors_origin.as_deref()))
                .map_err(|source| Error::Io { path: graph, source })
        }
        Command::Report { graph } => {
            let loaded = load_graph(&graph)?;
            let Some(coverage) = loaded.coverage else {
                return Err(Error::Config {
                    path: graph,
                    message: "graph has no coverage report".into(),
                });
            };
            emit(&pretty(&coverage));
            Ok(())
        }
        Command::Synth {
            preset,
            out,
            seed,
            sigma,
            blocks_x,
            blocks_y,
        } => {
            let base = synth::preset(&preset).ok_or_else(|| Error::Config {
                path: out.clone(),
                message: format!("unknown preset {preset:?} (expected one of {})", synth::PRESET_NAMES.join(", ")),
            })?;
            let params = CityParams {
                seed: seed.unwrap_or(base.seed),
                noise_sigma: sigma.unwrap_or(base.noise_sigma),
                blocks_x: blocks_x.unwrap_or(base.blocks_x),
                blocks_y: blocks_y.unwrap_or(base.blocks_y),
                ..base
            };
            let city = generate_city(&params)?;
            write_dataset(&city, &out)?;
            eprintln!("wrote {} streets and {} sidewalks to {}", city.streets.len(), city.sidewalks.len(), out.display());
            Ok(())
        }
        Command::Evaluate { dataset, config } => {
            let config = match config {
                Some(p) => Config::load(&p)?,
                None => {
                    let p = dataset.join(synth::files::CONFIG);
                    if p.is_file() {
                        Config::load(&p)?
                    } else {
                        Config::default()
                    }
                }
            };
            let truth_path = dataset.join(synth::files::TRUTH);
            let truth: GroundTruth = read_json(&truth_path)?;
            let params: CityParams = read_json(&dataset.join(synth::files::PARAMS))?;
            let data = load_dataset(&DatasetPaths::in_dir(&dataset), &config)?;
            let card = evaluate_pipeline(&data.inputs(), &truth, &config.build(), params.sidewalk_offset)?;
            emit(&pretty(&card));
            Ok(())
        }
        Command::Route { .. } => unreachable!("handled separately"),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Route {
            graph,
            from,
            to,
            profile,
            date,
            config,
        } => run_route(&graph, &from, &to, &profile, date, config.as_deref()),
        command => match run(command) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(e),
        },
    }
}
