//! `roomfinder`: ingest indoor OSM files, audit and query the resulting
//! graphs, and serve them over HTTP.
//!
//! JSON goes to stdout, human-readable messages to stderr. Exit codes:
//! 0 success, 1 I/O or caller error, 2 invalid map or graph content,
//! 3 audit found unroutable pairs, 4 no compliant route, 5 unreachable.

use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use roomfinder_core::osm::{build_from_osm, parse_osm, IngestOptions};
use roomfinder_core::{
    audit_building, audit_connectivity, plan_routes, resolve_endpoint, BuildingGraph, CostParams, Error,
    PlanStatus, Profile,
};
use roomfinder_server::{serve, ServiceConfig, DEFAULT_SNAP_RADIUS_M};

const EXIT_FAILURE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_UNROUTABLE_PAIRS: u8 = 3;
const EXIT_NO_COMPLIANT_ROUTE: u8 = 4;
const EXIT_UNREACHABLE: u8 = 5;

#[derive(Debug, Parser)]
#[command(name = "roomfinder", version, about = "Personalized indoor route planning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile an .osm file into a graph file and print the ingest report.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Building id for indoor places when the file has no building outline.
        #[arg(long, default_value = "building")]
        default_building: String,
    },
    /// Load a graph file and print a summary; exit 2 if it is invalid.
    Validate { graph: PathBuf },
    /// Print the connectivity report; exit 3 if some pairs are unroutable.
    Audit {
        graph: PathBuf,
        /// JSON profile file: {"characteristic": "level", ...}.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Only count the routable places of this building.
        #[arg(long)]
        building: Option<String>,
    },
    /// Plan the adapted and fastest routes between two places or rooms.
    Route {
        graph: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Meters added per intermediate place.
        #[arg(long, default_value_t = CostParams::DEFAULT_TURN_PENALTY_M)]
        turn_penalty: f64,
    },
    /// Serve the HTTP API for one or more graph files.
    Serve {
        #[arg(long = "graph", required = true)]
        graphs: Vec<PathBuf>,
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        #[arg(long)]
        turn_penalty: Option<f64>,
        /// Directory of static files (the web UI) served under `/`.
        #[arg(long)]
        static_dir: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SNAP_RADIUS_M)]
        snap_radius: f64,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure {
            code: if err.is_structural() { EXIT_INVALID } else { EXIT_FAILURE },
            message: err.to_string(),
        }
    }
}

fn fail(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_FAILURE,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<BuildingGraph, Failure> {
    let text = String::from_utf8(read(path)?)
        .map_err(|_| fail(format!("{}: not UTF-8", path.display())))?;
    BuildingGraph::from_json(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn load_profile(path: Option<&Path>) -> Result<Option<Profile>, Failure> {
    let Some(path) = path else { return Ok(None) };
    let text = String::from_utf8(read(path)?)
        .map_err(|_| fail(format!("{}: not UTF-8", path.display())))?;
    Profile::from_json(&text)
        .map(Some)
        .map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn print_json(value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| fail(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn ingest(input: &Path, output: &Path, default_building: String) -> Result<u8, Failure> {
    let bytes = read(input)?;
    let doc = parse_osm(&bytes)?;
    let options = IngestOptions {
        source: input.file_name().map(|n| n.to_string_lossy().into_owned()),
        ingested_at: Some(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
        default_building_id: default_building,
    };
    let (graph, report) = build_from_osm(&doc, &options)?;
    graph
        .save(output)
        .map_err(|e| fail(format!("{}: {e}", output.display())))?;
    print_json(&report)?;
    eprintln!(
        "wrote {} ({} places, {} segments, {} rooms)",
        output.display(),
        report.places,
        report.segments,
        report.rooms
    );
    if report.rooms_without_doors > 0 {
        eprintln!("warning: {} room(s) without a door are not connected", report.rooms_without_doors);
    }
    Ok(0)
}

fn validate(path: &Path) -> Result<u8, Failure> {
    let graph = load_graph(path)?;
    print_json(&serde_json::json!({
        "places": graph.places().len(),
        "segments": graph.segments().len(),
        "rooms": graph.rooms().len(),
        "buildings": graph.buildings().iter().map(|b| &b.id).collect::<Vec<_>>(),
        "levels": graph.levels(None),
    }))?;
    Ok(0)
}

fn audit(path: &Path, profile: Option<&Path>, building: Option<&str>) -> Result<u8, Failure> {
    let graph = load_graph(path)?;
    let profile = load_profile(profile)?;
    let report = match building {
        Some(id) => {
            if graph.building(id).is_none() {
                return Err(fail(format!("unknown building {id:?}")));
            }
            audit_building(&graph, id, profile.as_ref())
        }
        None => audit_connectivity(&graph, profile.as_ref()),
    };
    print_json(&report)?;
    if report.unroutable_pairs == 0 {
        Ok(0)
    } else {
        eprintln!(
            "{} of {} routable places are cut off; {} pair(s) unroutable",
            report.orphans.len(),
            report.total_places,
            report.unroutable_pairs
        );
        Ok(EXIT_UNROUTABLE_PAIRS)
    }
}

fn route(path: &Path, from: &str, to: &str, profile: Option<&Path>, turn_penalty: f64) -> Result<u8, Failure> {
    let graph = load_graph(path)?;
    let profile = load_profile(profile)?.unwrap_or_default();
    let params = CostParams::new(turn_penalty).map_err(|e| fail(e.to_string()))?;
    let from = resolve_endpoint(&graph, from).map_err(|e| fail(e.to_string()))?;
    let to = resolve_endpoint(&graph, to).map_err(|e| fail(e.to_string()))?;
    let plan = plan_routes(&graph, &from, &to, &profile, &params).map_err(|e| fail(e.to_string()))?;
    print_json(&plan)?;
    Ok(match plan.status {
        PlanStatus::Both | PlanStatus::Single => 0,
        PlanStatus::NoCompliantRoute => {
            eprintln!("no route satisfies the profile; the fastest route is shown with its violations");
            EXIT_NO_COMPLIANT_ROUTE
        }
        PlanStatus::Unreachable => {
            eprintln!("no route exists between these places");
            EXIT_UNREACHABLE
        }
    })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Ingest {
            input,
            output,
            default_building,
        } => ingest(&input, &output, default_building),
        Command::Validate { graph } => validate(&graph),
        Command::Audit {
            graph,
            profile,
            building,
        } => audit(&graph, profile.as_deref(), building.as_deref()),
        Command::Route {
            graph,
            from,
            to,
            profile,
            turn_penalty,
        } => route(&graph, &from, &to, profile.as_deref(), turn_penalty),
        Command::Serve {
            graphs,
            addr,
            turn_penalty,
            static_dir,
            snap_radius,
        } => {
            let config = ServiceConfig {
                addr,
                graph_paths: graphs,
                turn_penalty_m: turn_penalty,
                static_dir,
                snap_radius_m: snap_radius,
            };
            let runtime = tokio::runtime::Runtime::new().map_err(|e| fail(e.to_string()))?;
            eprintln!("listening on http://{addr}");
            runtime
                .block_on(serve(config))
                .map_err(|e| fail(e.to_string()))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
