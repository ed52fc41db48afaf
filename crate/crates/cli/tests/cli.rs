use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use roomfinder_core::{build_graph, BuildingGraph, PlaceKind};
use roomfinder_testkit::fixtures::{mini_graph, mini_rockefeller_graph, mini_rockefeller_osm, osm_counts, osm_ids, place};

fn roomfinder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roomfinder"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn save(dir: &TempDir, name: &str, graph: &BuildingGraph) -> PathBuf {
    let path = dir.path().join(name);
    graph.save(&path).unwrap();
    path
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn ingest_writes_graph_and_report() {
    let dir = TempDir::new().unwrap();
    let output = dir.path().join("site.graph.json");
    let out = roomfinder(&["ingest", "--input", s(&mini_rockefeller_osm()), "--output", s(&output)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["rooms"], osm_counts::ROOMS);
    assert_eq!(report["places"], osm_counts::PLACES);
    assert_eq!(report["segments"], osm_counts::SEGMENTS);

    let graph = BuildingGraph::load(&output).unwrap();
    assert_eq!(graph.rooms().len(), osm_counts::ROOMS);
    assert_eq!(graph.meta().source.as_deref(), Some("mini_rockefeller.osm"));
    assert!(graph.meta().ingested_at.is_some());

    let out = roomfinder(&["validate", s(&output)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["levels"], serde_json::json!([0, 1]));
}

#[test]
fn ingest_missing_file_exits_1() {
    let dir = TempDir::new().unwrap();
    let out = roomfinder(&["ingest", "--input", "/nonexistent/map.osm", "--output", s(&dir.path().join("g.json"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/map.osm"));
}

#[test]
fn ingest_dangling_ref_exits_2() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(mini_rockefeller_osm())
        .unwrap()
        .replace(r#"<nd ref="41"/>"#, r#"<nd ref="999"/>"#);
    let input = write(&dir, "broken.osm", &text);
    let out = roomfinder(&["ingest", "--input", s(&input), "--output", s(&dir.path().join("g.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("999"));
    assert!(!dir.path().join("g.json").exists());
}

#[test]
fn validate_rejects_broken_graph() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "bad.graph.json", r#"{"schema_version": 1, "places": [], "segments": [{"id": "s", "endpoints": ["a", "b"], "length_m": 1.0}]}"#);
    let out = roomfinder(&["validate", s(&path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.graph.json"));
}

#[test]
fn audit_exit_codes() {
    let dir = TempDir::new().unwrap();
    let connected = save(&dir, "ok.json", &mini_rockefeller_graph());
    let out = roomfinder(&["audit", s(&connected)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["unroutable_rate"], 0.0);

    let base = mini_graph();
    let mut places = base.places().to_vec();
    places.push(place("lab", PlaceKind::Room, 40.0, 40.0, 0, &[]));
    let orphaned = build_graph(places, base.segments().to_vec(), base.display()).unwrap();
    let orphaned = save(&dir, "orphan.json", &orphaned);
    let out = roomfinder(&["audit", s(&orphaned)]);
    assert_eq!(out.status.code(), Some(3));
    let report = stdout_json(&out);
    assert_eq!(report["unroutable_pairs"], 5);
    assert_eq!(report["unroutable_rate"].as_f64().unwrap(), 1.0 / 3.0);
    assert_eq!(report["orphans"], serde_json::json!(["lab"]));

    let stairs_only = mini_rockefeller_graph().without_segments(&[osm_ids::ELEVATOR]).unwrap();
    let stairs_only = save(&dir, "stairs.json", &stairs_only);
    let profile = write(&dir, "p.json", r#"{"stairs": "impossible"}"#);
    let out = roomfinder(&["audit", s(&stairs_only), "--profile", s(&profile)]);
    assert_eq!(out.status.code(), Some(3));
    let out = roomfinder(&["audit", s(&stairs_only), "--building", osm_ids::BUILDING]);
    assert_eq!(out.status.code(), Some(0));

    let bad = write(&dir, "bad.json", r#"{"stairs": "rarely"}"#);
    let out = roomfinder(&["audit", s(&stairs_only), "--profile", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn route_exit_codes() {
    let dir = TempDir::new().unwrap();
    let graph = save(&dir, "g.json", &mini_rockefeller_graph());

    let out = roomfinder(&["route", s(&graph), "--from", "Assoc", "--to", "BU"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["status"], "single");

    let dependent = write(&dir, "dependent.json", r#"{"elevator": "indispensable"}"#);
    let out = roomfinder(&["route", s(&graph), "--from", "Assoc", "--to", "BU", "--profile", s(&dependent)]);
    assert_eq!(out.status.code(), Some(0));
    let plan = stdout_json(&out);
    assert_eq!(plan["status"], "single");
    assert!(plan["adapted"]["segment_ids"]
        .as_array()
        .unwrap()
        .iter()
        .any(|s| s == osm_ids::ELEVATOR));

    let averse = write(&dir, "averse.json", r#"{"elevator": "do_not_want"}"#);
    let out = roomfinder(&["route", s(&graph), "--from", "Assoc", "--to", "BU", "--profile", s(&averse)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["status"], "both");

    let stairs_only = save(&dir, "stairs.json", &mini_rockefeller_graph().without_segments(&[osm_ids::ELEVATOR]).unwrap());
    let no_stairs = write(&dir, "nostairs.json", r#"{"stairs": "impossible"}"#);
    let out = roomfinder(&["route", s(&stairs_only), "--from", "Assoc", "--to", "BU", "--profile", s(&no_stairs)]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stdout_json(&out)["status"], "no_compliant_route");

    let cut = save(&dir, "cut.json", &mini_rockefeller_graph().without_segments(&[osm_ids::D0_CORRIDOR]).unwrap());
    let out = roomfinder(&["route", s(&cut), "--from", "Assoc", "--to", "BU"]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(stdout_json(&out)["status"], "unreachable");

    let out = roomfinder(&["route", s(&graph), "--from", "Nowhere", "--to", "BU"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());

    let out = roomfinder(&["route", s(&graph), "--from", "a", "--to", "b", "--turn-penalty=-1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn every_command_has_help() {
    for cmd in ["ingest", "validate", "audit", "route", "serve"] {
        let out = roomfinder(&[cmd, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn serve_fails_on_unreadable_graph() {
    let out = roomfinder(&["serve", "--graph", "/nonexistent/x.graph.json", "--addr", "127.0.0.1:18089"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/x.graph.json"));
}

#[test]
fn serve_answers_health() {
    use std::io::{Read, Write};
    use std::net::{TcpListener, TcpStream};
    use std::time::{Duration, Instant};

    let dir = TempDir::new().unwrap();
    let graph = save(&dir, "g.json", &mini_rockefeller_graph());
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let addr = format!("127.0.0.1:{port}");
    let mut child = Command::new(env!("CARGO_BIN_EXE_roomfinder"))
        .args(["serve", "--graph", s(&graph), "--addr", &addr])
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .spawn()
        .unwrap();

    let deadline = Instant::now() + Duration::from_secs(10);
    let response = loop {
        if let Ok(mut stream) = TcpStream::connect(&addr) {
            stream
                .write_all(b"GET /health HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n")
                .unwrap();
            let mut text = String::new();
            stream.read_to_string(&mut text).unwrap();
            break text;
        }
        assert!(Instant::now() < deadline, "server did not start");
        std::thread::sleep(Duration::from_millis(50));
    };
    child.kill().unwrap();
    child.wait().unwrap();
    assert!(response.starts_with("HTTP/1.1 200"), "{response}");
    assert!(response.contains(r#""status":"ok""#));
}
