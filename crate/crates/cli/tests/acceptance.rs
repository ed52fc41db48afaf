//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p roomfinder-cli --test acceptance`.

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use serde_json::Value;
use tempfile::TempDir;

use roomfinder_core::model::Characteristic::{self, *};
use roomfinder_core::model::PreferenceLevel::{self, *};
use roomfinder_core::routing::search::search;
use roomfinder_core::{
    apply_profile, audit_connectivity, build_graph, plan_routes, resolve_endpoint, shortest_path,
    transform_weight, BuildingGraph, Characteristics, CostParams, DisplayGeometry, Endpoint, PlaceKind,
    PlanStatus, Profile, Route, RoutePlan, WeightedView,
};
use roomfinder_testkit::fixtures::{
    mini_rockefeller_graph, mini_rockefeller_osm, osm_counts, osm_ids, permute_osm, place, segment,
};
use roomfinder_testkit::oracle;
use roomfinder_testkit::random::{random_case, Limits};

const RANDOM_SEEDS: u64 = 200;

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    check: fn(),
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            name: "factor table: 10 m edge over all seven levels",
            limit: Some(Duration::from_secs(1)),
            check: factor_table,
        },
        Criterion {
            name: "elevator do_not_want gives stairs + faster elevator alternative",
            limit: Some(Duration::from_secs(1)),
            check: elevator_averse,
        },
        Criterion {
            name: "elevator indispensable gives a single elevator route",
            limit: None,
            check: elevator_dependent,
        },
        Criterion {
            name: "identity profile: adapted equals fastest for every routable pair",
            limit: None,
            check: identity_profile,
        },
        Criterion {
            name: "Dijkstra matches exhaustive simple-path enumeration on random graphs",
            limit: Some(Duration::from_secs(30)),
            check: dijkstra_oracle,
        },
        Criterion {
            name: "audit: connected fixture, cut door link, brute-force pair oracle",
            limit: None,
            check: audit_correctness,
        },
        Criterion {
            name: "per-profile unreachability: stairs-only access with stairs impossible",
            limit: None,
            check: per_profile_unreachability,
        },
        Criterion {
            name: "ingest: frozen fixture counts and permutation invariance",
            limit: None,
            check: ingest_round_trip,
        },
        Criterion {
            name: "turn penalty: A-C-B vs A-B optimum flips between 2.0 and 0.5",
            limit: None,
            check: turn_penalty,
        },
    ];

    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.check));
        let elapsed = start.elapsed();
        let verdict = match outcome {
            Err(payload) => Err(panic_message(payload)),
            Ok(()) => match c.limit {
                Some(limit) if elapsed > limit => Err(format!("took {elapsed:?}, limit {limit:?}")),
                _ => Ok(()),
            },
        };
        match verdict {
            Ok(()) => println!("PASS  {}  ({} ms)", c.name, elapsed.as_millis()),
            Err(why) => {
                failed += 1;
                println!("FAIL  {}  ({} ms): {why}", c.name, elapsed.as_millis());
            }
        }
    }
    let _ = panic::take_hook();
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else if let Some(s) = payload.downcast_ref::<&str>() {
        s.to_string()
    } else {
        "panicked".into()
    }
}

fn roomfinder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roomfinder"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn plan(graph: &BuildingGraph, from: &str, to: &str, profile: &Profile) -> RoutePlan {
    plan_routes(
        graph,
        &resolve_endpoint(graph, from).unwrap(),
        &resolve_endpoint(graph, to).unwrap(),
        profile,
        &CostParams::default(),
    )
    .unwrap()
}

fn uses(route: &Route, segment: &str) -> bool {
    route.segment_ids.iter().any(|s| s == segment)
}

fn factor_table() {
    let expected: [(PreferenceLevel, f64); 7] = [
        (Indispensable, 0.01),
        (Want, 0.1),
        (Prefer, 1.0),
        (Neutral, 10.0),
        (PreferNot, 100.0),
        (DoNotWant, 1000.0),
        (Impossible, 10000.0),
    ];
    for c in Characteristic::ALL {
        let edge = Characteristics::new().with(c);
        for (level, weight) in expected {
            let got = transform_weight(10.0, edge, &Profile::neutral().with(c, level));
            assert_eq!(got, weight, "{c:?} at {level:?}");
        }
    }
}

fn elevator_averse() {
    let graph = mini_rockefeller_graph();
    let plan = plan(&graph, "Assoc", "BU", &Profile::neutral().with(Elevator, DoNotWant));
    assert_eq!(plan.status, PlanStatus::Both);
    let adapted = plan.adapted.unwrap();
    let fastest = plan.fastest.unwrap();
    assert!(osm_ids::STAIRS.iter().any(|s| uses(&adapted, s)), "adapted avoids stairs");
    assert!(!uses(&adapted, osm_ids::ELEVATOR), "adapted takes the elevator");
    assert!(uses(&fastest, osm_ids::ELEVATOR), "fastest skips the elevator");
    assert!(fastest.distance_m < adapted.distance_m);
}

fn elevator_dependent() {
    let graph = mini_rockefeller_graph();
    let plan = plan(&graph, "Assoc", "BU", &Profile::neutral().with(Elevator, Indispensable));
    assert_eq!(plan.status, PlanStatus::Single);
    assert!(plan.fastest.is_none());
    let route = plan.adapted.unwrap();
    assert!(uses(&route, osm_ids::ELEVATOR));
    assert!(!osm_ids::STAIRS.iter().any(|s| uses(&route, s)));
}

fn identity_profile() {
    let graph = mini_rockefeller_graph();
    let routable: Vec<_> = graph.places().iter().filter(|p| p.kind.is_routable()).collect();
    let params = CostParams::default();
    let raw = WeightedView::unfiltered(&graph);
    for a in &routable {
        for b in &routable {
            if a.id == b.id {
                continue;
            }
            let from = Endpoint::Place(a.id.clone());
            let to = Endpoint::Place(b.id.clone());
            let plan = plan_routes(&graph, &from, &to, &Profile::neutral(), &params).unwrap();
            assert_eq!(plan.status, PlanStatus::Single, "{} -> {}", a.id, b.id);
            let fastest = shortest_path(&raw, &from, &to, &params).unwrap().unwrap();
            assert_eq!(plan.adapted.unwrap().segment_ids, fastest.segment_ids);
        }
    }
}

fn dijkstra_oracle() {
    let mut compared = 0;
    for seed in 0..RANDOM_SEEDS {
        let case = random_case(seed, Limits::default());
        assert!(case.graph.places().len() <= 12 && case.graph.segments().len() <= 20);
        let view = apply_profile(&case.graph, &case.profile);
        let weights = oracle::weights(&case.graph, &case.profile);
        let params = CostParams::new(case.turn_penalty_m).unwrap();
        let n = case.graph.places().len();
        for a in 0..n {
            for b in (0..n).filter(|&b| b != a) {
                let got = search(&view, &[a], &[b], &params).map(|p| p.cost);
                let want = oracle::min_cost(&case.graph, &weights, &[a], &[b], case.turn_penalty_m);
                match (got, want) {
                    (Some(g), Some(w)) => assert!((g - w).abs() <= 1e-9, "seed {seed}: {g} vs {w}"),
                    (None, None) => {}
                    other => panic!("seed {seed} {a}->{b}: {other:?}"),
                }
                compared += 1;
            }
        }
    }
    assert!(compared > 0);
}

fn audit_correctness() {
    let dir = TempDir::new().unwrap();
    let connected = mini_rockefeller_graph();
    assert_eq!(audit_connectivity(&connected, None).unroutable_rate, 0.0);
    let path = dir.path().join("connected.json");
    connected.save(&path).unwrap();
    assert_eq!(roomfinder(&["audit", path_str(&path)]).status.code(), Some(0));

    let cut = connected.without_segments(&[osm_ids::D0_CORRIDOR]).unwrap();
    let report = audit_connectivity(&cut, None);
    assert!(report.unroutable_rate > 0.0);
    assert!(report.orphans.iter().any(|o| o == osm_ids::ASSOC_ANCHOR));
    let path = dir.path().join("cut.json");
    cut.save(&path).unwrap();
    let out = roomfinder(&["audit", path_str(&path)]);
    assert_eq!(out.status.code(), Some(3));
    let printed: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(printed["unroutable_rate"].as_f64(), Some(report.unroutable_rate));

    for seed in 0..RANDOM_SEEDS {
        let case = random_case(seed, Limits::default());
        for profile in [None, Some(&case.profile)] {
            let report = audit_connectivity(&case.graph, profile);
            let weights = oracle::weights(&case.graph, profile.unwrap_or(&Profile::neutral()));
            let (broken, total) = oracle::unroutable_pairs(&case.graph, &weights);
            let rate = if total == 0 { 0.0 } else { broken as f64 / total as f64 };
            assert_eq!(report.unroutable_rate, rate, "seed {seed}");
        }
    }
}

fn per_profile_unreachability() {
    let graph = mini_rockefeller_graph().without_segments(&[osm_ids::ELEVATOR]).unwrap();
    let profile = Profile::neutral().with(Stairs, Impossible);
    let plan = plan(&graph, "Assoc", "BU", &profile);
    assert_eq!(plan.status, PlanStatus::NoCompliantRoute);
    let fastest = plan.fastest.expect("fastest route returned");
    assert!(!fastest.violations.is_empty(), "fastest route is not flagged");

    let report = audit_connectivity(&graph, Some(&profile));
    let weights = oracle::weights(&graph, &profile);
    let routable: Vec<usize> = (0..graph.places().len())
        .filter(|&i| graph.place(i).kind.is_routable())
        .collect();
    let mut cross = 0;
    for (k, &a) in routable.iter().enumerate() {
        for &b in &routable[k + 1..] {
            if graph.place(a).level != graph.place(b).level {
                cross += 1;
                assert!(!oracle::connected(&graph, &weights, a, b));
            }
        }
    }
    assert!(cross > 0);
    assert_eq!(report.unroutable_pairs, cross);
}

fn ingest_round_trip() {
    let dir = TempDir::new().unwrap();
    let ingest = |input: &Path, output: &Path| {
        let out = roomfinder(&["ingest", "--input", path_str(input), "--output", path_str(output)]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        (report, BuildingGraph::load(output).unwrap())
    };

    let (report, graph) = ingest(&mini_rockefeller_osm(), &dir.path().join("a.json"));
    assert_eq!(report["rooms"], osm_counts::ROOMS);
    assert_eq!(report["places"], osm_counts::PLACES);
    assert_eq!(report["segments"], osm_counts::SEGMENTS);
    assert_eq!(graph.rooms().len(), osm_counts::ROOMS);
    assert_eq!(graph.places().len(), osm_counts::PLACES);
    assert_eq!(graph.segments().len(), osm_counts::SEGMENTS);

    let text = std::fs::read_to_string(mini_rockefeller_osm()).unwrap();
    let permuted = dir.path().join("mini_rockefeller.osm");
    std::fs::write(&permuted, permute_osm(&text, 7)).unwrap();
    let (_, again) = ingest(&permuted, &dir.path().join("b.json"));
    // Only the ingest timestamp may differ.
    let canonical = |g: &BuildingGraph| {
        let mut v: Value = serde_json::from_str(&g.to_json().unwrap()).unwrap();
        v["meta"]["ingested_at"] = Value::Null;
        v
    };
    assert_eq!(canonical(&graph), canonical(&again));
}

fn turn_penalty() {
    let places = ["a", "b", "c"]
        .into_iter()
        .map(|id| place(id, PlaceKind::Door, 0.0, 0.0, 0, &[]))
        .collect();
    let segments = vec![
        segment("ab", "a", "b", 5.0, &[]),
        segment("ac", "a", "c", 2.0, &[]),
        segment("cb", "c", "b", 2.0, &[]),
    ];
    let graph = build_graph(places, segments, DisplayGeometry::default()).unwrap();
    let view = WeightedView::unfiltered(&graph);
    let (a, b) = (Endpoint::Place("a".into()), Endpoint::Place("b".into()));

    // Enumerate both simple paths and pick the cheaper one independently.
    for penalty in [2.0, 0.5] {
        let direct = 5.0;
        let via_c = 2.0 + 2.0 + penalty;
        let expected: &[&str] = if direct <= via_c { &["a", "b"] } else { &["a", "c", "b"] };
        let route = shortest_path(&view, &a, &b, &CostParams::new(penalty).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(route.place_ids, expected, "penalty {penalty}");
        assert_eq!(route.cost, direct.min(via_c));
    }
}
