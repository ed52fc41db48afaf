use std::collections::BTreeSet;

use serde_json::Value;

use roomfinder_core::geojson::{level_plan, route_geometry};
use roomfinder_core::model::Characteristic::*;
use roomfinder_core::model::PreferenceLevel::*;
use roomfinder_core::{plan_routes, resolve_endpoint, CostParams, Profile};
use roomfinder_testkit::fixtures::{mini_rockefeller_graph, osm_ids};

fn names(plan: &Value) -> Vec<String> {
    plan["features"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|f| f["properties"]["kind"] == "room")
        .map(|f| f["properties"]["name"].as_str().unwrap().to_string())
        .collect()
}

fn kinds(plan: &Value, geometry: &str) -> usize {
    plan["features"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|f| f["geometry"]["type"] == geometry)
        .count()
}

#[test]
fn level_plans_show_their_rooms() {
    let graph = mini_rockefeller_graph();
    let ground = level_plan(&graph, osm_ids::BUILDING, 0);
    assert_eq!(ground["type"], "FeatureCollection");
    assert_eq!(names(&ground), ["Assoc"]);
    let first = level_plan(&graph, osm_ids::BUILDING, 1);
    assert_eq!(names(&first), ["BU"]);

    let room = ground["features"]
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["properties"]["kind"] == "room")
        .unwrap();
    assert_eq!(room["geometry"]["type"], "Polygon");
    assert_eq!(room["properties"]["level"], 0);
    assert_eq!(room["properties"]["place_id"], osm_ids::ASSOC_ANCHOR);

    // Level 0: w100, w101, w102, w104, stairs w300 and the footway w400.
    assert_eq!(kinds(&ground, "LineString"), 6);
    // Level 1: w103, w105, w110 and the stairs.
    assert_eq!(kinds(&first, "LineString"), 4);

    let empty = level_plan(&graph, osm_ids::BUILDING, 7);
    assert!(empty["features"].as_array().unwrap().is_empty());
}

#[test]
fn route_geometry_only_uses_graph_coordinates() {
    let graph = mini_rockefeller_graph();
    let known: BTreeSet<(u64, u64)> = graph
        .places()
        .iter()
        .map(|p| (p.position.lon.to_bits(), p.position.lat.to_bits()))
        .collect();
    let plan = plan_routes(
        &graph,
        &resolve_endpoint(&graph, "Assoc").unwrap(),
        &resolve_endpoint(&graph, "BU").unwrap(),
        &Profile::neutral().with(Elevator, DoNotWant),
        &CostParams::default(),
    )
    .unwrap();

    for route in [plan.adapted.unwrap(), plan.fastest.unwrap()] {
        let geo = route_geometry(&graph, &route);
        let features = geo["features"].as_array().unwrap();
        let paths: Vec<_> = features.iter().filter(|f| f["properties"]["kind"] == "path").collect();
        let levels: Vec<_> = paths.iter().map(|f| f["properties"]["level"].as_i64().unwrap()).collect();
        assert_eq!(levels, [0, 1]);
        assert_eq!(
            features.iter().filter(|f| f["properties"]["kind"] == "transition").count(),
            1
        );

        for f in features {
            let coords = &f["geometry"]["coordinates"];
            let points: Vec<&Value> = if f["geometry"]["type"] == "Point" {
                vec![coords]
            } else {
                coords.as_array().unwrap().iter().collect()
            };
            for p in points {
                let lon = p[0].as_f64().unwrap();
                let lat = p[1].as_f64().unwrap();
                assert!(known.contains(&(lon.to_bits(), lat.to_bits())), "{lon},{lat}");
            }
        }
    }
}
