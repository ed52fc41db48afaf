//! GeoJSON views of a graph: per-level floor plans and route geometry.
//!
//! Every coordinate emitted here is copied from the graph; nothing is
//! interpolated.

use serde_json::{json, Value};

use crate::graph::BuildingGraph;
use crate::model::{PlaceKind, Position};
use crate::routing::plan::Route;

fn coords(points: &[Position]) -> Value {
    Value::Array(points.iter().map(|p| json!([p.lon, p.lat])).collect())
}

fn feature(geometry: Value, properties: Value) -> Value {
    json!({ "type": "Feature", "geometry": geometry, "properties": properties })
}

fn collection(features: Vec<Value>) -> Value {
    json!({ "type": "FeatureCollection", "features": features })
}

/// Floor plan of one level of a building: room polygons, corridor lines
/// and point markers for doors, entrances, stairs and elevators.
///
/// Outdoor ways without a building are included on the levels they carry.
pub fn level_plan(graph: &BuildingGraph, building_id: &str, level: i32) -> Value {
    let in_building = |b: &Option<String>| b.is_none() || b.as_deref() == Some(building_id);
    let mut features = Vec::new();

    for room in graph.rooms() {
        if room.level != level || room.building_id.as_deref() != Some(building_id) {
            continue;
        }
        features.push(feature(
            json!({ "type": "Polygon", "coordinates": [coords(&room.polygon)] }),
            json!({
                "kind": "room",
                "id": room.id,
                "name": room.name,
                "ref": room.reference,
                "level": room.level,
                "place_id": room.place_id,
            }),
        ));
    }

    for corridor in graph.corridors() {
        if !corridor.levels.contains(&level) || !in_building(&corridor.building_id) {
            continue;
        }
        features.push(feature(
            json!({ "type": "LineString", "coordinates": coords(&corridor.polyline) }),
            json!({
                "kind": "corridor",
                "id": corridor.id,
                "levels": corridor.levels,
                "indoor": corridor.indoor,
                "characteristics": corridor.characteristics,
            }),
        ));
    }

    for place in graph.places() {
        let marker = matches!(
            place.kind,
            PlaceKind::Door | PlaceKind::Entrance | PlaceKind::StairsNode | PlaceKind::ElevatorNode
        );
        if !marker || place.level != level || !in_building(&place.building_id) {
            continue;
        }
        features.push(feature(
            json!({ "type": "Point", "coordinates": [place.position.lon, place.position.lat] }),
            json!({
                "kind": place.kind,
                "place_id": place.id,
                "name": place.name,
                "level": place.level,
                "characteristics": place.characteristics,
            }),
        ));
    }

    collection(features)
}

/// Route geometry: one LineString per run of consecutive places on the
/// same level, plus a feature for each segment that changes level.
pub fn route_geometry(graph: &BuildingGraph, route: &Route) -> Value {
    let places: Vec<_> = route
        .place_ids
        .iter()
        .filter_map(|id| graph.place_by_id(id))
        .collect();
    let mut features = Vec::new();

    let mut run: Vec<Position> = Vec::new();
    let flush = |run: &mut Vec<Position>, level: i32, features: &mut Vec<Value>| {
        if run.len() >= 2 {
            features.push(feature(
                json!({ "type": "LineString", "coordinates": coords(run) }),
                json!({ "kind": "path", "level": level }),
            ));
        }
        run.clear();
    };

    for (i, place) in places.iter().enumerate() {
        if let Some(prev) = i.checked_sub(1).map(|j| places[j]) {
            if prev.level != place.level {
                flush(&mut run, prev.level, &mut features);
                let geometry = if prev.position == place.position {
                    json!({ "type": "Point", "coordinates": [place.position.lon, place.position.lat] })
                } else {
                    json!({ "type": "LineString", "coordinates": coords(&[prev.position, place.position]) })
                };
                let segment = route.segment_ids.get(i - 1).and_then(|s| graph.segment_index(s));
                features.push(feature(
                    geometry,
                    json!({
                        "kind": "transition",
                        "segment_id": route.segment_ids.get(i - 1),
                        "from_level": prev.level,
                        "to_level": place.level,
                        "characteristics": segment.map(|s| graph.effective_characteristics(s)),
                    }),
                ));
            }
        }
        run.push(place.position);
    }
    if let Some(last) = places.last() {
        flush(&mut run, last.level, &mut features);
    }

    collection(features)
}
