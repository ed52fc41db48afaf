use std::collections::BTreeMap;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::Json;
use serde::Deserialize;
use serde_json::{json, Value};

use roomfinder_core::geojson::{level_plan, route_geometry};
use roomfinder_core::{
    audit_building, geodesic_length, plan_routes, resolve_endpoint, BuildingGraph, CostParams, Endpoint,
    Error, PlaceKind, Position, Profile, Route,
};

use crate::{ApiError, AppState};

type Shared = State<Arc<AppState>>;
type ApiResult = Result<Json<Value>, ApiError>;

pub async fn health(State(state): Shared) -> Json<Value> {
    Json(json!({ "status": "ok", "buildings": state.building_count() }))
}

pub async fn buildings(State(state): Shared) -> Json<Value> {
    let list: Vec<Value> = state
        .buildings
        .iter()
        .map(|(id, &g)| {
            let graph = &state.graphs[g];
            let b = graph.building(id).expect("indexed building exists");
            json!({
                "id": b.id,
                "name": b.name,
                "min_level": b.min_level,
                "max_level": b.max_level,
                "levels": graph.levels(Some(id)),
            })
        })
        .collect();
    Json(Value::Array(list))
}

pub async fn levels(State(state): Shared, Path(id): Path<String>) -> ApiResult {
    let graph = state.graph_of(&id)?;
    Ok(Json(json!({ "building_id": id, "levels": graph.levels(Some(&id)) })))
}

pub async fn plan(State(state): Shared, Path((id, level)): Path<(String, String)>) -> ApiResult {
    let graph = state.graph_of(&id)?;
    let level: i32 = level
        .parse()
        .map_err(|_| ApiError::invalid_request(format!("level must be an integer, got {level:?}")))?;
    Ok(Json(level_plan(graph, &id, level)))
}

#[derive(Debug, Deserialize)]
pub struct PlacesQuery {
    #[serde(default)]
    q: String,
}

pub async fn places(State(state): Shared, Path(id): Path<String>, Query(query): Query<PlacesQuery>) -> ApiResult {
    let graph = state.graph_of(&id)?;
    let q = query.q.trim().to_lowercase();
    let hit = |label: Option<&str>| label.is_some_and(|l| l.to_lowercase().contains(&q));

    let mut results: Vec<Value> = graph
        .rooms()
        .iter()
        .filter(|r| r.building_id.as_deref() == Some(id.as_str()))
        .filter(|r| q.is_empty() || r.id == query.q || hit(r.name.as_deref()) || hit(r.reference.as_deref()))
        .map(|r| {
            json!({
                "id": r.id,
                "kind": PlaceKind::Room,
                "name": r.name,
                "ref": r.reference,
                "level": r.level,
                "place_id": r.place_id,
                "anchors": r.anchors,
            })
        })
        .collect();
    results.extend(
        graph
            .places()
            .iter()
            .filter(|p| p.kind != PlaceKind::Room && p.building_id.as_deref() == Some(id.as_str()))
            .filter(|p| p.id == query.q || (!q.is_empty() && hit(p.name.as_deref())))
            .map(|p| {
                json!({
                    "id": p.id,
                    "kind": p.kind,
                    "name": p.name,
                    "level": p.level,
                    "place_id": p.id,
                })
            }),
    );
    Ok(Json(json!({ "building_id": id, "places": results })))
}

#[derive(Debug, Deserialize)]
pub struct AuditQuery {
    profile: Option<String>,
}

/// Accepts either a JSON object or `characteristic:level` pairs separated
/// by commas.
fn parse_profile_param(text: &str) -> Result<Profile, ApiError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Profile::neutral());
    }
    if text.starts_with('{') {
        return Ok(Profile::from_json(text)?);
    }
    let pairs = text
        .split(',')
        .map(|pair| {
            pair.split_once(':')
                .map(|(c, l)| (c.trim(), l.trim()))
                .ok_or_else(|| ApiError::invalid_request(format!("expected characteristic:level, got {pair:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Profile::from_pairs(pairs)?)
}

pub async fn audit(State(state): Shared, Path(id): Path<String>, Query(query): Query<AuditQuery>) -> ApiResult {
    let graph = state.graph_of(&id)?;
    let profile = query.profile.as_deref().map(parse_profile_param).transpose()?;
    let report = audit_building(graph, &id, profile.as_ref());
    Ok(Json(serde_json::to_value(report).map_err(Error::from)?))
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum EndpointInput {
    Query(String),
    Coordinates {
        lon: f64,
        lat: f64,
        #[serde(default)]
        level: Option<i32>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RouteRequest {
    from: EndpointInput,
    to: EndpointInput,
    #[serde(default)]
    profile: BTreeMap<String, String>,
    #[serde(default)]
    building: Option<String>,
    #[serde(default)]
    turn_penalty_m: Option<f64>,
}

/// Nearest place within `radius_m`, restricted to `level` when given.
/// Ties go to the smaller place id.
fn snap(graph: &BuildingGraph, at: Position, level: Option<i32>, radius_m: f64) -> Result<Endpoint, ApiError> {
    at.validate().map_err(|e| ApiError::invalid_request(e.to_string()))?;
    let mut best: Option<(f64, &str)> = None;
    for p in graph.places() {
        if level.is_some_and(|l| l != p.level) {
            continue;
        }
        let d = geodesic_length(at, p.position)?;
        if d <= radius_m && best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, &p.id));
        }
    }
    best.map(|(_, id)| Endpoint::Place(id.to_string())).ok_or_else(|| {
        ApiError::snap_failed(format!(
            "no place within {radius_m} m of ({}, {}){}",
            at.lon,
            at.lat,
            level.map(|l| format!(" on level {l}")).unwrap_or_default()
        ))
    })
}

fn resolve(graph: &BuildingGraph, input: &EndpointInput, radius_m: f64) -> Result<Endpoint, ApiError> {
    match input {
        EndpointInput::Query(q) => Ok(resolve_endpoint(graph, q)?),
        EndpointInput::Coordinates { lon, lat, level } => snap(graph, Position::new(*lon, *lat), *level, radius_m),
    }
}

fn route_document(graph: &BuildingGraph, route: Option<Route>) -> Result<Option<Value>, ApiError> {
    let Some(route) = route else { return Ok(None) };
    let geometry = route_geometry(graph, &route);
    let mut doc = serde_json::to_value(route).map_err(Error::from)?;
    doc["geometry"] = geometry;
    Ok(Some(doc))
}

pub async fn route(State(state): Shared, body: Bytes) -> ApiResult {
    let request: RouteRequest =
        serde_json::from_slice(&body).map_err(|e| ApiError::invalid_request(format!("bad route request: {e}")))?;
    let profile = Profile::from_pairs(request.profile.iter().map(|(k, v)| (k.as_str(), v.as_str())))?;
    let params = match request.turn_penalty_m {
        Some(p) => CostParams::new(p)?,
        None => state.params,
    };
    let radius = state.snap_radius_m;

    // Without an explicit building, use the first graph where the origin
    // resolves.
    let (graph, from) = match &request.building {
        Some(id) => {
            let graph = state.graph_of(id)?;
            (graph, resolve(graph, &request.from, radius)?)
        }
        None => {
            let mut last_err = None;
            let mut found = None;
            for graph in &state.graphs {
                match resolve(graph, &request.from, radius) {
                    Ok(from) => {
                        found = Some((graph, from));
                        break;
                    }
                    Err(e) if e.code == "unknown_place" || e.code == "snap_failed" => last_err = Some(e),
                    Err(e) => return Err(e),
                }
            }
            found.ok_or_else(|| last_err.expect("at least one graph is loaded"))?
        }
    };
    let to = resolve(graph, &request.to, radius)?;

    let plan = plan_routes(graph, &from, &to, &profile, &params)?;
    let mut doc = json!({ "status": plan.status });
    if let Some(adapted) = route_document(graph, plan.adapted)? {
        doc["adapted"] = adapted;
    }
    if let Some(fastest) = route_document(graph, plan.fastest)? {
        doc["fastest"] = fastest;
    }
    Ok(Json(doc))
}
