use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::BuildingGraph;
use crate::routing::profile::{apply_profile, segment_violations, CostParams, Profile, Violation, WeightedView};
use crate::routing::search::{search, Path};

/// Where a route starts or ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endpoint {
    Place(String),
    /// A room, reached at any of its anchor places.
    Room { room_id: String, anchors: Vec<String> },
}

impl Endpoint {
    pub fn place_ids(&self) -> &[String] {
        match self {
            Endpoint::Place(id) => std::slice::from_ref(id),
            Endpoint::Room { anchors, .. } => anchors,
        }
    }

    fn indices(&self, graph: &BuildingGraph) -> Result<Vec<usize>> {
        let ids = self.place_ids();
        if ids.is_empty() {
            return Err(Error::InvalidInput("endpoint without places".into()));
        }
        let mut out: Vec<usize> = ids
            .iter()
            .map(|id| graph.place_index(id).ok_or_else(|| Error::UnknownPlace(id.clone())))
            .collect::<Result<_>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

/// Resolves a user query to an endpoint: a room id, a place id, an exact
/// room name or ref, then a unique case-insensitive prefix of one.
pub fn resolve_endpoint(graph: &BuildingGraph, query: &str) -> Result<Endpoint> {
    let room_endpoint = |r: &crate::graph::Room| Endpoint::Room {
        room_id: r.id.clone(),
        anchors: r.anchors.clone(),
    };
    if let Some(room) = graph.room(query) {
        return Ok(room_endpoint(room));
    }
    if graph.place_index(query).is_some() {
        return Ok(Endpoint::Place(query.to_string()));
    }

    let labels = |r: &crate::graph::Room| {
        [r.name.as_deref(), r.reference.as_deref()]
            .into_iter()
            .flatten()
            .map(str::to_string)
            .collect::<Vec<_>>()
    };
    let exact: Vec<_> = graph
        .rooms()
        .iter()
        .filter(|r| labels(r).iter().any(|l| l == query))
        .collect();
    let matches = if exact.is_empty() {
        let q = query.to_lowercase();
        graph
            .rooms()
            .iter()
            .filter(|r| labels(r).iter().any(|l| l.to_lowercase().starts_with(&q)))
            .collect()
    } else {
        exact
    };
    match matches.as_slice() {
        [] => Err(Error::UnknownPlace(query.to_string())),
        [room] => Ok(room_endpoint(room)),
        many => Err(Error::AmbiguousRoom {
            query: query.to_string(),
            candidates: many
                .iter()
                .map(|r| format!("{} ({})", r.name.as_deref().unwrap_or("?"), r.id))
                .collect(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub place_ids: Vec<String>,
    pub segment_ids: Vec<String>,
    pub distance_m: f64,
    pub cost: f64,
    pub levels_visited: Vec<i32>,
    pub violations: Vec<Violation>,
}

impl Route {
    fn from_path(graph: &BuildingGraph, path: &Path, profile: &Profile) -> Route {
        let mut levels_visited: Vec<i32> = path.places.iter().map(|&p| graph.place(p).level).collect();
        levels_visited.dedup();
        Route {
            place_ids: path.places.iter().map(|&p| graph.place(p).id.clone()).collect(),
            segment_ids: path.segments.iter().map(|&s| graph.segment(s).id.clone()).collect(),
            distance_m: path.segments.iter().map(|&s| graph.segment(s).length_m).sum(),
            cost: path.cost,
            levels_visited,
            violations: path
                .segments
                .iter()
                .flat_map(|&s| segment_violations(graph, s, profile))
                .collect(),
        }
    }

    pub fn is_compliant(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Shortest path on `view` between two endpoints, or `None` when the
/// endpoints are disconnected in the view.
pub fn shortest_path(
    view: &WeightedView,
    from: &Endpoint,
    to: &Endpoint,
    params: &CostParams,
) -> Result<Option<Route>> {
    let graph = view.graph();
    let sources = from.indices(graph)?;
    let targets = to.indices(graph)?;
    Ok(search(view, &sources, &targets, params)
        .map(|path| Route::from_path(graph, &path, &Profile::neutral())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanStatus {
    Both,
    Single,
    NoCompliantRoute,
    Unreachable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutePlan {
    pub status: PlanStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adapted: Option<Route>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fastest: Option<Route>,
}

/// The adapted route (shortest on the profile's view) and, when it differs
/// and breaks no hard constraint, the fastest route on raw distances.
pub fn plan_routes(
    graph: &BuildingGraph,
    from: &Endpoint,
    to: &Endpoint,
    profile: &Profile,
    params: &CostParams,
) -> Result<RoutePlan> {
    let sources = from.indices(graph)?;
    let targets = to.indices(graph)?;
    if sources == targets {
        return Err(Error::DegenerateRoute);
    }

    let raw = WeightedView::unfiltered(graph);
    let fastest = search(&raw, &sources, &targets, params)
        .map(|p| Route::from_path(graph, &p, profile));
    let view = apply_profile(graph, profile);
    let adapted = search(&view, &sources, &targets, params)
        .map(|p| Route::from_path(graph, &p, profile));

    let plan = match (adapted, fastest) {
        (Some(adapted), Some(fastest)) => {
            if adapted.segment_ids == fastest.segment_ids || !fastest.is_compliant() {
                RoutePlan {
                    status: PlanStatus::Single,
                    adapted: Some(adapted),
                    fastest: None,
                }
            } else {
                RoutePlan {
                    status: PlanStatus::Both,
                    adapted: Some(adapted),
                    fastest: Some(fastest),
                }
            }
        }
        // The view is a subgraph, so this only happens if the raw search
        // fails where the filtered one succeeds; keep the adapted route.
        (Some(adapted), None) => RoutePlan {
            status: PlanStatus::Single,
            adapted: Some(adapted),
            fastest: None,
        },
        (None, Some(fastest)) => RoutePlan {
            status: PlanStatus::NoCompliantRoute,
            adapted: None,
            fastest: Some(fastest),
        },
        (None, None) => RoutePlan {
            status: PlanStatus::Unreachable,
            adapted: None,
            fastest: None,
        },
    };
    Ok(plan)
}
