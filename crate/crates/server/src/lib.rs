//! HTTP service over one or more loaded building graphs.
//!
//! Graphs are loaded once at startup and shared read-only by every
//! request; restart the service to pick up a new ingest.

mod error;
mod handlers;

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::routing::{get, post};
use axum::Router;
use tower_http::cors::{Any, CorsLayer};
use tower_http::services::ServeDir;

use roomfinder_core::{BuildingGraph, CostParams};

pub use error::ApiError;

pub const DEFAULT_SNAP_RADIUS_M: f64 = 50.0;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub addr: SocketAddr,
    pub graph_paths: Vec<PathBuf>,
    pub turn_penalty_m: Option<f64>,
    pub static_dir: Option<PathBuf>,
    pub snap_radius_m: f64,
}

impl ServiceConfig {
    pub fn new(addr: SocketAddr, graph_paths: Vec<PathBuf>) -> Self {
        ServiceConfig {
            addr,
            graph_paths,
            turn_penalty_m: None,
            static_dir: None,
            snap_radius_m: DEFAULT_SNAP_RADIUS_M,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StartupError {
    #[error("no graph file given")]
    NoGraphs,
    #[error("port must be in 1..=65535")]
    Port,
    #[error("{path}: {source}")]
    Graph {
        path: String,
        source: roomfinder_core::Error,
    },
    #[error("building {id:?} appears in both {first} and {second}")]
    DuplicateBuilding { id: String, first: String, second: String },
    #[error(transparent)]
    Params(roomfinder_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Loaded graphs plus the routing parameters shared by all requests.
#[derive(Debug)]
pub struct AppState {
    graphs: Vec<BuildingGraph>,
    /// Building id to index in `graphs`.
    buildings: BTreeMap<String, usize>,
    params: CostParams,
    snap_radius_m: f64,
}

impl AppState {
    pub fn new(graphs: Vec<(String, BuildingGraph)>, params: CostParams, snap_radius_m: f64) -> Result<Self, StartupError> {
        if graphs.is_empty() {
            return Err(StartupError::NoGraphs);
        }
        let mut buildings = BTreeMap::new();
        let mut sources: BTreeMap<String, String> = BTreeMap::new();
        for (i, (name, graph)) in graphs.iter().enumerate() {
            for b in graph.buildings() {
                if let Some(first) = sources.insert(b.id.clone(), name.clone()) {
                    return Err(StartupError::DuplicateBuilding {
                        id: b.id.clone(),
                        first,
                        second: name.clone(),
                    });
                }
                buildings.insert(b.id.clone(), i);
            }
        }
        Ok(AppState {
            graphs: graphs.into_iter().map(|(_, g)| g).collect(),
            buildings,
            params,
            snap_radius_m,
        })
    }

    /// Reads and validates every graph file of the configuration.
    pub fn load(config: &ServiceConfig) -> Result<Self, StartupError> {
        if config.graph_paths.is_empty() {
            return Err(StartupError::NoGraphs);
        }
        if config.addr.port() == 0 {
            return Err(StartupError::Port);
        }
        let params = match config.turn_penalty_m {
            Some(p) => CostParams::new(p).map_err(StartupError::Params)?,
            None => CostParams::default(),
        };
        let graphs = config
            .graph_paths
            .iter()
            .map(|path| {
                let name = path.display().to_string();
                BuildingGraph::load(path)
                    .map(|g| (name.clone(), g))
                    .map_err(|source| StartupError::Graph { path: name, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        AppState::new(graphs, params, config.snap_radius_m)
    }

    pub fn building_count(&self) -> usize {
        self.buildings.len()
    }

    fn graph_of(&self, building_id: &str) -> Result<&BuildingGraph, ApiError> {
        self.buildings
            .get(building_id)
            .map(|&i| &self.graphs[i])
            .ok_or_else(|| ApiError::unknown_building(building_id))
    }
}

/// All API routes, with CORS open to any origin. When `static_dir` is set,
/// unmatched paths are served from it (the web UI bundle).
pub fn router(state: Arc<AppState>, static_dir: Option<&Path>) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods(Any)
        .allow_headers(Any);
    let api = Router::new()
        .route("/health", get(handlers::health))
        .route("/buildings", get(handlers::buildings))
        .route("/buildings/{id}/levels", get(handlers::levels))
        .route("/buildings/{id}/levels/{level}/plan", get(handlers::plan))
        .route("/buildings/{id}/places", get(handlers::places))
        .route("/buildings/{id}/audit", get(handlers::audit))
        .route("/route", post(handlers::route))
        .with_state(state);
    let app = match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    app.layer(cors)
}

/// Loads the graphs, binds the address and serves until the process ends.
pub async fn serve(config: ServiceConfig) -> Result<(), StartupError> {
    let state = Arc::new(AppState::load(&config)?);
    let app = router(state, config.static_dir.as_deref());
    let listener = tokio::net::TcpListener::bind(config.addr).await?;
    axum::serve(listener, app).await?;
    Ok(())
}
