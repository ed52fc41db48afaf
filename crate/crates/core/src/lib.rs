//! Personalized indoor route planning over multi-level building graphs.
//!
//! The pipeline is: [`osm`] ingests indoor OSM XML into a [`BuildingGraph`],
//! [`routing`] plans profile-adapted routes on it and [`audit`] measures how
//! well its routable places are connected.

pub mod audit;
pub mod error;
pub mod geo;
pub mod geojson;
pub mod graph;
pub mod model;
pub mod osm;
pub mod routing;
pub mod schema;

pub use audit::{audit_building, audit_connectivity, AuditReport};
pub use error::{Error, Result};
pub use geo::geodesic_length;
pub use graph::{
    build_graph, Building, BuildingGraph, Corridor, DisplayGeometry, GraphMeta, Place, Room, Segment,
    SCHEMA_VERSION,
};
pub use model::{Characteristic, Characteristics, PlaceKind, Polarity, Position, PreferenceLevel};
pub use routing::{
    apply_profile, plan_routes, resolve_endpoint, shortest_path, transform_weight, CostParams, Endpoint,
    PlanStatus, Profile, Route, RoutePlan, Violation, WeightedView,
};
