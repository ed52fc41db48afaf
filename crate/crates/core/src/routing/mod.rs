//! Profile-adapted shortest paths and the two-itinerary route plan.

pub mod plan;
pub mod profile;
pub mod search;

pub use plan::{plan_routes, resolve_endpoint, shortest_path, Endpoint, PlanStatus, Route, RoutePlan};
pub use profile::{
    apply_profile, segment_violations, transform_weight, CostParams, Profile, Violation, WeightedView,
};
pub use search::{search, Path};
