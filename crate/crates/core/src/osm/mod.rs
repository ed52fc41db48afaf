//! Ingestion of OSM XML indoor cartography.

pub mod build;
pub mod parse;
pub mod tags;

pub use build::{build_from_osm, IngestOptions, IngestReport, LEVEL_HEIGHT_M, MIN_LINK_LENGTH_M};
pub use parse::{parse_osm, OsmDocument, OsmNode, OsmWay, Tags};
pub use tags::{map_tags, parse_levels, Classification, ElementKind, Role};
