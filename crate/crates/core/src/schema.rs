//! Versioned JSON persistence of a [`BuildingGraph`] (`*.graph.json`).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    Building, BuildingGraph, Corridor, DisplayGeometry, GraphMeta, Place, Room, Segment,
    SCHEMA_VERSION,
};

#[derive(Debug, Serialize, Deserialize)]
struct GraphFile {
    schema_version: u32,
    #[serde(default)]
    buildings: Vec<Building>,
    places: Vec<Place>,
    segments: Vec<Segment>,
    #[serde(default)]
    rooms: Vec<Room>,
    #[serde(default)]
    corridors: Vec<Corridor>,
    #[serde(default)]
    meta: GraphMeta,
}

impl BuildingGraph {
    pub fn to_json(&self) -> Result<String> {
        let file = GraphFile {
            schema_version: SCHEMA_VERSION,
            buildings: self.buildings().to_vec(),
            places: self.places().to_vec(),
            segments: self.segments().to_vec(),
            rooms: self.rooms().to_vec(),
            corridors: self.corridors().to_vec(),
            meta: self.meta().clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Parses and validates a graph document. Unknown top-level keys are
    /// ignored; unknown characteristic names are rejected.
    pub fn from_json(text: &str) -> Result<BuildingGraph> {
        let file: GraphFile = serde_json::from_str(text)?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::SchemaVersion(file.schema_version));
        }
        BuildingGraph::build(
            file.places,
            file.segments,
            DisplayGeometry {
                rooms: file.rooms,
                corridors: file.corridors,
                buildings: file.buildings,
                meta: file.meta,
            },
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<BuildingGraph> {
        let text = fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }
}
