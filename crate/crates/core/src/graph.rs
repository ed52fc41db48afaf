//! The compiled building graph: places, segments, adjacency and the display
//! geometry carried alongside them.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Characteristics, PlaceKind, Position};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Place {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub kind: PlaceKind,
    pub position: Position,
    pub level: i32,
    #[serde(default)]
    pub characteristics: Characteristics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub building_id: Option<String>,
}

/// Undirected connection between two places.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub id: String,
    pub endpoints: [String; 2],
    pub length_m: f64,
    #[serde(default)]
    pub characteristics: Characteristics,
    /// Levels touched. Filled from the endpoint levels when left empty.
    #[serde(default)]
    pub level_span: BTreeSet<i32>,
}

impl Segment {
    pub fn is_vertical(&self) -> bool {
        self.level_span.len() >= 2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Room {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "ref", default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    pub level: i32,
    pub polygon: Vec<Position>,
    /// The room's own place.
    pub place_id: String,
    /// Places a route to this room may end at: its doors, or the room place
    /// itself when the outline carries no door.
    pub anchors: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub building_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corridor {
    pub id: String,
    pub levels: BTreeSet<i32>,
    pub polyline: Vec<Position>,
    #[serde(default)]
    pub characteristics: Characteristics,
    #[serde(default = "default_true")]
    pub indoor: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub building_id: Option<String>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Building {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub min_level: i32,
    pub max_level: i32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outline: Vec<Position>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ingested_at: Option<String>,
    pub schema_version: u32,
}

impl Default for GraphMeta {
    fn default() -> Self {
        GraphMeta {
            source: None,
            ingested_at: None,
            schema_version: SCHEMA_VERSION,
        }
    }
}

/// Geometry and metadata that are not part of the routable graph itself.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DisplayGeometry {
    pub rooms: Vec<Room>,
    pub corridors: Vec<Corridor>,
    pub buildings: Vec<Building>,
    pub meta: GraphMeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Adjacent {
    pub segment: usize,
    pub neighbor: usize,
}

/// Immutable, validated, undirected graph of a site.
///
/// Places and segments are stored sorted by id, so index order equals id
/// order. Routing relies on that for deterministic tie-breaking.
#[derive(Debug, Clone, PartialEq)]
pub struct BuildingGraph {
    places: Vec<Place>,
    segments: Vec<Segment>,
    endpoints: Vec<(usize, usize)>,
    effective: Vec<Characteristics>,
    adjacency: Vec<Vec<Adjacent>>,
    place_index: HashMap<String, usize>,
    segment_index: HashMap<String, usize>,
    rooms: Vec<Room>,
    corridors: Vec<Corridor>,
    buildings: Vec<Building>,
    meta: GraphMeta,
}

/// Validates the inputs and compiles them into a [`BuildingGraph`].
pub fn build_graph(
    places: Vec<Place>,
    segments: Vec<Segment>,
    display: DisplayGeometry,
) -> Result<BuildingGraph> {
    BuildingGraph::build(places, segments, display)
}

impl BuildingGraph {
    pub fn build(
        mut places: Vec<Place>,
        mut segments: Vec<Segment>,
        display: DisplayGeometry,
    ) -> Result<Self> {
        let DisplayGeometry {
            mut rooms,
            mut corridors,
            mut buildings,
            meta,
        } = display;

        places.sort_by(|a, b| a.id.cmp(&b.id));
        segments.sort_by(|a, b| a.id.cmp(&b.id));
        rooms.sort_by(|a, b| a.id.cmp(&b.id));
        corridors.sort_by(|a, b| a.id.cmp(&b.id));
        buildings.sort_by(|a, b| a.id.cmp(&b.id));

        let mut place_index = HashMap::with_capacity(places.len());
        for (i, place) in places.iter().enumerate() {
            if place.id.is_empty() {
                return Err(Error::Structural("place with empty id".into()));
            }
            place.position.validate().map_err(|e| {
                Error::Structural(format!("place {:?}: {e}", place.id))
            })?;
            if place_index.insert(place.id.clone(), i).is_some() {
                return Err(Error::Structural(format!(
                    "duplicate place id {:?}",
                    place.id
                )));
            }
        }

        let mut segment_index = HashMap::with_capacity(segments.len());
        let mut endpoints = Vec::with_capacity(segments.len());
        let mut adjacency = vec![Vec::new(); places.len()];
        for (i, seg) in segments.iter_mut().enumerate() {
            if segment_index.insert(seg.id.clone(), i).is_some() {
                return Err(Error::Structural(format!(
                    "duplicate segment id {:?}",
                    seg.id
                )));
            }
            let resolve = |pid: &str| {
                place_index.get(pid).copied().ok_or_else(|| {
                    Error::Structural(format!(
                        "segment {:?} references unknown place {pid:?}",
                        seg.id
                    ))
                })
            };
            let a = resolve(&seg.endpoints[0])?;
            let b = resolve(&seg.endpoints[1])?;
            if a == b {
                return Err(Error::Structural(format!(
                    "segment {:?} connects place {:?} to itself",
                    seg.id, seg.endpoints[0]
                )));
            }
            if !seg.length_m.is_finite() || seg.length_m <= 0.0 {
                return Err(Error::Structural(format!(
                    "segment {:?} has invalid length {}",
                    seg.id, seg.length_m
                )));
            }
            let (la, lb) = (places[a].level, places[b].level);
            if seg.level_span.is_empty() {
                seg.level_span.extend([la, lb]);
            }
            if !seg.level_span.contains(&la) || !seg.level_span.contains(&lb) {
                return Err(Error::Structural(format!(
                    "segment {:?} level span {:?} does not cover endpoint levels {la} and {lb}",
                    seg.id, seg.level_span
                )));
            }
            if seg.is_vertical() && !seg.characteristics.intersects_vertical() {
                return Err(Error::Structural(format!(
                    "segment {:?} spans levels {:?} without elevator, stairs or ramp",
                    seg.id, seg.level_span
                )));
            }
            endpoints.push((a, b));
            adjacency[a].push(Adjacent {
                segment: i,
                neighbor: b,
            });
            adjacency[b].push(Adjacent {
                segment: i,
                neighbor: a,
            });
        }
        for list in &mut adjacency {
            list.sort_by_key(|adj| (adj.neighbor, adj.segment));
        }

        let effective = segments
            .iter()
            .zip(&endpoints)
            .map(|(seg, &(a, b))| {
                seg.characteristics
                    .union(places[a].characteristics)
                    .union(places[b].characteristics)
            })
            .collect();

        let mut room_ids = HashSet::new();
        for room in &rooms {
            if !room_ids.insert(room.id.as_str()) {
                return Err(Error::Structural(format!("duplicate room id {:?}", room.id)));
            }
            for pid in std::iter::once(&room.place_id).chain(&room.anchors) {
                if !place_index.contains_key(pid) {
                    return Err(Error::Structural(format!(
                        "room {:?} references unknown place {pid:?}",
                        room.id
                    )));
                }
            }
        }

        Ok(BuildingGraph {
            places,
            segments,
            endpoints,
            effective,
            adjacency,
            place_index,
            segment_index,
            rooms,
            corridors,
            buildings,
            meta,
        })
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn place(&self, index: usize) -> &Place {
        &self.places[index]
    }

    pub fn segment(&self, index: usize) -> &Segment {
        &self.segments[index]
    }

    pub fn place_index(&self, id: &str) -> Option<usize> {
        self.place_index.get(id).copied()
    }

    pub fn segment_index(&self, id: &str) -> Option<usize> {
        self.segment_index.get(id).copied()
    }

    pub fn place_by_id(&self, id: &str) -> Option<&Place> {
        self.place_index(id).map(|i| &self.places[i])
    }

    pub fn neighbors(&self, place: usize) -> &[Adjacent] {
        &self.adjacency[place]
    }

    pub fn endpoints(&self, segment: usize) -> (usize, usize) {
        self.endpoints[segment]
    }

    /// Characteristics of a segment together with those of both endpoints.
    pub fn effective_characteristics(&self, segment: usize) -> Characteristics {
        self.effective[segment]
    }

    pub fn rooms(&self) -> &[Room] {
        &self.rooms
    }

    pub fn corridors(&self) -> &[Corridor] {
        &self.corridors
    }

    pub fn buildings(&self) -> &[Building] {
        &self.buildings
    }

    pub fn building(&self, id: &str) -> Option<&Building> {
        self.buildings.iter().find(|b| b.id == id)
    }

    pub fn meta(&self) -> &GraphMeta {
        &self.meta
    }

    pub fn room(&self, id: &str) -> Option<&Room> {
        self.rooms.iter().find(|r| r.id == id)
    }

    /// Distinct place levels, optionally restricted to one building.
    pub fn levels(&self, building: Option<&str>) -> BTreeSet<i32> {
        self.places
            .iter()
            .filter(|p| building.is_none() || p.building_id.as_deref() == building)
            .map(|p| p.level)
            .collect()
    }

    pub fn display(&self) -> DisplayGeometry {
        DisplayGeometry {
            rooms: self.rooms.clone(),
            corridors: self.corridors.clone(),
            buildings: self.buildings.clone(),
            meta: self.meta.clone(),
        }
    }

    /// Rebuilds the graph without the named segments.
    pub fn without_segments(&self, ids: &[&str]) -> Result<BuildingGraph> {
        for id in ids {
            if self.segment_index(id).is_none() {
                return Err(Error::InvalidInput(format!("unknown segment {id:?}")));
            }
        }
        let segments = self
            .segments
            .iter()
            .filter(|s| !ids.contains(&s.id.as_str()))
            .cloned()
            .collect();
        BuildingGraph::build(self.places.clone(), segments, self.display())
    }

    /// Rebuilds the graph with additional segments.
    pub fn with_segments(&self, extra: Vec<Segment>) -> Result<BuildingGraph> {
        let mut segments = self.segments.clone();
        segments.extend(extra);
        BuildingGraph::build(self.places.clone(), segments, self.display())
    }
}
