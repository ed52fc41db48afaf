//! Compiles a parsed OSM document into a [`BuildingGraph`].
//!
//! Walkable ways are split into one segment per consecutive node pair.
//! A node tagged with several levels (an elevator or a stair landing shared
//! by several floors) becomes one place per level, chained by transition
//! segments between consecutive levels. Rooms get their own place, linked to
//! each door on their outline. Nothing is snapped: a room whose outline has
//! no door stays disconnected so the connectivity audit can report it.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::{centroid, contains, geodesic_length};
use crate::graph::{
    Building, BuildingGraph, Corridor, DisplayGeometry, GraphMeta, Place, Room, Segment,
    SCHEMA_VERSION,
};
use crate::model::{Characteristics, PlaceKind, Position};
use crate::osm::parse::{OsmDocument, OsmNode, OsmWay};
use crate::osm::tags::{map_tags, parse_levels, Classification, ElementKind, Role};

/// Length of a vertical transition per level climbed.
pub const LEVEL_HEIGHT_M: f64 = 4.0;

/// Minimum length of a room-to-door link.
pub const MIN_LINK_LENGTH_M: f64 = 0.1;

#[derive(Debug, Clone)]
pub struct IngestOptions {
    pub source: Option<String>,
    pub ingested_at: Option<String>,
    /// Building id given to indoor places when the file has no building
    /// outline.
    pub default_building_id: String,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            source: None,
            ingested_at: None,
            default_building_id: "building".into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub places: usize,
    pub segments: usize,
    pub rooms: usize,
    pub entrances: usize,
    pub buildings: usize,
    pub ignored_elements: usize,
    pub rooms_without_doors: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum NodeLevel {
    Single(i32),
    Multi(BTreeSet<i32>),
}

struct WayInfo<'a> {
    way: &'a OsmWay,
    class: Classification,
    levels: BTreeSet<i32>,
    indoor: bool,
}

impl WayInfo<'_> {
    fn single_level(&self) -> Option<i32> {
        match self.levels.len() {
            1 => self.levels.first().copied(),
            _ => None,
        }
    }
}

struct Builder<'a> {
    doc: &'a OsmDocument,
    node_class: BTreeMap<i64, Classification>,
    node_levels: BTreeMap<i64, NodeLevel>,
    node_indoor: BTreeMap<i64, bool>,
    places: BTreeMap<String, Place>,
    indoor_places: BTreeSet<String>,
    segments: Vec<Segment>,
}

pub fn build_from_osm(
    doc: &OsmDocument,
    options: &IngestOptions,
) -> Result<(BuildingGraph, IngestReport)> {
    let mut ignored = 0usize;
    let mut walkable = Vec::new();
    let mut rooms = Vec::new();
    let mut building_ways = Vec::new();

    for way in doc.ways.values() {
        let class = map_tags(ElementKind::Way, &way.tags);
        let info = || -> Result<WayInfo> {
            let levels = match way.tags.get("level") {
                Some(v) => parse_levels(v).map_err(|_| Error::UnsupportedLevel {
                    value: v.clone(),
                    element: Some(format!("way {}", way.id)),
                })?,
                None => BTreeSet::from([0]),
            };
            let indoor = way.tags.get("indoor").is_some_and(|v| v != "no")
                || way.tags.contains_key("level")
                || way.tags.get("highway").is_some_and(|v| v == "corridor");
            Ok(WayInfo {
                way,
                class,
                levels,
                indoor,
            })
        };
        match class.role {
            Some(Role::Walkable) => walkable.push(info()?),
            Some(Role::Room) => rooms.push(info()?),
            Some(Role::Building) if way.is_closed() => building_ways.push(way),
            _ => ignored += 1,
        }
    }

    let mut b = Builder {
        doc,
        node_class: BTreeMap::new(),
        node_levels: BTreeMap::new(),
        node_indoor: BTreeMap::new(),
        places: BTreeMap::new(),
        indoor_places: BTreeSet::new(),
        segments: Vec::new(),
    };
    b.resolve_nodes(&walkable, &rooms)?;

    for node in doc.nodes.values() {
        let class = map_tags(ElementKind::Node, &node.tags);
        let informational = node
            .tags
            .keys()
            .all(|k| matches!(k.as_str(), "level" | "name" | "ref"));
        if class.is_ignored() && !informational && !b.node_levels.contains_key(&node.id) {
            ignored += 1;
        }
    }

    let mut corridors = Vec::new();
    for info in &walkable {
        let first_place = b.split_way(info)?;
        corridors.push((first_place, Corridor {
            id: format!("w{}", info.way.id),
            levels: info.levels.clone(),
            polyline: info.way.nodes.iter().map(|n| doc.nodes[n].position).collect(),
            characteristics: info.class.characteristics,
            indoor: info.indoor,
            building_id: None,
        }));
    }
    b.add_transitions()?;

    let mut room_geometry = Vec::new();
    let mut rooms_without_doors = 0;
    for info in &rooms {
        let room = b.add_room(info)?;
        if room.anchors == [room.place_id.clone()] {
            rooms_without_doors += 1;
        }
        room_geometry.push(room);
    }

    let buildings = b.assign_buildings(&building_ways, &options.default_building_id);
    let corridors: Vec<Corridor> = corridors
        .into_iter()
        .map(|(first_place, mut corridor)| {
            if corridor.indoor {
                corridor.building_id = first_place.and_then(|p| b.places[&p].building_id.clone());
            }
            corridor
        })
        .collect();
    for room in &mut room_geometry {
        room.building_id = b.places[&room.place_id].building_id.clone();
    }

    let entrances = b
        .places
        .values()
        .filter(|p| p.kind == PlaceKind::Entrance)
        .count();
    let graph = BuildingGraph::build(
        b.places.into_values().collect(),
        b.segments,
        DisplayGeometry {
            rooms: room_geometry,
            corridors,
            buildings,
            meta: GraphMeta {
                source: options.source.clone(),
                ingested_at: options.ingested_at.clone(),
                schema_version: SCHEMA_VERSION,
            },
        },
    )?;
    let report = IngestReport {
        places: graph.places().len(),
        segments: graph.segments().len(),
        rooms: graph.rooms().len(),
        entrances,
        buildings: graph.buildings().len(),
        ignored_elements: ignored,
        rooms_without_doors,
    };
    Ok((graph, report))
}

/// OSM node id encoded in a node-derived place id (`n12` or `n12@1`).
fn place_node(place_id: &str) -> Option<i64> {
    let rest = place_id.strip_prefix('n')?;
    rest.split('@').next()?.parse().ok()
}

impl<'a> Builder<'a> {
    fn resolve_nodes(&mut self, walkable: &[WayInfo], rooms: &[WayInfo]) -> Result<()> {
        // Levels of the ways each node belongs to, split by single/multi.
        let mut single: BTreeMap<i64, BTreeSet<i32>> = BTreeMap::new();
        let mut multi: BTreeMap<i64, BTreeSet<i32>> = BTreeMap::new();
        for info in walkable.iter().chain(rooms) {
            for &n in &info.way.nodes {
                match info.single_level() {
                    Some(l) => {
                        single.entry(n).or_default().insert(l);
                    }
                    None => multi.entry(n).or_default().extend(info.levels.iter().copied()),
                }
                let on_room = info.class.role == Some(Role::Room);
                *self.node_indoor.entry(n).or_default() |= info.indoor || on_room;
            }
        }

        let referenced: BTreeSet<i64> = single.keys().chain(multi.keys()).copied().collect();
        for id in referenced {
            let node = &self.doc.nodes[&id];
            let class = map_tags(ElementKind::Node, &node.tags);
            let level = match node.tags.get("level") {
                Some(v) => {
                    let levels = parse_levels(v).map_err(|_| Error::UnsupportedLevel {
                        value: v.clone(),
                        element: Some(format!("node {id}")),
                    })?;
                    if levels.len() == 1 {
                        NodeLevel::Single(*levels.first().unwrap())
                    } else if class.characteristics.intersects_vertical() {
                        NodeLevel::Multi(levels)
                    } else {
                        return Err(Error::Structural(format!(
                            "node {id} spans levels {v:?} but is not an elevator, stairs or ramp"
                        )));
                    }
                }
                None => {
                    let singles = single.get(&id).cloned().unwrap_or_default();
                    match singles.len() {
                        1 => NodeLevel::Single(*singles.first().unwrap()),
                        0 => NodeLevel::Single(
                            multi.get(&id).and_then(|m| m.first().copied()).unwrap_or(0),
                        ),
                        _ => {
                            return Err(Error::Structural(format!(
                                "node {id} is shared by ways on levels {singles:?}; give it a level tag"
                            )))
                        }
                    }
                }
            };
            let indoor = self.node_indoor.entry(id).or_default();
            *indoor |= node.tags.contains_key("level") || class.role.is_some();
            self.node_class.insert(id, class);
            self.node_levels.insert(id, level);
        }
        Ok(())
    }

    /// Place id for `node` as seen from a way on `context` level.
    fn place_for(&mut self, node: &OsmNode, context: Option<i32>, element: &str) -> Result<String> {
        let (id, level) = match &self.node_levels[&node.id] {
            NodeLevel::Single(l) => (format!("n{}", node.id), *l),
            NodeLevel::Multi(levels) => match context {
                Some(l) if levels.contains(&l) => (format!("n{}@{l}", node.id), l),
                _ => {
                    return Err(Error::Structural(format!(
                        "{element} reaches multi-level node {} from level {context:?}, \
                         which is not one of {levels:?}",
                        node.id
                    )))
                }
            },
        };
        if !self.places.contains_key(&id) {
            self.insert_node_place(node, &id, level);
        }
        Ok(id)
    }

    fn insert_node_place(&mut self, node: &OsmNode, id: &str, level: i32) {
        let class = self.node_class[&node.id];
        let indoor = self.node_indoor.get(&node.id).copied().unwrap_or(false);
        let kind = match class.role {
            Some(Role::Entrance) => PlaceKind::Entrance,
            Some(Role::Door) => PlaceKind::Door,
            _ if class.characteristics.contains(crate::model::Characteristic::Elevator) => {
                PlaceKind::ElevatorNode
            }
            _ if class.characteristics.contains(crate::model::Characteristic::Stairs) => {
                PlaceKind::StairsNode
            }
            _ if indoor => PlaceKind::CorridorPoint,
            _ => PlaceKind::OutdoorPoint,
        };
        let name = node.tags.get("name").or_else(|| node.tags.get("ref")).cloned();
        self.places.insert(
            id.to_string(),
            Place {
                id: id.to_string(),
                name,
                kind,
                position: node.position,
                level,
                characteristics: class.characteristics,
                building_id: None,
            },
        );
        if indoor {
            self.indoor_places.insert(id.to_string());
        }
    }

    /// Returns the place of the way's first node, if the way has a segment.
    fn split_way(&mut self, info: &WayInfo) -> Result<Option<String>> {
        let element = format!("way {}", info.way.id);
        let context = info.single_level();
        let mut first = None;
        for (k, pair) in info.way.nodes.windows(2).enumerate() {
            let (na, nb) = (&self.doc.nodes[&pair[0]], &self.doc.nodes[&pair[1]]);
            let a = self.place_for(na, context, &element)?;
            let b = self.place_for(nb, context, &element)?;
            if a == b {
                return Err(Error::Structural(format!(
                    "{element} repeats node {} consecutively",
                    na.id
                )));
            }
            first.get_or_insert_with(|| a.clone());
            let mut level_span = info.levels.clone();
            level_span.insert(self.places[&a].level);
            level_span.insert(self.places[&b].level);
            self.segments.push(Segment {
                id: format!("w{}:{k}", info.way.id),
                length_m: geodesic_length(na.position, nb.position)?,
                endpoints: [a, b],
                characteristics: info.class.characteristics,
                level_span,
            });
        }
        Ok(first)
    }

    /// Chains the per-level places of every multi-level node.
    fn add_transitions(&mut self) -> Result<()> {
        let multi: Vec<(i64, BTreeSet<i32>)> = self
            .node_levels
            .iter()
            .filter_map(|(&id, l)| match l {
                NodeLevel::Multi(levels) => Some((id, levels.clone())),
                NodeLevel::Single(_) => None,
            })
            .collect();
        for (id, levels) in multi {
            let node = &self.doc.nodes[&id];
            let element = format!("node {id}");
            let per_level = levels
                .iter()
                .map(|&l| self.place_for(node, Some(l), &element))
                .collect::<Result<Vec<_>>>()?;
            let levels: Vec<i32> = levels.into_iter().collect();
            for (i, pair) in levels.windows(2).enumerate() {
                let (lo, hi) = (pair[0], pair[1]);
                self.segments.push(Segment {
                    id: format!("n{id}:{lo}-{hi}"),
                    endpoints: [per_level[i].clone(), per_level[i + 1].clone()],
                    length_m: LEVEL_HEIGHT_M * f64::from(hi - lo),
                    characteristics: self.node_class[&id].characteristics.vertical_only(),
                    level_span: BTreeSet::from([lo, hi]),
                });
            }
        }
        Ok(())
    }

    fn add_room(&mut self, info: &WayInfo) -> Result<Room> {
        let way = info.way;
        if !way.is_closed() {
            return Err(Error::Structural(format!(
                "room way {} outline is not closed",
                way.id
            )));
        }
        // Rooms tagged with several levels are anchored on the lowest one.
        let level = *info.levels.first().expect("levels are never empty");
        let element = format!("way {}", way.id);
        let polygon: Vec<Position> = way.nodes.iter().map(|n| self.doc.nodes[n].position).collect();

        let mut doors = BTreeSet::new();
        for &n in &way.nodes[..way.nodes.len() - 1] {
            let is_door = matches!(
                self.node_class.get(&n).and_then(|c| c.role),
                Some(Role::Door | Role::Entrance)
            );
            if is_door {
                let node = &self.doc.nodes[&n];
                doors.insert(self.place_for(node, Some(level), &element)?);
            }
        }

        let place_id = format!("w{}", way.id);
        let position = match doors.first() {
            Some(door) => self.places[door].position,
            None => centroid(&polygon).expect("closed outline has vertices"),
        };
        let name = way.tags.get("name").or_else(|| way.tags.get("ref")).cloned();
        self.places.insert(
            place_id.clone(),
            Place {
                id: place_id.clone(),
                name: name.clone(),
                kind: PlaceKind::Room,
                position,
                level,
                characteristics: Characteristics::EMPTY,
                building_id: None,
            },
        );
        self.indoor_places.insert(place_id.clone());

        for door in &doors {
            let door_place = &self.places[door];
            let length = geodesic_length(position, door_place.position)?.max(MIN_LINK_LENGTH_M);
            self.segments.push(Segment {
                id: format!("{place_id}~{door}"),
                endpoints: [place_id.clone(), door.clone()],
                length_m: length,
                characteristics: Characteristics::EMPTY,
                level_span: BTreeSet::from([level, door_place.level]),
            });
        }

        let anchors = if doors.is_empty() {
            vec![place_id.clone()]
        } else {
            doors.into_iter().collect()
        };
        Ok(Room {
            id: place_id.clone(),
            name,
            reference: way.tags.get("ref").cloned(),
            level,
            polygon,
            place_id,
            anchors,
            building_id: None,
        })
    }

    fn assign_buildings(&mut self, outlines: &[&OsmWay], default_id: &str) -> Vec<Building> {
        let mut buildings: Vec<Building> = outlines
            .iter()
            .map(|way| Building {
                id: format!("w{}", way.id),
                name: way.tags.get("name").cloned(),
                min_level: 0,
                max_level: 0,
                outline: way.nodes.iter().map(|n| self.doc.nodes[n].position).collect(),
            })
            .collect();
        if buildings.is_empty() && !self.indoor_places.is_empty() {
            buildings.push(Building {
                id: default_id.to_string(),
                name: None,
                min_level: 0,
                max_level: 0,
                outline: Vec::new(),
            });
        }

        for pid in &self.indoor_places {
            let place = self.places.get_mut(pid).expect("indoor places exist");
            let node = place_node(pid);
            let owner = outlines
                .iter()
                .position(|w| node.is_some_and(|n| w.nodes.contains(&n)))
                .or_else(|| {
                    buildings
                        .iter()
                        .position(|b| !b.outline.is_empty() && contains(&b.outline, place.position))
                })
                .or((buildings.len() == 1).then_some(0));
            place.building_id = owner.map(|i| buildings[i].id.clone());
        }

        for building in &mut buildings {
            let levels: BTreeSet<i32> = self
                .places
                .values()
                .filter(|p| p.building_id.as_deref() == Some(building.id.as_str()))
                .map(|p| p.level)
                .collect();
            if let (Some(&lo), Some(&hi)) = (levels.first(), levels.last()) {
                building.min_level = lo;
                building.max_level = hi;
            }
        }
        buildings
    }
}
