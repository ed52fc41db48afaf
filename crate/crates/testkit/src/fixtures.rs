use std::path::PathBuf;

use roomfinder_core::{
    build_graph, BuildingGraph, Characteristic, Characteristics, DisplayGeometry, Place, PlaceKind,
    Position, Segment,
};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// The two-level OSM fixture: Assoc on level 0, BU on level 1, linked by
/// an elevator node and a stairs way, plus a main entrance and footway.
pub fn mini_rockefeller_osm() -> PathBuf {
    fixture_dir().join("mini_rockefeller.osm")
}

pub fn mini_rockefeller_bytes() -> Vec<u8> {
    std::fs::read(mini_rockefeller_osm()).expect("fixture file is readable")
}

/// Hand-authored counts of the OSM fixture, recorded when it was written.
pub mod osm_counts {
    pub const NODES: usize = 26;
    pub const WAYS: usize = 12;
    pub const PLACES: usize = 17;
    pub const SEGMENTS: usize = 17;
    pub const ROOMS: usize = 2;
    pub const BUILDINGS: usize = 1;
}

pub fn place(id: &str, kind: PlaceKind, x: f64, y: f64, level: i32, chars: &[Characteristic]) -> Place {
    Place {
        id: id.to_string(),
        name: None,
        kind,
        position: local(x, y),
        level,
        characteristics: chars.iter().copied().collect(),
        building_id: Some("rockefeller".to_string()),
    }
}

pub fn segment(id: &str, a: &str, b: &str, length_m: f64, chars: &[Characteristic]) -> Segment {
    Segment {
        id: id.to_string(),
        endpoints: [a.to_string(), b.to_string()],
        length_m,
        characteristics: chars.iter().copied().collect::<Characteristics>(),
        level_span: Default::default(),
    }
}

/// Offset in meters east/north of a fixed campus origin.
pub fn local(x: f64, y: f64) -> Position {
    const LON0: f64 = 4.872;
    const LAT0: f64 = 45.743;
    const M_PER_DEG_LAT: f64 = 111_195.08;
    let m_per_deg_lon = M_PER_DEG_LAT * LAT0.to_radians().cos();
    Position::new(LON0 + x / m_per_deg_lon, LAT0 + y / M_PER_DEG_LAT)
}

/// Nine places and nine segments over levels 0 and 1. The elevator path
/// from Assoc to BU is 34.2 m, the stairs path 40.2 m.
pub fn mini_graph() -> BuildingGraph {
    use Characteristic::*;
    use PlaceKind::*;
    let mut assoc = place("assoc", Room, 20.0, 10.0, 0, &[]);
    assoc.name = Some("Assoc".into());
    let mut bu = place("bu", Room, 20.0, 10.0, 1, &[]);
    bu.name = Some("BU".into());
    let places = vec![
        assoc,
        place("d0", Door, 20.0, 5.0, 0, &[]),
        place("c0", CorridorPoint, 20.0, 0.0, 0, &[]),
        place("e0", ElevatorNode, 30.0, 0.0, 0, &[Elevator]),
        place("e1", ElevatorNode, 30.0, 0.0, 1, &[Elevator]),
        place("c1", CorridorPoint, 20.0, 0.0, 1, &[]),
        place("d1", Door, 20.0, 5.0, 1, &[]),
        bu,
        place("n", Entrance, 15.0, 0.0, 0, &[]),
    ];
    let segments = vec![
        segment("assoc-d0", "assoc", "d0", 0.1, &[]),
        segment("d0-c0", "d0", "c0", 5.0, &[]),
        segment("c0-e0", "c0", "e0", 10.0, &[]),
        segment("e0-e1", "e0", "e1", 4.0, &[Elevator]),
        segment("e1-c1", "e1", "c1", 10.0, &[]),
        segment("c1-d1", "c1", "d1", 5.0, &[]),
        segment("d1-bu", "d1", "bu", 0.1, &[]),
        segment("c0-c1", "c0", "c1", 30.0, &[Stairs]),
        segment("n-c0", "n", "c0", 5.0, &[]),
    ];
    let room = |id: &str, name: &str, level, door: &str| roomfinder_core::Room {
        id: id.to_string(),
        name: Some(name.to_string()),
        reference: None,
        level,
        polygon: vec![local(15.0, 5.0), local(25.0, 5.0), local(25.0, 15.0), local(15.0, 15.0), local(15.0, 5.0)],
        place_id: id.to_string(),
        anchors: vec![door.to_string()],
        building_id: Some("rockefeller".into()),
    };
    let display = DisplayGeometry {
        rooms: vec![room("assoc", "Assoc", 0, "d0"), room("bu", "BU", 1, "d1")],
        ..Default::default()
    };
    build_graph(places, segments, display).expect("hand-built graph is valid")
}

/// Reorders the top-level `node` and `way` elements of an OSM file
/// written one element per block, as the fixture is.
pub fn permute_osm(text: &str, seed: u64) -> String {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    let mut head = Vec::new();
    let mut blocks: Vec<Vec<&str>> = Vec::new();
    let mut open: Option<Vec<&str>> = None;
    let mut tail = Vec::new();
    for line in text.lines() {
        let t = line.trim_start();
        if let Some(block) = open.as_mut() {
            block.push(line);
            if t.starts_with("</node") || t.starts_with("</way") {
                blocks.push(open.take().unwrap());
            }
        } else if t.starts_with("<node") || t.starts_with("<way") {
            if t.ends_with("/>") {
                blocks.push(vec![line]);
            } else {
                open = Some(vec![line]);
            }
        } else if blocks.is_empty() {
            head.push(line);
        } else {
            tail.push(line);
        }
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    blocks.shuffle(&mut rng);
    let mut out: Vec<&str> = head;
    out.extend(blocks.into_iter().flatten());
    out.extend(tail);
    out.join("\n") + "\n"
}

/// The OSM fixture ingested with default options.
pub fn mini_rockefeller_graph() -> BuildingGraph {
    use roomfinder_core::osm::{build_from_osm, parse_osm, IngestOptions};
    let doc = parse_osm(&mini_rockefeller_bytes()).expect("fixture parses");
    build_from_osm(&doc, &IngestOptions::default())
        .expect("fixture ingests")
        .0
}

/// Ids of fixture segments, named by role.
pub mod osm_ids {
    pub const ELEVATOR: &str = "n30:0-1";
    pub const STAIRS: [&str; 3] = ["w300:0", "w300:1", "w300:2"];
    pub const D0_CORRIDOR: &str = "w101:0";
    pub const ASSOC_ANCHOR: &str = "w200";
    pub const BU_ANCHOR: &str = "w201";
    pub const BUILDING: &str = "w900";
}
