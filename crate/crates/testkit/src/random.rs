//! Seeded random graphs for oracle and property tests.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use roomfinder_core::{
    build_graph, BuildingGraph, Characteristic, Characteristics, DisplayGeometry, Place, PlaceKind,
    PreferenceLevel, Profile, Segment,
};

use crate::fixtures::local;

#[derive(Debug, Clone)]
pub struct RandomCase {
    pub seed: u64,
    pub graph: BuildingGraph,
    pub profile: Profile,
    pub turn_penalty_m: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_places: usize,
    pub max_segments: usize,
    /// Chance that a place or segment carries a given characteristic.
    pub char_density: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_places: 12,
            max_segments: 20,
            char_density: 0.12,
        }
    }
}

fn random_chars(rng: &mut StdRng, density: f64) -> Characteristics {
    Characteristic::ALL
        .into_iter()
        .filter(|_| rng.gen_bool(density))
        .collect()
}

pub fn random_profile(rng: &mut StdRng) -> Profile {
    let mut profile = Profile::neutral();
    for c in Characteristic::ALL {
        if rng.gen_bool(0.4) {
            profile.set(c, *PreferenceLevel::ALL.choose(rng).unwrap());
        }
    }
    profile
}

/// A connected graph: a random spanning tree plus extra edges. Places sit
/// on levels 0 and 1; every cross-level segment gets a vertical
/// characteristic. Lengths are often whole meters so that ties occur.
pub fn random_connected_graph(rng: &mut StdRng, limits: Limits) -> BuildingGraph {
    let n = rng.gen_range(2..=limits.max_places);
    let kinds = [
        PlaceKind::Room,
        PlaceKind::Door,
        PlaceKind::CorridorPoint,
        PlaceKind::Entrance,
        PlaceKind::StairsNode,
    ];
    let places: Vec<Place> = (0..n)
        .map(|i| Place {
            id: format!("p{i:02}"),
            name: None,
            kind: *kinds.choose(rng).unwrap(),
            position: local(rng.gen_range(0.0..50.0), rng.gen_range(0.0..50.0)),
            level: rng.gen_range(0..=1),
            characteristics: random_chars(rng, limits.char_density),
            building_id: Some("b".into()),
        })
        .collect();

    let mut pairs: Vec<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    let extra = rng.gen_range(0..=limits.max_segments - pairs.len());
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            pairs.push((a, b));
        }
    }

    let segments: Vec<Segment> = pairs
        .into_iter()
        .enumerate()
        .map(|(k, (a, b))| {
            let mut chars = random_chars(rng, limits.char_density);
            if places[a].level != places[b].level && !chars.intersects_vertical() {
                chars.insert(*Characteristic::VERTICAL.choose(rng).unwrap());
            }
            let length_m = if rng.gen_bool(0.5) {
                rng.gen_range(1..=20) as f64
            } else {
                rng.gen_range(0.1..20.0)
            };
            Segment {
                id: format!("s{k:02}"),
                endpoints: [places[a].id.clone(), places[b].id.clone()],
                length_m,
                characteristics: chars,
                level_span: Default::default(),
            }
        })
        .collect();

    build_graph(places, segments, DisplayGeometry::default()).expect("generated graph is valid")
}

pub fn random_case(seed: u64, limits: Limits) -> RandomCase {
    let mut rng = StdRng::seed_from_u64(seed);
    let graph = random_connected_graph(&mut rng, limits);
    let profile = random_profile(&mut rng);
    let turn_penalty_m = *[0.0, 0.5, 2.0, 5.0].choose(&mut rng).unwrap();
    RandomCase {
        seed,
        graph,
        profile,
        turn_penalty_m,
    }
}
