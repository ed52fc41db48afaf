//! Mapping from indoor OSM tags to the routing model.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{Characteristic, Characteristics};
use crate::osm::parse::Tags;

/// Parses an OSM `level` value: `"2"`, `"-1"`, `"0;1"`, `"0-2"`.
///
/// Fractional and non-numeric tokens are rejected.
pub fn parse_levels(value: &str) -> Result<BTreeSet<i32>> {
    let unsupported = || Error::UnsupportedLevel {
        value: value.to_string(),
        element: None,
    };
    let mut levels = BTreeSet::new();
    for token in value.split(';') {
        let token = token.trim();
        if token.is_empty() {
            return Err(unsupported());
        }
        if let Ok(level) = token.parse::<i32>() {
            levels.insert(level);
            continue;
        }
        // Range: the separator is the first '-' that is not a leading sign.
        let sep = token[1..]
            .find('-')
            .map(|i| i + 1)
            .ok_or_else(unsupported)?;
        let lo: i32 = token[..sep].trim().parse().map_err(|_| unsupported())?;
        let hi: i32 = token[sep + 1..].trim().parse().map_err(|_| unsupported())?;
        if lo > hi {
            return Err(unsupported());
        }
        levels.extend(lo..=hi);
    }
    Ok(levels)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    Node,
    Way,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Room,
    Walkable,
    Building,
    Door,
    Entrance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Classification {
    pub role: Option<Role>,
    pub characteristics: Characteristics,
}

impl Classification {
    pub fn is_ignored(&self) -> bool {
        self.role.is_none() && self.characteristics.is_empty()
    }
}

/// Applies the tag table to one element.
pub fn map_tags(kind: ElementKind, tags: &Tags) -> Classification {
    let get = |k: &str| tags.get(k).map(String::as_str);
    let is = |k: &str, v: &str| get(k) == Some(v);

    let role = match kind {
        ElementKind::Way => {
            if is("indoor", "room") {
                Some(Role::Room)
            } else if is("indoor", "corridor")
                || matches!(get("highway"), Some("footway" | "corridor" | "steps"))
            {
                Some(Role::Walkable)
            } else if get("building").is_some_and(|v| v != "no") {
                Some(Role::Building)
            } else {
                None
            }
        }
        ElementKind::Node => {
            if matches!(get("entrance"), Some("yes" | "main")) {
                Some(Role::Entrance)
            } else if get("door").is_some_and(|v| v != "no") {
                Some(Role::Door)
            } else {
                None
            }
        }
    };

    let mut chars = Characteristics::new();
    if is("highway", "steps") || is("stairs", "yes") {
        chars.insert(Characteristic::Stairs);
    }
    if is("highway", "elevator") {
        chars.insert(Characteristic::Elevator);
    }
    if is("ramp", "yes") {
        chars.insert(Characteristic::Ramp);
    }
    if is("automatic_door", "yes") || is("door", "sliding") {
        chars.insert(Characteristic::AutomaticDoor);
    }
    if is("door:heavy", "yes") {
        chars.insert(Characteristic::HeavyDoor);
    }
    if is("tactile_paving", "yes") {
        chars.insert(Characteristic::TactilePaving);
    }
    if is("lit", "yes") {
        chars.insert(Characteristic::LitArea);
    }
    if is("quiet", "yes") {
        chars.insert(Characteristic::QuietPlace);
    }
    if matches!(get("surface"), Some("unpaved" | "gravel" | "grass")) {
        chars.insert(Characteristic::DifficultTerrain);
    }
    if is("construction", "yes") {
        chars.insert(Characteristic::ConstructionZone);
    }

    Classification {
        role,
        characteristics: chars,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(pairs: &[(&str, &str)]) -> Tags {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn level_grammar() {
        assert_eq!(parse_levels("0").unwrap(), BTreeSet::from([0]));
        assert_eq!(parse_levels("-1").unwrap(), BTreeSet::from([-1]));
        assert_eq!(parse_levels("0;1").unwrap(), BTreeSet::from([0, 1]));
        assert_eq!(parse_levels(" 0 ; 1 ").unwrap(), BTreeSet::from([0, 1]));
        assert_eq!(parse_levels("0-2").unwrap(), BTreeSet::from([0, 1, 2]));
        assert_eq!(parse_levels("-2--1").unwrap(), BTreeSet::from([-2, -1]));
        assert_eq!(parse_levels("-1-1").unwrap(), BTreeSet::from([-1, 0, 1]));
        assert_eq!(parse_levels("3;0-1").unwrap(), BTreeSet::from([0, 1, 3]));
    }

    #[test]
    fn unsupported_levels() {
        for bad in ["1.5", "", "ground", "0;", "2-1", "1-a", "-"] {
            assert!(
                matches!(parse_levels(bad), Err(Error::UnsupportedLevel { .. })),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn room_with_name() {
        let c = map_tags(ElementKind::Way, &tags(&[("indoor", "room"), ("name", "BU")]));
        assert_eq!(c.role, Some(Role::Room));
    }

    #[test]
    fn elevator_node() {
        let c = map_tags(
            ElementKind::Node,
            &tags(&[("highway", "elevator"), ("level", "0;1")]),
        );
        assert_eq!(c.characteristics, Characteristics::new().with(Characteristic::Elevator));
    }

    #[test]
    fn bench_is_ignored() {
        assert!(map_tags(ElementKind::Node, &tags(&[("amenity", "bench")])).is_ignored());
        assert!(map_tags(ElementKind::Way, &tags(&[("amenity", "bench")])).is_ignored());
    }

    #[test]
    fn walkable_ways() {
        for t in [
            &[("indoor", "corridor")][..],
            &[("highway", "footway")],
            &[("highway", "corridor")],
            &[("highway", "steps")],
        ] {
            assert_eq!(map_tags(ElementKind::Way, &tags(t)).role, Some(Role::Walkable), "{t:?}");
        }
        let steps = map_tags(ElementKind::Way, &tags(&[("highway", "steps")]));
        assert!(steps.characteristics.contains(Characteristic::Stairs));
    }

    #[test]
    fn doors_and_entrances() {
        let sliding = map_tags(ElementKind::Node, &tags(&[("door", "sliding")]));
        assert_eq!(sliding.role, Some(Role::Door));
        assert!(sliding.characteristics.contains(Characteristic::AutomaticDoor));

        let heavy = map_tags(ElementKind::Node, &tags(&[("door", "hinged"), ("door:heavy", "yes")]));
        assert!(heavy.characteristics.contains(Characteristic::HeavyDoor));

        let main = map_tags(ElementKind::Node, &tags(&[("entrance", "main"), ("door", "yes")]));
        assert_eq!(main.role, Some(Role::Entrance));
        assert_eq!(map_tags(ElementKind::Node, &tags(&[("door", "no")])).role, None);
    }

    #[test]
    fn surface_and_environment() {
        let c = map_tags(
            ElementKind::Way,
            &tags(&[
                ("highway", "footway"),
                ("surface", "gravel"),
                ("lit", "yes"),
                ("quiet", "yes"),
                ("tactile_paving", "yes"),
                ("construction", "yes"),
                ("ramp", "yes"),
            ]),
        );
        let expected: Characteristics = [
            Characteristic::DifficultTerrain,
            Characteristic::LitArea,
            Characteristic::QuietPlace,
            Characteristic::TactilePaving,
            Characteristic::ConstructionZone,
            Characteristic::Ramp,
        ]
        .into_iter()
        .collect();
        assert_eq!(c.characteristics, expected);
        let paved = map_tags(ElementKind::Way, &tags(&[("highway", "footway"), ("surface", "asphalt")]));
        assert!(paved.characteristics.is_empty());
    }
}
