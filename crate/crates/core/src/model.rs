//! Domain vocabulary shared by every part of the engine: characteristics,
//! preference levels, place kinds and positions.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A property of a place or segment that a user profile can weigh.
///
/// The set is closed: parsing any other name fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Characteristic {
    Elevator,
    Stairs,
    QuietPlace,
    LitArea,
    TactilePaving,
    AutomaticDoor,
    HeavyDoor,
    Ramp,
    DifficultTerrain,
    ConstructionZone,
}

impl Characteristic {
    pub const ALL: [Characteristic; 10] = [
        Characteristic::Elevator,
        Characteristic::Stairs,
        Characteristic::QuietPlace,
        Characteristic::LitArea,
        Characteristic::TactilePaving,
        Characteristic::AutomaticDoor,
        Characteristic::HeavyDoor,
        Characteristic::Ramp,
        Characteristic::DifficultTerrain,
        Characteristic::ConstructionZone,
    ];

    /// Characteristics that move a traveller between levels.
    pub const VERTICAL: [Characteristic; 3] = [
        Characteristic::Elevator,
        Characteristic::Stairs,
        Characteristic::Ramp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Characteristic::Elevator => "elevator",
            Characteristic::Stairs => "stairs",
            Characteristic::QuietPlace => "quiet_place",
            Characteristic::LitArea => "lit_area",
            Characteristic::TactilePaving => "tactile_paving",
            Characteristic::AutomaticDoor => "automatic_door",
            Characteristic::HeavyDoor => "heavy_door",
            Characteristic::Ramp => "ramp",
            Characteristic::DifficultTerrain => "difficult_terrain",
            Characteristic::ConstructionZone => "construction_zone",
        }
    }

    pub fn is_vertical(self) -> bool {
        Self::VERTICAL.contains(&self)
    }

    fn bit(self) -> u16 {
        1 << (self as u16)
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Characteristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Characteristic::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownCharacteristic(s.to_string()))
    }
}

impl Serialize for Characteristic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Characteristic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        name.parse().map_err(de::Error::custom)
    }
}

/// A small set of [`Characteristic`]s stored as a bitmask.
///
/// Serializes as a sorted array of names.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Characteristics(u16);

impl Characteristics {
    pub const EMPTY: Characteristics = Characteristics(0);

    pub fn new() -> Self {
        Self::EMPTY
    }

    pub fn insert(&mut self, c: Characteristic) {
        self.0 |= c.bit();
    }

    pub fn with(mut self, c: Characteristic) -> Self {
        self.insert(c);
        self
    }

    pub fn contains(self, c: Characteristic) -> bool {
        self.0 & c.bit() != 0
    }

    pub fn union(self, other: Characteristics) -> Characteristics {
        Characteristics(self.0 | other.0)
    }

    pub fn intersects_vertical(self) -> bool {
        Characteristic::VERTICAL.iter().any(|&c| self.contains(c))
    }

    pub fn vertical_only(self) -> Characteristics {
        Characteristic::VERTICAL
            .iter()
            .filter(|&&c| self.contains(c))
            .copied()
            .collect()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Iterates in declaration order.
    pub fn iter(self) -> impl Iterator<Item = Characteristic> {
        Characteristic::ALL
            .into_iter()
            .filter(move |&c| self.contains(c))
    }
}

impl FromIterator<Characteristic> for Characteristics {
    fn from_iter<I: IntoIterator<Item = Characteristic>>(iter: I) -> Self {
        let mut set = Characteristics::EMPTY;
        for c in iter {
            set.insert(c);
        }
        set
    }
}

impl fmt::Debug for Characteristics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for Characteristics {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for Characteristics {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let names = Vec::<Characteristic>::deserialize(deserializer)?;
        Ok(names.into_iter().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Neutral,
    Negative,
}

/// How much a user cares about a characteristic, with its weighting factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum PreferenceLevel {
    Indispensable,
    Want,
    Prefer,
    #[default]
    Neutral,
    PreferNot,
    DoNotWant,
    Impossible,
}

impl PreferenceLevel {
    pub const ALL: [PreferenceLevel; 7] = [
        PreferenceLevel::Indispensable,
        PreferenceLevel::Want,
        PreferenceLevel::Prefer,
        PreferenceLevel::Neutral,
        PreferenceLevel::PreferNot,
        PreferenceLevel::DoNotWant,
        PreferenceLevel::Impossible,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PreferenceLevel::Indispensable => "indispensable",
            PreferenceLevel::Want => "want",
            PreferenceLevel::Prefer => "prefer",
            PreferenceLevel::Neutral => "neutral",
            PreferenceLevel::PreferNot => "prefer_not",
            PreferenceLevel::DoNotWant => "do_not_want",
            PreferenceLevel::Impossible => "impossible",
        }
    }

    pub fn polarity(self) -> Polarity {
        match self {
            PreferenceLevel::Indispensable | PreferenceLevel::Want | PreferenceLevel::Prefer => {
                Polarity::Positive
            }
            PreferenceLevel::Neutral => Polarity::Neutral,
            PreferenceLevel::PreferNot | PreferenceLevel::DoNotWant | PreferenceLevel::Impossible => {
                Polarity::Negative
            }
        }
    }

    pub fn factor(self) -> f64 {
        match self {
            PreferenceLevel::Neutral => 1.0,
            PreferenceLevel::Prefer | PreferenceLevel::PreferNot => 10.0,
            PreferenceLevel::Want | PreferenceLevel::DoNotWant => 100.0,
            PreferenceLevel::Indispensable | PreferenceLevel::Impossible => 1000.0,
        }
    }

    /// Indispensable and impossible are hard constraints; the rest are
    /// preferences (or neutral).
    pub fn is_constraint(self) -> bool {
        matches!(
            self,
            PreferenceLevel::Indispensable | PreferenceLevel::Impossible
        )
    }
}

impl fmt::Display for PreferenceLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PreferenceLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PreferenceLevel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::UnknownLevel(s.to_string()))
    }
}

impl Serialize for PreferenceLevel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for PreferenceLevel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        name.parse().map_err(de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaceKind {
    Room,
    Door,
    CorridorPoint,
    StairsNode,
    ElevatorNode,
    Entrance,
    OutdoorPoint,
}

impl PlaceKind {
    /// Places counted by the connectivity audit. Corridor shape points and
    /// transition nodes are excluded.
    pub fn is_routable(self) -> bool {
        matches!(self, PlaceKind::Room | PlaceKind::Door | PlaceKind::Entrance)
    }
}

/// WGS84 position, serialized as `[lon, lat]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    pub lon: f64,
    pub lat: f64,
}

impl Position {
    pub fn new(lon: f64, lat: f64) -> Self {
        Position { lon, lat }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lon.is_finite() || !self.lat.is_finite() {
            return Err(Error::InvalidInput(format!(
                "non-finite coordinate [{}, {}]",
                self.lon, self.lat
            )));
        }
        if !(-180.0..=180.0).contains(&self.lon) || !(-90.0..=90.0).contains(&self.lat) {
            return Err(Error::InvalidInput(format!(
                "coordinate out of range [{}, {}]",
                self.lon, self.lat
            )));
        }
        Ok(())
    }
}

impl Serialize for Position {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lon, self.lat].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Position {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PairVisitor;

        impl<'de> Visitor<'de> for PairVisitor {
            type Value = Position;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a [lon, lat] array")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Position, A::Error> {
                let lon = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let lat = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(Position { lon, lat })
            }
        }

        deserializer.deserialize_seq(PairVisitor)
    }
}
