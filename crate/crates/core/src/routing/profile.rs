use std::collections::BTreeMap;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::BuildingGraph;
use crate::model::{Characteristic, Characteristics, Polarity, PreferenceLevel};

/// A user's preference level for each characteristic. Missing entries are
/// neutral; neutral entries are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Profile {
    settings: BTreeMap<Characteristic, PreferenceLevel>,
}

impl Profile {
    /// The identity profile.
    pub fn neutral() -> Self {
        Profile::default()
    }

    pub fn with(mut self, c: Characteristic, level: PreferenceLevel) -> Self {
        self.set(c, level);
        self
    }

    pub fn set(&mut self, c: Characteristic, level: PreferenceLevel) {
        if level == PreferenceLevel::Neutral {
            self.settings.remove(&c);
        } else {
            self.settings.insert(c, level);
        }
    }

    pub fn level(&self, c: Characteristic) -> PreferenceLevel {
        self.settings.get(&c).copied().unwrap_or_default()
    }

    pub fn is_neutral(&self) -> bool {
        self.settings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Characteristic, PreferenceLevel)> + '_ {
        self.settings.iter().map(|(&c, &l)| (c, l))
    }

    /// Builds a profile from `(characteristic, level)` name pairs,
    /// rejecting unknown names.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut profile = Profile::neutral();
        for (c, l) in pairs {
            profile.set(c.parse()?, l.parse()?);
        }
        Ok(profile)
    }

    /// Parses the JSON object form `{"elevator": "impossible", ...}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let map: BTreeMap<String, String> = serde_json::from_str(text)?;
        Self::from_pairs(map.iter().map(|(k, v)| (k.as_str(), v.as_str())))
    }

    /// Characteristics whose positive constraint restricts vertical
    /// transitions (e.g. elevator: indispensable).
    fn required_vertical(&self) -> Characteristics {
        Characteristic::VERTICAL
            .into_iter()
            .filter(|&c| self.level(c) == PreferenceLevel::Indispensable)
            .collect()
    }
}

impl Serialize for Profile {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_map(self.settings.iter().map(|(c, l)| (c.as_str(), l.as_str())))
    }
}

impl<'de> Deserialize<'de> for Profile {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let map = BTreeMap::<String, String>::deserialize(deserializer)?;
        Profile::from_pairs(map.iter().map(|(k, v)| (k.as_str(), v.as_str())))
            .map_err(de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    /// Surcharge in meters for every intermediate place of a path.
    pub turn_penalty_m: f64,
}

impl CostParams {
    pub const DEFAULT_TURN_PENALTY_M: f64 = 2.0;

    pub fn new(turn_penalty_m: f64) -> Result<Self> {
        if !turn_penalty_m.is_finite() || turn_penalty_m < 0.0 {
            return Err(Error::InvalidInput(format!(
                "turn penalty must be finite and non-negative, got {turn_penalty_m}"
            )));
        }
        Ok(CostParams { turn_penalty_m })
    }
}

impl Default for CostParams {
    fn default() -> Self {
        CostParams {
            turn_penalty_m: Self::DEFAULT_TURN_PENALTY_M,
        }
    }
}

/// Scales a raw length by the profile: divided by the factor of every
/// positively rated characteristic present, multiplied by the factor of
/// every negatively rated one.
pub fn transform_weight(length_m: f64, chars: Characteristics, profile: &Profile) -> f64 {
    chars.iter().fold(length_m, |w, c| {
        let level = profile.level(c);
        match level.polarity() {
            Polarity::Positive => w / level.factor(),
            Polarity::Negative => w * level.factor(),
            Polarity::Neutral => w,
        }
    })
}

/// A constraint-level characteristic traversed by a route.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub segment_id: String,
    pub characteristic: Characteristic,
    pub level: PreferenceLevel,
}

/// Constraint violations of one segment under `profile`. A segment is
/// removed from the profile's view exactly when this is non-empty.
pub fn segment_violations(graph: &BuildingGraph, segment: usize, profile: &Profile) -> Vec<Violation> {
    let chars = graph.effective_characteristics(segment);
    let seg = graph.segment(segment);
    let mut out: Vec<Violation> = chars
        .iter()
        .filter(|&c| profile.level(c) == PreferenceLevel::Impossible)
        .map(|c| Violation {
            segment_id: seg.id.clone(),
            characteristic: c,
            level: PreferenceLevel::Impossible,
        })
        .collect();
    if seg.is_vertical() {
        out.extend(
            profile
                .required_vertical()
                .iter()
                .filter(|&c| !chars.contains(c))
                .map(|c| Violation {
                    segment_id: seg.id.clone(),
                    characteristic: c,
                    level: PreferenceLevel::Indispensable,
                }),
        );
    }
    out
}

/// Per-request weighted view of a graph. Removed segments have no weight.
#[derive(Debug, Clone)]
pub struct WeightedView<'g> {
    graph: &'g BuildingGraph,
    weights: Vec<Option<f64>>,
}

impl<'g> WeightedView<'g> {
    /// Raw lengths, nothing removed.
    pub fn unfiltered(graph: &'g BuildingGraph) -> Self {
        WeightedView {
            graph,
            weights: graph.segments().iter().map(|s| Some(s.length_m)).collect(),
        }
    }

    pub fn graph(&self) -> &'g BuildingGraph {
        self.graph
    }

    pub fn weight(&self, segment: usize) -> Option<f64> {
        self.weights[segment]
    }

    pub fn is_removed(&self, segment: usize) -> bool {
        self.weights[segment].is_none()
    }
}

/// Removes constraint-violating segments and reweights the rest.
pub fn apply_profile<'g>(graph: &'g BuildingGraph, profile: &Profile) -> WeightedView<'g> {
    let weights = (0..graph.segments().len())
        .map(|i| {
            if !segment_violations(graph, i, profile).is_empty() {
                return None;
            }
            let chars = graph.effective_characteristics(i);
            Some(transform_weight(graph.segment(i).length_m, chars, profile))
        })
        .collect();
    WeightedView { graph, weights }
}
