//! Brute-force reference computations.

use roomfinder_core::{BuildingGraph, Characteristics, PreferenceLevel, Profile};

/// Factor and sign per level, straight from the preference table:
/// positive levels divide, negative ones multiply.
fn table(level: PreferenceLevel) -> (f64, bool) {
    match level {
        PreferenceLevel::Indispensable => (1000.0, true),
        PreferenceLevel::Want => (100.0, true),
        PreferenceLevel::Prefer => (10.0, true),
        PreferenceLevel::Neutral => (1.0, true),
        PreferenceLevel::PreferNot => (10.0, false),
        PreferenceLevel::DoNotWant => (100.0, false),
        PreferenceLevel::Impossible => (1000.0, false),
    }
}

fn effective(graph: &BuildingGraph, segment: usize) -> Characteristics {
    let seg = graph.segment(segment);
    let mut chars = seg.characteristics;
    for id in &seg.endpoints {
        chars = chars.union(graph.place_by_id(id).unwrap().characteristics);
    }
    chars
}

/// Weight of a segment under `profile`, or `None` when the profile's hard
/// constraints exclude it.
pub fn weight(graph: &BuildingGraph, segment: usize, profile: &Profile) -> Option<f64> {
    let seg = graph.segment(segment);
    let chars = effective(graph, segment);
    for c in chars.iter() {
        if profile.level(c) == PreferenceLevel::Impossible {
            return None;
        }
    }
    if seg.level_span.len() >= 2 {
        for (c, level) in profile.iter() {
            if c.is_vertical() && level == PreferenceLevel::Indispensable && !chars.contains(c) {
                return None;
            }
        }
    }
    let mut w = seg.length_m;
    for c in chars.iter() {
        let (factor, divide) = table(profile.level(c));
        if divide {
            w /= factor;
        } else {
            w *= factor;
        }
    }
    Some(w)
}

pub fn weights(graph: &BuildingGraph, profile: &Profile) -> Vec<Option<f64>> {
    (0..graph.segments().len())
        .map(|s| weight(graph, s, profile))
        .collect()
}

/// Minimum over all simple paths from any source to any target of
/// `sum(weights) + penalty * intermediate places`.
pub fn min_cost(
    graph: &BuildingGraph,
    weights: &[Option<f64>],
    sources: &[usize],
    targets: &[usize],
    penalty: f64,
) -> Option<f64> {
    let n = graph.places().len();
    let mut best: Option<f64> = None;
    for &s in sources {
        if targets.contains(&s) {
            return Some(0.0);
        }
        let mut visited = vec![false; n];
        visited[s] = true;
        dfs(graph, weights, targets, penalty, s, 0.0, 1, &mut visited, &mut best);
    }
    best
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    graph: &BuildingGraph,
    weights: &[Option<f64>],
    targets: &[usize],
    penalty: f64,
    at: usize,
    sum: f64,
    places: usize,
    visited: &mut [bool],
    best: &mut Option<f64>,
) {
    for (k, seg) in graph.segments().iter().enumerate() {
        let Some(w) = weights[k] else { continue };
        let a = graph.place_index(&seg.endpoints[0]).unwrap();
        let b = graph.place_index(&seg.endpoints[1]).unwrap();
        let next = if a == at {
            b
        } else if b == at {
            a
        } else {
            continue;
        };
        if visited[next] {
            continue;
        }
        let sum = sum + w;
        if targets.contains(&next) {
            let j = sum + penalty * (places - 1) as f64;
            if best.is_none_or(|b| j < b) {
                *best = Some(j);
            }
            continue;
        }
        visited[next] = true;
        dfs(graph, weights, targets, penalty, next, sum, places + 1, visited, best);
        visited[next] = false;
    }
}

/// Whether a path exists between two places using only weighted segments.
pub fn connected(graph: &BuildingGraph, weights: &[Option<f64>], a: usize, b: usize) -> bool {
    let mut seen = vec![false; graph.places().len()];
    let mut stack = vec![a];
    seen[a] = true;
    while let Some(u) = stack.pop() {
        if u == b {
            return true;
        }
        for (k, seg) in graph.segments().iter().enumerate() {
            if weights[k].is_none() {
                continue;
            }
            let x = graph.place_index(&seg.endpoints[0]).unwrap();
            let y = graph.place_index(&seg.endpoints[1]).unwrap();
            for (from, to) in [(x, y), (y, x)] {
                if from == u && !seen[to] {
                    seen[to] = true;
                    stack.push(to);
                }
            }
        }
    }
    false
}

/// Unordered pairs of routable places with no path, checked pair by pair.
pub fn unroutable_pairs(graph: &BuildingGraph, weights: &[Option<f64>]) -> (u64, u64) {
    let routable: Vec<usize> = (0..graph.places().len())
        .filter(|&i| graph.place(i).kind.is_routable())
        .collect();
    let mut total = 0;
    let mut broken = 0;
    for (i, &a) in routable.iter().enumerate() {
        for &b in &routable[i + 1..] {
            total += 1;
            if !connected(graph, weights, a, b) {
                broken += 1;
            }
        }
    }
    (broken, total)
}
