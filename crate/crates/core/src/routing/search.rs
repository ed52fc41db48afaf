//! Dijkstra over a [`WeightedView`] with a per-intermediate-place penalty
//! and multi-source / multi-target terminals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::routing::profile::{CostParams, WeightedView};

/// A path through the view, as graph indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub places: Vec<usize>,
    pub segments: Vec<usize>,
    /// Sum of view weights plus the penalty for every intermediate place.
    pub cost: f64,
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    dist: f64,
    node: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // Reversed: BinaryHeap is a max-heap.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Finds the path from any of `sources` to any of `targets` minimizing
/// `sum(weights) + turn_penalty * intermediate_places`.
///
/// Several sources (or targets) behave like a virtual terminal joined to
/// each of them at zero cost, without a penalty of its own. Among
/// equal-cost optima the lexicographically smallest place sequence wins;
/// since the graph stores places sorted by id, comparing index sequences
/// compares id sequences.
pub fn search(
    view: &WeightedView,
    sources: &[usize],
    targets: &[usize],
    params: &CostParams,
) -> Option<Path> {
    let graph = view.graph();
    let n = graph.places().len();
    let penalty = params.turn_penalty_m;

    // Every edge is charged weight + penalty; the path then pays one
    // penalty too many, removed when the cost is reported.
    let mut dist = vec![f64::INFINITY; n];
    let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut is_target = vec![false; n];
    for &t in targets {
        is_target[t] = true;
    }

    let mut heap = BinaryHeap::new();
    for &s in sources {
        if dist[s] != 0.0 {
            dist[s] = 0.0;
            heap.push(Entry { dist: 0.0, node: s });
        }
    }

    let mut best: Option<usize> = None;
    while let Some(Entry { dist: d, node: u }) = heap.pop() {
        if settled[u] || d > dist[u] {
            continue;
        }
        if let Some(b) = best {
            if d > dist[b] {
                break;
            }
        }
        settled[u] = true;

        if is_target[u] {
            best = match best {
                Some(b) if chain(&pred, b) <= chain(&pred, u) => Some(b),
                _ => Some(u),
            };
            // Paths through a target to another target cost strictly more.
            continue;
        }

        for adj in graph.neighbors(u) {
            let Some(w) = view.weight(adj.segment) else {
                continue;
            };
            let v = adj.neighbor;
            if settled[v] {
                continue;
            }
            let candidate = d + w + penalty;
            let improve = match candidate.total_cmp(&dist[v]) {
                Ordering::Less => true,
                Ordering::Equal => match pred[v] {
                    Some((pu, ps)) if pu == u => adj.segment < ps,
                    Some((pu, _)) => chain(&pred, u) < chain(&pred, pu),
                    None => false,
                },
                Ordering::Greater => false,
            };
            if improve {
                let pushed = candidate < dist[v];
                dist[v] = candidate;
                pred[v] = Some((u, adj.segment));
                if pushed {
                    heap.push(Entry {
                        dist: candidate,
                        node: v,
                    });
                }
            }
        }
    }

    let target = best?;
    let places = chain(&pred, target);
    let mut segments = Vec::with_capacity(places.len().saturating_sub(1));
    let mut v = target;
    while let Some((u, s)) = pred[v] {
        segments.push(s);
        v = u;
    }
    segments.reverse();

    let cost = if segments.is_empty() {
        0.0
    } else {
        let weights: f64 = segments
            .iter()
            .map(|&s| view.weight(s).expect("path uses view segments"))
            .sum();
        weights + penalty * (places.len() - 2) as f64
    };
    Some(Path {
        places,
        segments,
        cost,
    })
}

/// Place sequence from the source to `v`.
fn chain(pred: &[Option<(usize, usize)>], mut v: usize) -> Vec<usize> {
    let mut out = vec![v];
    while let Some((u, _)) = pred[v] {
        out.push(u);
        v = u;
    }
    out.reverse();
    out
}
