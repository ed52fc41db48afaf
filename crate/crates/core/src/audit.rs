//! Connectivity audit: how many pairs of routable places have no path.

use serde::{Deserialize, Serialize};

use crate::graph::BuildingGraph;
use crate::routing::profile::{apply_profile, Profile, WeightedView};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub building_id: Option<String>,
    pub total_places: usize,
    pub unroutable_pairs: u64,
    pub unroutable_rate: f64,
    /// Routable place ids grouped by connected component, largest first.
    pub components: Vec<Vec<String>>,
    pub orphans: Vec<String>,
    pub profile_used: Option<Profile>,
}

/// Audits every routable place of the graph.
pub fn audit_connectivity(graph: &BuildingGraph, profile: Option<&Profile>) -> AuditReport {
    audit_places(graph, None, profile)
}

/// Audits the routable places of one building. Paths may still leave the
/// building (e.g. through an outdoor footway).
pub fn audit_building(graph: &BuildingGraph, building_id: &str, profile: Option<&Profile>) -> AuditReport {
    audit_places(graph, Some(building_id), profile)
}

fn audit_places(graph: &BuildingGraph, building: Option<&str>, profile: Option<&Profile>) -> AuditReport {
    let view = match profile {
        Some(p) => apply_profile(graph, p),
        None => WeightedView::unfiltered(graph),
    };
    let roots = component_roots(&view);

    let members: Vec<usize> = graph
        .places()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.kind.is_routable())
        .filter(|(_, p)| building.is_none() || p.building_id.as_deref() == building)
        .map(|(i, _)| i)
        .collect();

    // Members are visited in id order, so each group is already sorted and
    // its first element is its smallest id.
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for &m in &members {
        match groups.iter_mut().find(|(root, _)| *root == roots[m]) {
            Some((_, g)) => g.push(m),
            None => groups.push((roots[m], vec![m])),
        }
    }
    groups.sort_by(|(_, a), (_, b)| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));

    let n = members.len() as u64;
    let total_pairs = n * n.saturating_sub(1) / 2;
    let connected_pairs: u64 = groups
        .iter()
        .map(|(_, g)| {
            let k = g.len() as u64;
            k * (k - 1) / 2
        })
        .sum();
    let unroutable_pairs = total_pairs - connected_pairs;
    let unroutable_rate = if total_pairs == 0 {
        0.0
    } else {
        unroutable_pairs as f64 / total_pairs as f64
    };

    let ids = |g: &[usize]| g.iter().map(|&i| graph.place(i).id.clone()).collect::<Vec<_>>();
    let components: Vec<Vec<String>> = groups.iter().map(|(_, g)| ids(g)).collect();
    let mut orphans: Vec<String> = components.iter().skip(1).flatten().cloned().collect();
    orphans.sort();

    AuditReport {
        building_id: building.map(str::to_string),
        total_places: members.len(),
        unroutable_pairs,
        unroutable_rate,
        components,
        orphans,
        profile_used: profile.cloned(),
    }
}

/// Union-find root of every place over the segments present in `view`.
fn component_roots(view: &WeightedView) -> Vec<usize> {
    let graph = view.graph();
    let mut parent: Vec<usize> = (0..graph.places().len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for s in 0..graph.segments().len() {
        if view.is_removed(s) {
            continue;
        }
        let (a, b) = graph.endpoints(s);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    (0..parent.len()).map(|x| find(&mut parent, x)).collect()
}
