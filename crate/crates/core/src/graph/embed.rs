// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Backtracking subgraph matcher.
//!
//! An embedding is an injective map from pattern vertices to host vertices
//! sending every pattern edge to a host edge (not necessarily induced). A
//! *copy* is the image subgraph; two embeddings give the same copy exactly
//! when they differ by an automorphism of the pattern.

use std::collections::HashSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::{normalize, Edge, Graph, Vertex};

const UNSET: usize = usize::MAX;

/// Injective, edge-preserving map; `map[i]` is the host image of pattern vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Embedding {
    map: Vec<Vertex>,
}

impl Embedding {
    pub fn new(map: Vec<Vertex>) -> Self {
        Embedding { map }
    }

    pub fn map(&self) -> &[Vertex] {
        &self.map
    }

    /// Sorted host vertices of the copy.
    pub fn image_vertices(&self) -> Vec<Vertex> {
        let mut vs = self.map.clone();
        vs.sort_unstable();
        vs
    }

    /// Sorted host edges of the copy.
    pub fn image_edges(&self, pattern: &Graph) -> Vec<Edge> {
        let mut es: Vec<Edge> = pattern
            .edges()
            .iter()
            .map(|&(u, v)| normalize(self.map[u], self.map[v]))
            .collect();
        es.sort_unstable();
        es
    }

    /// Host edge indices of the copy, in pattern edge order.
    pub fn image_edge_indices(&self, host: &Graph, pattern: &Graph) -> Vec<usize> {
        pattern
            .edges()
            .iter()
            .map(|&(u, v)| {
                host.edge_index(self.map[u], self.map[v])
                    .expect("embedding maps pattern edges to host edges")
            })
            .collect()
    }

    /// True when the map is injective and edge preserving.
    pub fn is_valid(&self, host: &Graph, pattern: &Graph) -> bool {
        if self.map.len() != pattern.order() || self.map.iter().any(|&v| v >= host.order()) {
            return false;
        }
        let distinct: HashSet<_> = self.map.iter().collect();
        distinct.len() == self.map.len()
            && pattern
                .edges()
                .iter()
                .all(|&(u, v)| host.has_edge(self.map[u], self.map[v]))
    }
}

/// Placement order for the pattern: each step places one pattern vertex,
/// preferring vertices with many already placed neighbors.
pub(crate) struct Plan {
    pub order: Vec<Vertex>,
    /// Placed-earlier neighbors of `order[step]`.
    pub back: Vec<Vec<Vertex>>,
    degree: Vec<usize>,
}

impl Plan {
    pub fn new(pattern: &Graph) -> Plan {
        let k = pattern.order();
        let mut placed = vec![false; k];
        let mut placed_neighbors = vec![0usize; k];
        let mut order = Vec::with_capacity(k);
        let mut back = Vec::with_capacity(k);
        for _ in 0..k {
            let next = (0..k)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| (placed_neighbors[v], pattern.degree(v), std::cmp::Reverse(v)))
                .expect("an unplaced vertex remains");
            back.push(
                pattern
                    .neighbors(next)
                    .iter()
                    .copied()
                    .filter(|&w| placed[w])
                    .collect(),
            );
            placed[next] = true;
            for &w in pattern.neighbors(next) {
                placed_neighbors[w] += 1;
            }
            order.push(next);
        }
        let degree = order.iter().map(|&v| pattern.degree(v)).collect();
        Plan {
            order,
            back,
            degree,
        }
    }
}

/// Extra constraints layered on the structural search. `admit` runs after
/// the structural checks with `map` already updated for the current step;
/// every admitted placement is later matched by one `retract`.
pub(crate) trait Placement {
    fn admit(&mut self, _step: usize, _plan: &Plan, _host_v: Vertex, _map: &[Vertex]) -> bool {
        true
    }

    fn retract(&mut self, _step: usize, _plan: &Plan, _host_v: Vertex, _map: &[Vertex]) {}
}

struct Unconstrained;

impl Placement for Unconstrained {}

pub(crate) fn search<P, F>(host: &Graph, plan: &Plan, hook: &mut P, visit: &mut F) -> ControlFlow<()>
where
    P: Placement,
    F: FnMut(&[Vertex]) -> ControlFlow<()>,
{
    let k = plan.order.len();
    if k > host.order() {
        return ControlFlow::Continue(());
    }
    let mut map = vec![UNSET; k];
    let mut used = vec![false; host.order()];
    extend(host, plan, 0, &mut map, &mut used, hook, visit)
}

fn extend<P, F>(
    host: &Graph,
    plan: &Plan,
    step: usize,
    map: &mut [Vertex],
    used: &mut [bool],
    hook: &mut P,
    visit: &mut F,
) -> ControlFlow<()>
where
    P: Placement,
    F: FnMut(&[Vertex]) -> ControlFlow<()>,
{
    if step == plan.order.len() {
        return visit(map);
    }
    let pv = plan.order[step];
    let back = &plan.back[step];
    let need = plan.degree[step];

    let mut try_one = |h: Vertex, map: &mut [Vertex], used: &mut [bool]| -> ControlFlow<()> {
        if used[h] || host.degree(h) < need {
            return ControlFlow::Continue(());
        }
        if !back.iter().all(|&w| host.has_edge(h, map[w])) {
            return ControlFlow::Continue(());
        }
        map[pv] = h;
        if hook.admit(step, plan, h, map) {
            used[h] = true;
            let flow = extend(host, plan, step + 1, map, used, hook, visit);
            used[h] = false;
            hook.retract(step, plan, h, map);
            map[pv] = UNSET;
            flow?;
        } else {
            map[pv] = UNSET;
        }
        ControlFlow::Continue(())
    };

    match back.first() {
        Some(&anchor) => {
            let anchor_image = map[anchor];
            for &h in host.neighbors(anchor_image) {
                try_one(h, map, used)?;
            }
        }
        None => {
            for h in 0..host.order() {
                try_one(h, map, used)?;
            }
        }
    }
    ControlFlow::Continue(())
}

/// Visits every injective homomorphism of `pattern` into `host` in a
/// deterministic order; the callback may stop the search early.
pub fn for_each_embedding<F>(host: &Graph, pattern: &Graph, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[Vertex]) -> ControlFlow<()>,
{
    let plan = Plan::new(pattern);
    search(host, &plan, &mut Unconstrained, &mut visit)
}

pub fn count_injective_homomorphisms(host: &Graph, pattern: &Graph) -> u64 {
    let mut count = 0u64;
    let _ = for_each_embedding(host, pattern, |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    count
}

pub(crate) fn copy_key(map: &[Vertex], pattern: &Graph) -> Vec<usize> {
    let mut vs = map.to_vec();
    vs.sort_unstable();
    let mut es: Vec<Edge> = pattern
        .edges()
        .iter()
        .map(|&(u, v)| normalize(map[u], map[v]))
        .collect();
    es.sort_unstable();
    vs.extend(es.into_iter().flat_map(|(u, v)| [u, v]));
    vs
}

/// All copies of `pattern` in `host`, one representative embedding per
/// copy (a copy is identified by its image vertex and edge sets), in order
/// of first discovery.
pub fn enumerate_copies(host: &Graph, pattern: &Graph) -> Vec<Embedding> {
    let mut seen = HashSet::new();
    let mut copies = Vec::new();
    let _ = for_each_embedding(host, pattern, |map| {
        if seen.insert(copy_key(map, pattern)) {
            copies.push(Embedding::new(map.to_vec()));
        }
        ControlFlow::Continue(())
    });
    copies
}

/// Vertex permutations preserving the edge set, identity first.
pub fn automorphisms(g: &Graph) -> Vec<Vec<Vertex>> {
    let mut all = Vec::new();
    let _ = for_each_embedding(g, g, |map| {
        all.push(map.to_vec());
        ControlFlow::Continue(())
    });
    all.sort();
    all
}

pub fn are_isomorphic(g1: &Graph, g2: &Graph) -> bool {
    if g1.order() != g2.order() || g1.size() != g2.size() {
        return false;
    }
    let mut d1 = g1.degrees();
    let mut d2 = g2.degrees();
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return false;
    }
    // A bijective homomorphism between graphs with equal edge counts is an isomorphism.
    for_each_embedding(g2, g1, |_| ControlFlow::Break(())).is_break()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_book, make_clique, make_cycle, make_path};

    #[test]
    fn copies_in_small_hosts() {
        let k4 = make_clique(4).unwrap();
        let k3 = make_clique(3).unwrap();
        assert_eq!(enumerate_copies(&k4, &k3).len(), 4);
        let b2 = make_book(2).unwrap();
        assert_eq!(enumerate_copies(&b2, &b2).len(), 1);
        assert!(enumerate_copies(&make_cycle(5).unwrap(), &k3).is_empty());
        assert!(enumerate_copies(&k3, &k4).is_empty());
    }

    #[test]
    fn edges_are_copies_of_k2() {
        let k2 = make_path(2).unwrap();
        for g in [make_book(3).unwrap(), make_cycle(7).unwrap(), make_clique(5).unwrap()] {
            assert_eq!(enumerate_copies(&g, &k2).len(), g.size());
        }
    }

    #[test]
    fn automorphism_group_orders() {
        assert_eq!(automorphisms(&make_cycle(5).unwrap()).len(), 10);
        assert_eq!(automorphisms(&make_clique(4).unwrap()).len(), 24);
        // swap spine ends, permute the t pages
        assert_eq!(automorphisms(&make_book(3).unwrap()).len(), 12);
        assert_eq!(automorphisms(&make_book(1).unwrap()).len(), 6);
    }

    #[test]
    fn isomorphism_examples() {
        let k3 = crate::graph::LabeledTwoGraph::new(make_clique(3).unwrap(), (0, 1)).unwrap();
        let b2 = make_book(2).unwrap();
        assert!(are_isomorphic(&b2, &crate::graph::amalgamate(&k3, &k3)));
        assert!(!are_isomorphic(&make_cycle(4).unwrap(), &make_path(4).unwrap()));
        assert!(!are_isomorphic(&make_book(4).unwrap(), &make_clique(4).unwrap()));
        // same degree sequence, not isomorphic: C6 vs two triangles
        let two_triangles = make_clique(3).unwrap().disjoint_union(&make_clique(3).unwrap());
        assert!(!are_isomorphic(&make_cycle(6).unwrap(), &two_triangles));
    }

    #[test]
    fn embeddings_are_valid() {
        let host = make_book(3).unwrap();
        let pattern = make_path(3).unwrap();
        let _ = for_each_embedding(&host, &pattern, |map| {
            assert!(Embedding::new(map.to_vec()).is_valid(&host, &pattern));
            ControlFlow::Continue(())
        });
    }
}
