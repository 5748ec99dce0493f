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

//! Isolated and transversal copies.
//!
//! A copy of `S` in `G` is *isolated* when no other copy of `S` shares an
//! edge with it. `G^S` is the spanning subgraph formed by the edges of the
//! isolated copies; each of its edges lies in exactly one of them.

use std::collections::HashSet;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{copy_key, enumerate_copies, for_each_embedding, Edge, Embedding, Graph, Vertex};
use crate::random::{derive_seed, sample_gnp};

fn isolated_flags(g: &Graph, s: &Graph, copies: &[Embedding]) -> Vec<bool> {
    let edge_lists: Vec<Vec<usize>> = copies.iter().map(|c| c.image_edge_indices(g, s)).collect();
    let mut load = vec![0u32; g.size()];
    for list in &edge_lists {
        for &e in list {
            load[e] += 1;
        }
    }
    edge_lists
        .iter()
        .map(|list| list.iter().all(|&e| load[e] == 1))
        .collect()
}

/// Copies of `s` sharing no edge with any other copy.
pub fn isolated_copies(g: &Graph, s: &Graph) -> Vec<Embedding> {
    let copies = enumerate_copies(g, s);
    let flags = isolated_flags(g, s, &copies);
    copies
        .into_iter()
        .zip(flags)
        .filter_map(|(c, keep)| keep.then_some(c))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatedSubgraph {
    /// `G^S`, on the vertex set of `G`.
    pub graph: Graph,
    /// `copy_index[i]` is the isolated copy containing `graph.edges()[i]`.
    pub copy_index: Vec<usize>,
    pub copies: Vec<Embedding>,
}

impl IsolatedSubgraph {
    /// `E ⊑ G^S`: every edge of `e_set` is in `G^S`, in pairwise distinct copies.
    pub fn embeds_family(&self, e_set: &[Edge]) -> bool {
        let mut used = HashSet::new();
        e_set.iter().all(|&(u, v)| {
            self.graph
                .edge_index(u, v)
                .is_some_and(|i| used.insert(self.copy_index[i]))
        })
    }
}

pub fn isolated_subgraph(g: &Graph, s: &Graph) -> IsolatedSubgraph {
    let copies = isolated_copies(g, s);
    let mut owned: Vec<(Edge, usize)> = copies
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.image_edges(s).into_iter().map(move |e| (e, i)))
        .collect();
    owned.sort_unstable();
    let graph = Graph::from_sorted_edges(g.order(), owned.iter().map(|&(e, _)| e).collect());
    IsolatedSubgraph {
        graph,
        copy_index: owned.into_iter().map(|(_, i)| i).collect(),
        copies,
    }
}

/// Whether `E ⊑ G^S`. `e_set` must be nonempty.
pub fn edge_family_embeds(g: &Graph, s: &Graph, e_set: &[Edge]) -> Result<bool> {
    if e_set.is_empty() {
        return Err(Error::InvalidParameter("edge family must be nonempty".into()));
    }
    Ok(isolated_subgraph(g, s).embeds_family(e_set))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalOptions {
    /// Require pattern vertex `i` to land in part `i`, instead of any
    /// bijection between pattern vertices and parts.
    pub labeled: bool,
    pub keep_copies: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalCounts {
    /// Transversal copies.
    pub z: u64,
    /// Transversal copies that are isolated in `G`.
    pub y: u64,
    pub copies: Option<Vec<Embedding>>,
}

/// `Z` and `Y` for parts `V_1, ..., V_{v(S)}`: copies meeting every part in
/// exactly one vertex.
pub fn transversal_counts(
    g: &Graph,
    s: &Graph,
    parts: &[Vec<Vertex>],
    options: TransversalOptions,
) -> Result<TransversalCounts> {
    if parts.len() != s.order() {
        return Err(Error::InvalidParameter(format!(
            "{} parts for a pattern on {} vertices",
            parts.len(),
            s.order()
        )));
    }
    let mut part_of = vec![usize::MAX; g.order()];
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            if v >= g.order() || part_of[v] != usize::MAX {
                return Err(Error::InvalidParameter(format!(
                    "vertex {v} is out of range or in two parts"
                )));
            }
            part_of[v] = i;
        }
    }
    let isolated: HashSet<Vec<usize>> = isolated_copies(g, s)
        .iter()
        .map(|c| copy_key(c.map(), s))
        .collect();

    let mut seen = HashSet::new();
    let mut kept = Vec::new();
    let mut hit = vec![false; parts.len()];
    let (mut z, mut y) = (0u64, 0u64);
    let _ = for_each_embedding(g, s, |map| {
        let transversal = if options.labeled {
            map.iter().enumerate().all(|(i, &v)| part_of[v] == i)
        } else {
            hit.iter_mut().for_each(|h| *h = false);
            map.iter().all(|&v| {
                let p = part_of[v];
                p != usize::MAX && !std::mem::replace(&mut hit[p], true)
            })
        };
        if transversal {
            let key = copy_key(map, s);
            if !seen.contains(&key) {
                z += 1;
                y += isolated.contains(&key) as u64;
                if options.keep_copies {
                    kept.push(Embedding::new(map.to_vec()));
                }
                seen.insert(key);
            }
        }
        ControlFlow::Continue(())
    });
    Ok(TransversalCounts {
        z,
        y,
        copies: options.keep_copies.then_some(kept),
    })
}

/// Monte Carlo frequency of `E ⊑ G^S` over `G(n, p)`, next to the bound
/// `q^{|E|}` with `q = n^{v(S)-2} p^{e(S)}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbedEstimate {
    pub trials: u64,
    pub hits: u64,
    pub frequency: f64,
    pub std_error: f64,
    pub q: f64,
    pub bound: f64,
}

/// Trial `i` samples `G(n, p)` with seed `derive_seed(seed, 0, i)`.
pub fn estimate_embed_probability(
    n: usize,
    p: f64,
    s: &Graph,
    e_set: &[Edge],
    trials: u64,
    seed: u64,
) -> Result<EmbedEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is needed".into()));
    }
    if e_set.is_empty() {
        return Err(Error::InvalidParameter("edge family must be nonempty".into()));
    }
    if let Some(&(u, v)) = e_set.iter().find(|&&(u, v)| u >= n || v >= n || u == v) {
        return Err(Error::InvalidParameter(format!("({u}, {v}) is not a pair of K_{n}")));
    }
    // fail on bad p before spawning trials
    sample_gnp(1, p, 0)?;
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|i| {
            let g = sample_gnp(n, p, derive_seed(seed, 0, i)).expect("validated").graph;
            if e_set.iter().any(|&(u, v)| !g.has_edge(u, v)) {
                return 0;
            }
            isolated_subgraph(&g, s).embeds_family(e_set) as u64
        })
        .sum();
    let frequency = hits as f64 / trials as f64;
    let q = (n as f64).powi(s.order() as i32 - 2) * p.powi(s.size() as i32);
    Ok(EmbedEstimate {
        trials,
        hits,
        frequency,
        std_error: (frequency * (1.0 - frequency) / trials as f64).sqrt(),
        q,
        bound: q.powi(e_set.len() as i32),
    })
}
