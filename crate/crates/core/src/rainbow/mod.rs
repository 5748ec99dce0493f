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

//! Proper edge-colorings and the rainbow arrows relation `G ->rb H`.

mod arrows;
mod classes;
mod hunt;

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{enumerate_copies, search, Embedding, Graph, Placement, Plan, Vertex};

pub use arrows::{arrows_rainbow, verify_book_lemma, ArrowsOptions, ArrowsResult, ArrowsVerdict};
pub use classes::{canonical_prefixes, enumerate_proper_colorings, ColoringClasses, ColoringWalker};
pub use hunt::{
    adversarial_coloring, hunt_counterexample, hunt_with, Adversary, AdversaryOutcome, GreedyReuse,
};

/// Edge colors keyed by edge index, renamed canonically: colors appear as
/// `0, 1, 2, ...` in order of first use along the edge list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProperColoring {
    colors: Vec<usize>,
    num_colors: usize,
}

/// One edge with its color, for serialisation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredEdge {
    pub u: Vertex,
    pub v: Vertex,
    pub color: usize,
}

/// Canonical renaming of arbitrary color labels.
pub fn canonical_renaming(colors: &[usize]) -> Vec<usize> {
    let mut rename = std::collections::HashMap::new();
    colors
        .iter()
        .map(|&c| {
            let next = rename.len();
            *rename.entry(c).or_insert(next)
        })
        .collect()
}

/// Checks that `colors` is a proper edge-coloring of `g`.
pub fn check_proper(g: &Graph, colors: &[usize]) -> Result<()> {
    if colors.len() != g.size() {
        return Err(Error::ColoringMismatch(format!(
            "{} colors for {} edges",
            colors.len(),
            g.size()
        )));
    }
    for v in 0..g.order() {
        let mut seen: Vec<(usize, usize)> = g.incident_edges(v).map(|e| (colors[e], e)).collect();
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0].0 == w[1].0) {
            let edges = g.edges();
            return Err(Error::NotProper(edges[w[0].1], edges[w[1].1], w[0].0));
        }
    }
    Ok(())
}

impl ProperColoring {
    /// Validates properness and renames colors canonically.
    pub fn new(g: &Graph, colors: Vec<usize>) -> Result<Self> {
        check_proper(g, &colors)?;
        Ok(Self::from_canonical(canonical_renaming(&colors)))
    }

    /// `colors` must already be proper and canonical.
    pub(crate) fn from_canonical(colors: Vec<usize>) -> Self {
        let num_colors = colors.iter().map(|&c| c + 1).max().unwrap_or(0);
        ProperColoring { colors, num_colors }
    }

    /// Every edge its own color.
    pub fn distinct(g: &Graph) -> Self {
        Self::from_canonical((0..g.size()).collect())
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, edge_index: usize) -> usize {
        self.colors[edge_index]
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn colored_edges(&self, g: &Graph) -> Vec<ColoredEdge> {
        g.edges()
            .iter()
            .zip(&self.colors)
            .map(|(&(u, v), &color)| ColoredEdge { u, v, color })
            .collect()
    }

    pub fn from_colored_edges(g: &Graph, edges: &[ColoredEdge]) -> Result<Self> {
        let mut colors = vec![usize::MAX; g.size()];
        for e in edges {
            let i = g.edge_index(e.u, e.v).ok_or_else(|| {
                Error::ColoringMismatch(format!("({}, {}) is not an edge", e.u, e.v))
            })?;
            if colors[i] != usize::MAX {
                return Err(Error::ColoringMismatch(format!("edge ({}, {}) colored twice", e.u, e.v)));
            }
            colors[i] = e.color;
        }
        if colors.contains(&usize::MAX) {
            return Err(Error::ColoringMismatch("some edges are uncolored".into()));
        }
        Self::new(g, colors)
    }

    /// Restriction to a subgraph `sub` of `g` on the same vertex labels.
    pub fn restrict(&self, g: &Graph, sub: &Graph) -> Result<Self> {
        let colors = sub
            .edges()
            .iter()
            .map(|&(u, v)| {
                g.edge_index(u, v)
                    .map(|i| self.colors[i])
                    .ok_or_else(|| Error::ColoringMismatch(format!("({u}, {v}) not in host")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sub, colors)
    }

    fn check_matches(&self, g: &Graph) -> Result<()> {
        if self.colors.len() != g.size() {
            return Err(Error::ColoringMismatch(format!(
                "coloring has {} edges, graph has {}",
                self.colors.len(),
                g.size()
            )));
        }
        Ok(())
    }
}

/// A rainbow copy: the embedding and its colors in pattern edge order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RainbowCopy {
    pub embedding: Embedding,
    pub colors: Vec<usize>,
}

#[inline]
pub(crate) fn all_distinct(values: impl Iterator<Item = usize> + Clone) -> bool {
    let mut outer = values.clone().enumerate();
    outer.all(|(i, a)| values.clone().skip(i + 1).all(|b| b != a))
}

struct RainbowHook<'a> {
    host: &'a Graph,
    colors: &'a [usize],
    used: Vec<bool>,
    stack: Vec<usize>,
}

impl Placement for RainbowHook<'_> {
    fn admit(&mut self, step: usize, plan: &Plan, host_v: Vertex, map: &[Vertex]) -> bool {
        let start = self.stack.len();
        for &w in &plan.back[step] {
            let e = self
                .host
                .edge_index(host_v, map[w])
                .expect("structural check ensures the edge exists");
            let c = self.colors[e];
            if self.used[c] {
                for c in self.stack.drain(start..) {
                    self.used[c] = false;
                }
                return false;
            }
            self.used[c] = true;
            self.stack.push(c);
        }
        true
    }

    fn retract(&mut self, step: usize, plan: &Plan, _host_v: Vertex, _map: &[Vertex]) {
        for _ in 0..plan.back[step].len() {
            let c = self.stack.pop().expect("balanced admit/retract");
            self.used[c] = false;
        }
    }
}

/// Searches for a copy of `h` in `g` whose edges carry pairwise distinct colors.
pub fn has_rainbow_copy(g: &Graph, c: &ProperColoring, h: &Graph) -> Result<Option<RainbowCopy>> {
    c.check_matches(g)?;
    Ok(find_rainbow(g, c.colors(), c.num_colors(), h))
}

/// As [`has_rainbow_copy`] for raw color labels, which are checked for properness.
pub fn has_rainbow_copy_raw(g: &Graph, colors: &[usize], h: &Graph) -> Result<Option<RainbowCopy>> {
    check_proper(g, colors)?;
    let bound = colors.iter().map(|&c| c + 1).max().unwrap_or(0);
    Ok(find_rainbow(g, colors, bound, h))
}

fn find_rainbow(g: &Graph, colors: &[usize], num_colors: usize, h: &Graph) -> Option<RainbowCopy> {
    let plan = Plan::new(h);
    let mut hook = RainbowHook {
        host: g,
        colors,
        used: vec![false; num_colors],
        stack: Vec::new(),
    };
    let mut found = None;
    let _ = search(g, &plan, &mut hook, &mut |map| {
        found = Some(map.to_vec());
        ControlFlow::Break(())
    });
    found.map(|map| {
        let embedding = Embedding::new(map);
        let colors = embedding
            .image_edge_indices(g, h)
            .into_iter()
            .map(|e| colors[e])
            .collect();
        RainbowCopy { embedding, colors }
    })
}

/// Copies of a pattern in a host, as host edge-index lists.
pub(crate) struct CopyTable {
    pub copies: Vec<Vec<usize>>,
}

impl CopyTable {
    pub fn new(g: &Graph, h: &Graph) -> Self {
        let copies = enumerate_copies(g, h)
            .into_iter()
            .map(|emb| emb.image_edge_indices(g, h))
            .collect();
        CopyTable { copies }
    }

    pub fn is_rainbow(&self, copy: usize, colors: &[usize]) -> bool {
        all_distinct(self.copies[copy].iter().map(|&e| colors[e]))
    }

    pub fn any_rainbow(&self, colors: &[usize]) -> bool {
        (0..self.copies.len()).any(|i| self.is_rainbow(i, colors))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_book, make_clique, make_cycle, make_path};

    #[test]
    fn construction_checks_properness() {
        let p3 = make_path(3).unwrap();
        assert!(matches!(
            ProperColoring::new(&p3, vec![4, 4]),
            Err(Error::NotProper(..))
        ));
        assert!(ProperColoring::new(&p3, vec![4]).is_err());
        let c = ProperColoring::new(&p3, vec![7, 3]).unwrap();
        assert_eq!(c.colors(), &[0, 1]);
        assert_eq!(c.num_colors(), 2);
    }

    #[test]
    fn triangles_are_always_rainbow() {
        let k3 = make_clique(3).unwrap();
        let c = ProperColoring::distinct(&k3);
        assert!(has_rainbow_copy(&k3, &c, &k3).unwrap().is_some());
    }

    #[test]
    fn book_two_counterexample_coloring() {
        let b2 = make_book(2).unwrap();
        // edges: (0,1) (0,2) (0,3) (1,2) (1,3) = u1u2 u1v1 u1v2 u2v1 u2v2
        let raw = vec![0, 1, 2, 2, 1];
        check_proper(&b2, &raw).unwrap();
        assert!(has_rainbow_copy_raw(&b2, &raw, &b2).unwrap().is_none());
        // K3 copies are still rainbow
        let hit = has_rainbow_copy_raw(&b2, &raw, &make_clique(3).unwrap()).unwrap().unwrap();
        assert_eq!(hit.colors.len(), 3);
    }

    #[test]
    fn every_p3_is_rainbow_in_proper_colorings() {
        let c4 = make_cycle(4).unwrap();
        let two = ProperColoring::new(&c4, vec![0, 1, 1, 0]).unwrap();
        // edges (0,1) (0,3) (1,2) (2,3)
        assert_eq!(two.num_colors(), 2);
        let hit = has_rainbow_copy(&c4, &two, &make_path(3).unwrap()).unwrap().unwrap();
        assert!(hit.embedding.is_valid(&c4, &make_path(3).unwrap()));
    }

    #[test]
    fn raw_search_rejects_improper_coloring() {
        let k3 = make_clique(3).unwrap();
        assert!(has_rainbow_copy_raw(&k3, &[0, 0, 1], &k3).is_err());
    }

    #[test]
    fn colored_edges_round_trip_and_restriction() {
        let b2 = make_book(2).unwrap();
        let c = ProperColoring::new(&b2, vec![0, 1, 2, 2, 1]).unwrap();
        let listed = c.colored_edges(&b2);
        assert_eq!(ProperColoring::from_colored_edges(&b2, &listed).unwrap(), c);
        let tri = make_clique(3).unwrap();
        let r = c.restrict(&b2, &tri).unwrap();
        assert_eq!(r.colors(), &[0, 1, 2]);
    }

    #[test]
    fn distinct_helper() {
        assert!(all_distinct([1usize, 2, 3].into_iter()));
        assert!(!all_distinct([1usize, 2, 1].into_iter()));
        assert!(all_distinct(std::iter::empty::<usize>()));
    }
}
