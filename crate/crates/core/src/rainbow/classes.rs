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

//! Enumeration of proper colorings up to renaming of colors.
//!
//! A renaming class is a partition of the edge set into matchings. Each
//! class is represented by its restricted growth string over the edge
//! order: edge `i` gets a color at most one larger than any color used on
//! edges `0..i`. Strings are produced in lexicographic order.

use super::ProperColoring;
use crate::graph::Graph;

/// Lexicographic walker over canonical proper colorings. The first
/// `fixed` edges keep the colors of a given prefix.
#[derive(Clone, Debug)]
pub struct ColoringWalker {
    earlier_adjacent: Vec<Vec<usize>>,
    colors: Vec<usize>,
    /// `used[i]`: number of colors on edges `0..=i`.
    used: Vec<usize>,
    fixed: usize,
    started: bool,
    done: bool,
}

impl ColoringWalker {
    pub fn new(g: &Graph) -> Self {
        Self::build(g, g.size(), &[])
    }

    /// Walks the completions of `prefix`, which must itself be a canonical
    /// proper coloring of the first `prefix.len()` edges.
    pub fn with_prefix(g: &Graph, prefix: &[usize]) -> Self {
        Self::build(g, g.size(), prefix)
    }

    fn build(g: &Graph, m: usize, prefix: &[usize]) -> Self {
        let mut earlier_adjacent = vec![Vec::new(); m];
        for (i, &(u, v)) in g.edges().iter().enumerate().take(m) {
            let mut adj: Vec<usize> = g
                .incident_edges(u)
                .chain(g.incident_edges(v))
                .filter(|&j| j < i)
                .collect();
            adj.sort_unstable();
            earlier_adjacent[i] = adj;
        }
        let mut colors = vec![0; m];
        let mut used = vec![0; m];
        let mut count = 0;
        for (i, &c) in prefix.iter().enumerate() {
            debug_assert!(c <= count, "prefix is not canonical");
            debug_assert!(earlier_adjacent[i].iter().all(|&j| colors[j] != c));
            colors[i] = c;
            count = count.max(c + 1);
            used[i] = count;
        }
        ColoringWalker {
            earlier_adjacent,
            colors,
            used,
            fixed: prefix.len(),
            started: false,
            done: false,
        }
    }

    #[inline]
    fn count_before(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.used[i - 1]
        }
    }

    #[inline]
    fn allowed(&self, i: usize, c: usize) -> bool {
        self.earlier_adjacent[i].iter().all(|&j| self.colors[j] != c)
    }

    #[inline]
    fn set(&mut self, i: usize, c: usize) {
        self.colors[i] = c;
        self.used[i] = self.count_before(i).max(c + 1);
    }

    fn fill_from(&mut self, start: usize) {
        for i in start..self.colors.len() {
            let limit = self.count_before(i);
            let c = (0..limit)
                .find(|&c| self.allowed(i, c))
                .unwrap_or(limit);
            self.set(i, c);
        }
    }

    /// Next coloring in lexicographic order, borrowed from the walker.
    pub fn advance(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill_from(self.fixed);
            return Some(&self.colors);
        }
        let m = self.colors.len();
        for i in (self.fixed..m).rev() {
            let limit = self.count_before(i);
            let next = (self.colors[i] + 1..=limit).find(|&c| self.allowed(i, c));
            if let Some(c) = next {
                self.set(i, c);
                self.fill_from(i + 1);
                return Some(&self.colors);
            }
        }
        self.done = true;
        None
    }
}

/// Owning iterator over canonical proper colorings.
pub struct ColoringClasses {
    walker: ColoringWalker,
}

impl Iterator for ColoringClasses {
    type Item = ProperColoring;

    fn next(&mut self) -> Option<ProperColoring> {
        self.walker
            .advance()
            .map(|c| ProperColoring::from_canonical(c.to_vec()))
    }
}

/// One representative per renaming class of proper colorings of `g`.
pub fn enumerate_proper_colorings(g: &Graph) -> ColoringClasses {
    ColoringClasses {
        walker: ColoringWalker::new(g),
    }
}

/// All canonical colorings of the first `depth` edges; completions of
/// distinct prefixes are disjoint and together cover every class.
pub fn canonical_prefixes(g: &Graph, depth: usize) -> Vec<Vec<usize>> {
    let depth = depth.min(g.size());
    let mut walker = ColoringWalker::build(g, depth, &[]);
    let mut out = Vec::new();
    while let Some(c) = walker.advance() {
        out.push(c.to_vec());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_book, make_clique, make_path};
    use crate::rainbow::{canonical_renaming, check_proper};
    use std::collections::HashSet;

    /// Every assignment of colors `0..m` to the edges, filtered for
    /// properness, quotiented by renaming.
    fn oracle_count(g: &Graph) -> usize {
        let m = g.size();
        let mut classes = HashSet::new();
        let total = (m as u64).pow(m as u32).max(1);
        for code in 0..total {
            let mut x = code;
            let colors: Vec<usize> = (0..m)
                .map(|_| {
                    let c = (x % m as u64) as usize;
                    x /= m as u64;
                    c
                })
                .collect();
            if check_proper(g, &colors).is_ok() {
                classes.insert(canonical_renaming(&colors));
            }
        }
        classes.len()
    }

    #[test]
    fn small_examples() {
        assert_eq!(enumerate_proper_colorings(&make_clique(3).unwrap()).count(), 1);
        assert_eq!(enumerate_proper_colorings(&make_path(3).unwrap()).count(), 1);
        let two_k2 = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(enumerate_proper_colorings(&two_k2).count(), 2);
        assert_eq!(oracle_count(&two_k2), 2);
        // the empty coloring of an edgeless graph
        assert_eq!(enumerate_proper_colorings(&Graph::empty(3)).count(), 1);
    }

    #[test]
    fn independent_edges_give_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for (m, &b) in bell.iter().enumerate() {
            let g = Graph::new(2 * m, (0..m).map(|i| (2 * i, 2 * i + 1))).unwrap();
            assert_eq!(enumerate_proper_colorings(&g).count(), b);
        }
    }

    #[test]
    fn outputs_are_canonical_proper_and_sorted() {
        let g = make_book(3).unwrap();
        let all: Vec<_> = enumerate_proper_colorings(&g).collect();
        for c in &all {
            check_proper(&g, c.colors()).unwrap();
            assert_eq!(canonical_renaming(c.colors()), c.colors());
        }
        assert!(all.windows(2).all(|w| w[0].colors() < w[1].colors()));
        assert_eq!(all.len(), oracle_count(&g));
    }

    #[test]
    fn prefixes_partition_the_classes() {
        let g = make_book(3).unwrap();
        let whole: Vec<Vec<usize>> = enumerate_proper_colorings(&g)
            .map(|c| c.colors().to_vec())
            .collect();
        for depth in 0..=g.size() {
            let mut joined = Vec::new();
            for prefix in canonical_prefixes(&g, depth) {
                let mut w = ColoringWalker::with_prefix(&g, &prefix);
                while let Some(c) = w.advance() {
                    joined.push(c.to_vec());
                }
            }
            assert_eq!(joined, whole, "depth {depth}");
        }
    }
}
