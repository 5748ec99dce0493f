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

//! Heuristic search for colorings with no rainbow copy of a pattern.
//!
//! Useful on hosts far too large for exhaustive search. A reported
//! counterexample is always re-verified by the exact matcher; failing to
//! find one proves nothing.

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::{all_distinct, has_rainbow_copy, CopyTable, ProperColoring};
use crate::graph::Graph;
use crate::random::{derive_seed, rng_from_seed, Rng};

const UNSET: usize = usize::MAX;

/// A coloring strategy that tries to destroy rainbow copies.
pub trait Adversary {
    /// A proper coloring of `g` (raw labels); `copies` lists the pattern
    /// copies as host edge-index lists.
    fn color(&mut self, g: &Graph, copies: &[Vec<usize>], rng: &mut Rng) -> Vec<usize>;
}

/// Greedy: edges in random order take a color that repeats a color already
/// present in some live copy, else (sometimes) any reusable color, else a
/// fresh one. Then single-edge recolorings that reduce the number of
/// rainbow copies are applied until none helps.
#[derive(Clone, Debug)]
pub struct GreedyReuse {
    pub reuse_probability: f64,
    pub repair_rounds: usize,
}

impl Default for GreedyReuse {
    fn default() -> Self {
        GreedyReuse {
            reuse_probability: 0.5,
            repair_rounds: 4,
        }
    }
}

fn color_free(g: &Graph, colors: &[usize], e: usize, c: usize) -> bool {
    let (u, v) = g.edges()[e];
    g.incident_edges(u)
        .chain(g.incident_edges(v))
        .all(|f| f == e || colors[f] != c)
}

fn copy_rainbow(copy: &[usize], colors: &[usize]) -> bool {
    all_distinct(copy.iter().map(|&e| colors[e]))
}

impl Adversary for GreedyReuse {
    fn color(&mut self, g: &Graph, copies: &[Vec<usize>], rng: &mut Rng) -> Vec<usize> {
        let m = g.size();
        let mut edge_copies = vec![Vec::new(); m];
        for (i, copy) in copies.iter().enumerate() {
            for &e in copy {
                edge_copies[e].push(i);
            }
        }
        let mut colors = vec![UNSET; m];
        let mut dead = vec![false; copies.len()];
        let mut copy_colors: Vec<Vec<usize>> = vec![Vec::new(); copies.len()];
        let mut palette = 0usize;
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(rng);

        for &e in &order {
            let free: Vec<usize> = (0..palette)
                .filter(|&c| color_free(g, &colors, e, c))
                .collect();
            let kills = |c: usize| {
                edge_copies[e]
                    .iter()
                    .filter(|&&i| !dead[i] && copy_colors[i].contains(&c))
                    .count()
            };
            let best = free.iter().map(|&c| kills(c)).max().unwrap_or(0);
            let c = if best > 0 {
                let top: Vec<usize> = free.iter().copied().filter(|&c| kills(c) == best).collect();
                *top.choose(rng).expect("nonempty")
            } else if !free.is_empty() && rng.gen_bool(self.reuse_probability) {
                *free.choose(rng).expect("nonempty")
            } else {
                palette += 1;
                palette - 1
            };
            colors[e] = c;
            for &i in &edge_copies[e] {
                if copy_colors[i].contains(&c) {
                    dead[i] = true;
                }
                copy_colors[i].push(c);
            }
        }

        for _ in 0..self.repair_rounds * m.max(1) {
            let Some(target) = (0..copies.len()).find(|&i| copy_rainbow(&copies[i], &colors)) else {
                break;
            };
            let mut best_move = None;
            let mut best_delta = 0i64;
            for &e in &copies[target] {
                let old = colors[e];
                let before = edge_copies[e]
                    .iter()
                    .filter(|&&i| copy_rainbow(&copies[i], &colors))
                    .count() as i64;
                for &f in &copies[target] {
                    let x = colors[f];
                    if x == old || !color_free(g, &colors, e, x) {
                        continue;
                    }
                    colors[e] = x;
                    let after = edge_copies[e]
                        .iter()
                        .filter(|&&i| copy_rainbow(&copies[i], &colors))
                        .count() as i64;
                    colors[e] = old;
                    if after - before < best_delta {
                        best_delta = after - before;
                        best_move = Some((e, x));
                    }
                }
            }
            match best_move {
                Some((e, x)) => colors[e] = x,
                None => break,
            }
        }
        colors
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdversaryOutcome {
    pub coloring: ProperColoring,
    pub rainbow_copies: usize,
    pub total_copies: usize,
}

/// Best of `restarts` runs of `adversary`, by number of rainbow copies.
/// Restart `i` uses the stream `derive_seed(seed, 0, i)`.
pub fn hunt_with<A: Adversary>(
    adversary: &mut A,
    g: &Graph,
    h: &Graph,
    restarts: usize,
    seed: u64,
) -> AdversaryOutcome {
    let table = CopyTable::new(g, h);
    let mut best: Option<AdversaryOutcome> = None;
    for i in 0..restarts.max(1) {
        let mut rng = rng_from_seed(derive_seed(seed, 0, i as u64));
        let raw = adversary.color(g, &table.copies, &mut rng);
        let coloring = ProperColoring::new(g, raw).expect("adversaries return proper colorings");
        let rainbow = (0..table.copies.len())
            .filter(|&c| table.is_rainbow(c, coloring.colors()))
            .count();
        if best.as_ref().is_none_or(|b| rainbow < b.rainbow_copies) {
            best = Some(AdversaryOutcome {
                coloring,
                rainbow_copies: rainbow,
                total_copies: table.copies.len(),
            });
            if rainbow == 0 {
                break;
            }
        }
    }
    best.expect("at least one restart")
}

pub fn adversarial_coloring(g: &Graph, h: &Graph, restarts: usize, seed: u64) -> AdversaryOutcome {
    hunt_with(&mut GreedyReuse::default(), g, h, restarts, seed)
}

/// A proper coloring of `g` with no rainbow `h`, if the greedy adversary
/// finds one within `trials` restarts. Confirmed by the exact matcher.
pub fn hunt_counterexample(g: &Graph, h: &Graph, trials: usize, seed: u64) -> Option<ProperColoring> {
    let outcome = adversarial_coloring(g, h, trials, seed);
    if outcome.rainbow_copies > 0 {
        return None;
    }
    has_rainbow_copy(g, &outcome.coloring, h)
        .expect("coloring matches host")
        .is_none()
        .then_some(outcome.coloring)
}
