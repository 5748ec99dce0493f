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

//! Circuits, cycles and paths.
//!
//! An `l`-circuit is a vertex sequence `(v_1, ..., v_l)` with consecutive
//! vertices adjacent and `v_l v_1` an edge: a closed walk with a marked
//! start and direction, so there are `tr(A^l)` of them. Cycles here are
//! unordered (a vertex set with a cyclic order up to rotation and
//! reflection); each `l`-cycle yields `2l` circuits. Paths are likewise
//! counted once per unordered path.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::num::{compensated_sum, RealScalar};
use crate::rainbow::ProperColoring;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitWeight<T> {
    /// Sum over `l`-circuits of `prod 1/d(v_i)`.
    pub sum: T,
    /// Isolated vertices lie on no circuit and are left out of the trace.
    pub isolated_excluded: usize,
}

/// `sum_C prod_i 1/d(v_i)` over all `l`-circuits, as `tr((D^-1 A)^l)`.
///
/// Computed through the symmetric `N = D^-1/2 A D^-1/2`, which has the same
/// trace powers: `tr(N^l) = sum_v <N^a e_v, N^b e_v>` with `a = l/2` and
/// `b = l - a`. Per-vertex terms are added in vertex order with
/// compensated summation, so the result does not depend on threading.
pub fn circuit_weight_sum<T: RealScalar>(g: &Graph, ell: usize) -> Result<CircuitWeight<T>> {
    if ell < 2 {
        return Err(Error::InvalidParameter(format!("circuit length {ell} < 2")));
    }
    let n = g.order();
    let scale: Vec<T> = (0..n)
        .map(|v| match g.degree(v) {
            0 => T::zero(),
            d => T::one() / T::from_usize_lossy(d).sqrt(),
        })
        .collect();
    let apply = |x: &[T], out: &mut [T]| {
        for v in 0..n {
            let mut acc = T::zero();
            for &w in g.neighbors(v) {
                acc = acc + scale[w] * x[w];
            }
            out[v] = scale[v] * acc;
        }
    };
    let a = ell / 2;
    let b = ell - a;
    let terms: Vec<T> = (0..n)
        .into_par_iter()
        .map(|v| {
            if g.degree(v) == 0 {
                return T::zero();
            }
            let mut x = vec![T::zero(); n];
            let mut tmp = vec![T::zero(); n];
            x[v] = T::one();
            for _ in 0..a {
                apply(&x, &mut tmp);
                std::mem::swap(&mut x, &mut tmp);
            }
            let mut y = x.clone();
            for _ in 0..b - a {
                apply(&y, &mut tmp);
                std::mem::swap(&mut y, &mut tmp);
            }
            compensated_sum(x.iter().zip(&y).map(|(&p, &q)| p * q))
        })
        .collect();
    Ok(CircuitWeight {
        sum: compensated_sum(terms),
        isolated_excluded: (0..n).filter(|&v| g.degree(v) == 0).count(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitCheck<T> {
    pub ell: usize,
    pub eps: T,
    pub weight_sum: T,
    pub holds: bool,
    pub isolated_excluded: usize,
}

/// `CIRCUIT_l(eps)`: the circuit weight sum is `1 ± eps`.
pub fn check_circuit_property<T: RealScalar>(g: &Graph, ell: usize, eps: T) -> Result<CircuitCheck<T>> {
    let w = circuit_weight_sum::<T>(g, ell)?;
    Ok(CircuitCheck {
        ell,
        eps,
        weight_sum: w.sum,
        holds: (w.sum - T::one()).abs() <= eps,
        isolated_excluded: w.isolated_excluded,
    })
}

/// `tr(A^l)`, the number of `l`-circuits, in checked integer arithmetic.
pub fn count_circuits(g: &Graph, ell: usize) -> Result<u128> {
    let n = g.order();
    let step = |x: &[u128]| -> Option<Vec<u128>> {
        (0..n)
            .map(|v| {
                g.neighbors(v)
                    .iter()
                    .try_fold(0u128, |acc, &w| acc.checked_add(x[w]))
            })
            .collect()
    };
    let a = ell / 2;
    let b = ell - a;
    let terms: Vec<Option<u128>> = (0..n)
        .into_par_iter()
        .map(|v| {
            let mut x = vec![0u128; n];
            x[v] = 1;
            for _ in 0..a {
                x = step(&x)?;
            }
            let mut y = x.clone();
            for _ in 0..b - a {
                y = step(&y)?;
            }
            x.iter()
                .zip(&y)
                .try_fold(0u128, |acc, (&p, &q)| acc.checked_add(p.checked_mul(q)?))
        })
        .collect();
    terms
        .into_iter()
        .try_fold(0u128, |acc, t| acc.checked_add(t?))
        .ok_or(Error::Overflow("count_circuits"))
}

/// Visits every `l`-cycle once, as its vertex sequence starting at the
/// smallest vertex `s` with `path[1] < path[l-1]`, together with the edge
/// indices `(path[i], path[i+1])` and the closing edge last.
fn for_each_cycle_from<F>(g: &Graph, ell: usize, s: Vertex, visit: &mut F)
where
    F: FnMut(&[Vertex], &[usize]),
{
    let n = g.order();
    let mut on_path = vec![false; n];
    let mut closes = vec![usize::MAX; n];
    for e in g.incident_edges(s) {
        let (a, b) = g.edges()[e];
        closes[if a == s { b } else { a }] = e;
    }
    let mut path = vec![s];
    let mut edges = Vec::with_capacity(ell);
    on_path[s] = true;

    fn extend<F: FnMut(&[Vertex], &[usize])>(
        g: &Graph,
        ell: usize,
        s: Vertex,
        closes: &[usize],
        on_path: &mut [bool],
        path: &mut Vec<Vertex>,
        edges: &mut Vec<usize>,
        visit: &mut F,
    ) {
        let last = *path.last().expect("nonempty");
        if path.len() == ell {
            if closes[last] != usize::MAX && path[1] < last {
                edges.push(closes[last]);
                visit(path, edges);
                edges.pop();
            }
            return;
        }
        for e in g.incident_edges(last) {
            let (a, b) = g.edges()[e];
            let w = if a == last { b } else { a };
            if w <= s || on_path[w] {
                continue;
            }
            on_path[w] = true;
            path.push(w);
            edges.push(e);
            extend(g, ell, s, closes, on_path, path, edges, visit);
            edges.pop();
            path.pop();
            on_path[w] = false;
        }
    }
    extend(g, ell, s, &closes, &mut on_path, &mut path, &mut edges, visit);
}

/// Number of (unordered) `l`-cycles.
pub fn count_cycles(g: &Graph, ell: usize) -> Result<u64> {
    Ok(cycle_census(g, ell, None)?.total)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCensus {
    pub total: u64,
    pub rainbow: u64,
    pub non_rainbow: u64,
}

fn cycle_census(g: &Graph, ell: usize, c: Option<&ProperColoring>) -> Result<CycleCensus> {
    if ell < 3 {
        return Err(Error::InvalidParameter(format!("cycle length {ell} < 3")));
    }
    if let Some(c) = c {
        if c.len() != g.size() {
            return Err(Error::ColoringMismatch("coloring does not match graph".into()));
        }
    }
    let parts: Vec<CycleCensus> = (0..g.order())
        .into_par_iter()
        .map(|s| {
            let mut census = CycleCensus::default();
            let mut seen = Vec::new();
            for_each_cycle_from(g, ell, s, &mut |_, edges| {
                census.total += 1;
                if let Some(c) = c {
                    seen.clear();
                    seen.extend(edges.iter().map(|&e| c.color(e)));
                    seen.sort_unstable();
                    if seen.windows(2).any(|w| w[0] == w[1]) {
                        census.non_rainbow += 1;
                    } else {
                        census.rainbow += 1;
                    }
                }
            });
            census
        })
        .collect();
    Ok(parts.into_iter().fold(CycleCensus::default(), |acc, p| CycleCensus {
        total: acc.total + p.total,
        rainbow: acc.rainbow + p.rainbow,
        non_rainbow: acc.non_rainbow + p.non_rainbow,
    }))
}

/// `l`-cycles split by whether their colors are pairwise distinct.
pub fn cycle_color_census(g: &Graph, c: &ProperColoring, ell: usize) -> Result<CycleCensus> {
    cycle_census(g, ell, Some(c))
}

pub fn count_rainbow_cycles(g: &Graph, c: &ProperColoring, ell: usize) -> Result<u64> {
    Ok(cycle_color_census(g, c, ell)?.rainbow)
}

pub fn count_non_rainbow_cycles(g: &Graph, c: &ProperColoring, ell: usize) -> Result<u64> {
    Ok(cycle_color_census(g, c, ell)?.non_rainbow)
}

/// Simple `u`-`v` paths on exactly `ell_vertices` vertices.
pub fn count_paths_between(g: &Graph, u: Vertex, v: Vertex, ell_vertices: usize) -> Result<u64> {
    if u == v || u >= g.order() || v >= g.order() {
        return Err(Error::InvalidParameter(format!("bad endpoints {u}, {v}")));
    }
    if ell_vertices < 2 {
        return Ok(0);
    }
    fn walk(g: &Graph, at: Vertex, target: Vertex, left: usize, on_path: &mut [bool]) -> u64 {
        // `left` more vertices to add, the last of which must be `target`
        if left == 1 {
            return g.has_edge(at, target) as u64;
        }
        let mut total = 0;
        for &w in g.neighbors(at) {
            if on_path[w] || w == target {
                continue;
            }
            on_path[w] = true;
            total += walk(g, w, target, left - 1, on_path);
            on_path[w] = false;
        }
        total
    }
    let mut on_path = vec![false; g.order()];
    on_path[u] = true;
    Ok(walk(g, u, v, ell_vertices - 1, &mut on_path))
}

/// Simple paths on `k_vertices >= 3` vertices whose first and last edges
/// share a color, each unordered path counted once.
pub fn count_color_tied_paths(g: &Graph, c: &ProperColoring, k_vertices: usize) -> Result<u64> {
    if k_vertices < 3 {
        return Err(Error::InvalidParameter(format!(
            "color-tied paths need at least 3 vertices, got {k_vertices}"
        )));
    }
    if c.len() != g.size() {
        return Err(Error::ColoringMismatch("coloring does not match graph".into()));
    }
    fn walk(
        g: &Graph,
        c: &ProperColoring,
        at: Vertex,
        first_color: usize,
        left: usize,
        on_path: &mut [bool],
    ) -> u64 {
        let mut total = 0;
        for e in g.incident_edges(at) {
            let (a, b) = g.edges()[e];
            let w = if a == at { b } else { a };
            if on_path[w] {
                continue;
            }
            if left == 1 {
                total += (c.color(e) == first_color) as u64;
                continue;
            }
            on_path[w] = true;
            total += walk(g, c, w, first_color, left - 1, on_path);
            on_path[w] = false;
        }
        total
    }
    let directed: u64 = (0..g.order())
        .into_par_iter()
        .map(|s| {
            let mut on_path = vec![false; g.order()];
            on_path[s] = true;
            let mut total = 0;
            for e in g.incident_edges(s) {
                let (a, b) = g.edges()[e];
                let w = if a == s { b } else { a };
                on_path[w] = true;
                total += walk(g, c, w, c.color(e), k_vertices - 2, &mut on_path);
                on_path[w] = false;
            }
            total
        })
        .sum();
    Ok(directed / 2)
}
