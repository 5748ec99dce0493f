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

//! Pair densities, `(eps, p)`-regularity and `(mu, p)`-upper uniformity.
//!
//! Both exact checks enumerate subsets of one side only. For a fixed
//! `U' ⊆ U`, each `w` in the other side contributes `|N(w) ∩ U'|` edges, so
//! among all `V'` of size `k` the densest and sparsest choices take the `k`
//! largest and `k` smallest contributions.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_vertices, min_part_size, CheckOutcome, Method, Mode, Violation};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::num::RealScalar;
use crate::random::rng_from_seed;

pub const MAX_REGULARITY_ORDER: usize = 26;
pub const MAX_UPPER_UNIFORM_ORDER: usize = 26;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairDensity<T> {
    pub u_set: Vec<Vertex>,
    pub v_set: Vec<Vertex>,
    pub edges_across: usize,
    pub density: T,
}

fn edges_across(g: &Graph, u: &[Vertex], v: &[Vertex]) -> usize {
    u.iter()
        .map(|&a| v.iter().filter(|&&b| g.has_edge(a, b)).count())
        .sum()
}

fn check_pair(g: &Graph, u: &[Vertex], v: &[Vertex]) -> Result<()> {
    check_vertices(g, u, "U")?;
    check_vertices(g, v, "V")?;
    if u.is_empty() || v.is_empty() {
        return Err(Error::InvalidParameter("pair sets must be nonempty".into()));
    }
    if u.iter().any(|x| v.contains(x)) {
        return Err(Error::InvalidParameter("pair sets must be disjoint".into()));
    }
    Ok(())
}

fn ratio<T: RealScalar>(num: usize, den: usize) -> T {
    T::from_usize_lossy(num) / T::from_usize_lossy(den)
}

pub fn pair_density<T: RealScalar>(g: &Graph, u: &[Vertex], v: &[Vertex]) -> Result<PairDensity<T>> {
    check_pair(g, u, v)?;
    let e = edges_across(g, u, v);
    Ok(PairDensity {
        u_set: u.to_vec(),
        v_set: v.to_vec(),
        edges_across: e,
        density: ratio(e, u.len() * v.len()),
    })
}

fn members(mask: u64, side: &[Vertex]) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = (0..side.len())
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| side[i])
        .collect();
    out.sort_unstable();
    out
}

/// Is `G[U, V]` `(eps, p)`-regular? Sub-pairs need `|U'| >= eps|U|` and
/// `|V'| >= eps|V|` and must keep their density within `eps * p` of the
/// whole pair's.
pub fn check_regular_pair<T: RealScalar>(
    g: &Graph,
    u: &[Vertex],
    v: &[Vertex],
    eps: T,
    p: T,
    mode: Mode,
) -> Result<CheckOutcome<T>> {
    check_pair(g, u, v)?;
    let d0: T = ratio(edges_across(g, u, v), u.len() * v.len());
    let slack = eps * p;
    match mode {
        Mode::Exact => {
            let size = u.len() + v.len();
            if size > MAX_REGULARITY_ORDER {
                return Err(Error::TooLarge {
                    routine: "check_regular_pair",
                    size,
                    limit: MAX_REGULARITY_ORDER,
                });
            }
            // enumerate the smaller side; the definition is symmetric
            let (a, b, swapped) = if u.len() <= v.len() { (u, v, false) } else { (v, u, true) };
            let min_a = min_part_size(eps, a.len());
            let min_b = min_part_size(eps, b.len());
            let masks: Vec<u64> = b
                .iter()
                .map(|&w| {
                    (0..a.len())
                        .filter(|&i| g.has_edge(a[i], w))
                        .fold(0u64, |m, i| m | 1 << i)
                })
                .collect();
            let mut order: Vec<usize> = (0..b.len()).collect();
            let mut prefix = vec![0usize; b.len() + 1];
            for mask in 1u64..(1 << a.len()) {
                let size_a = mask.count_ones() as usize;
                if size_a < min_a {
                    continue;
                }
                let counts: Vec<usize> = masks.iter().map(|&m| (m & mask).count_ones() as usize).collect();
                order.sort_by(|&x, &y| counts[y].cmp(&counts[x]).then(x.cmp(&y)));
                for (i, &w) in order.iter().enumerate() {
                    prefix[i + 1] = prefix[i] + counts[w];
                }
                let total = prefix[b.len()];
                for k in min_b..=b.len() {
                    let dense: T = ratio(prefix[k], size_a * k);
                    let sparse: T = ratio(total - prefix[b.len() - k], size_a * k);
                    let pick = if (dense - d0).abs() > slack {
                        Some((dense, &order[..k]))
                    } else if (sparse - d0).abs() > slack {
                        Some((sparse, &order[b.len() - k..]))
                    } else {
                        None
                    };
                    if let Some((value, chosen)) = pick {
                        let a_set = members(mask, a);
                        let mut b_set: Vec<Vertex> = chosen.iter().map(|&i| b[i]).collect();
                        b_set.sort_unstable();
                        let (u_set, v_set) = if swapped { (b_set, a_set) } else { (a_set, b_set) };
                        return Ok(CheckOutcome::from_search(
                            Method::Exact,
                            Some(Violation { u_set, v_set, value }),
                        ));
                    }
                }
            }
            Ok(CheckOutcome::from_search(Method::Exact, None))
        }
        Mode::Sampled { probes, seed } => {
            let mut rng = rng_from_seed(seed);
            let ku = min_part_size(eps, u.len()).min(u.len());
            let kv = min_part_size(eps, v.len()).min(v.len());
            for _ in 0..probes {
                let mut us: Vec<Vertex> = sample(&mut rng, u.len(), ku).into_iter().map(|i| u[i]).collect();
                let mut vs: Vec<Vertex> = sample(&mut rng, v.len(), kv).into_iter().map(|i| v[i]).collect();
                let d: T = ratio(edges_across(g, &us, &vs), ku * kv);
                if (d - d0).abs() > slack {
                    us.sort_unstable();
                    vs.sort_unstable();
                    let violation = Violation { u_set: us, v_set: vs, value: d };
                    return Ok(CheckOutcome::from_search(sampled(probes), Some(violation)));
                }
            }
            Ok(CheckOutcome::from_search(sampled(probes), None))
        }
    }
}

fn sampled(probes: u64) -> Method {
    Method::Sampled {
        samples: probes,
        std_error: None,
    }
}

/// Is `d(U, V) <= (1 + mu) p` for all disjoint `U, V` with `|U|, |V| >= mu n`?
pub fn check_upper_uniform<T: RealScalar>(g: &Graph, mu: T, p: T, mode: Mode) -> Result<CheckOutcome<T>> {
    let n = g.order();
    let bound = (T::one() + mu) * p;
    let min_size = min_part_size(mu, n);
    if 2 * min_size > n {
        // no admissible pair of disjoint sets
        let method = match mode {
            Mode::Exact => Method::Exact,
            Mode::Sampled { probes, .. } => sampled(probes),
        };
        return Ok(CheckOutcome::from_search(method, None));
    }
    match mode {
        Mode::Exact => {
            if n > MAX_UPPER_UNIFORM_ORDER {
                return Err(Error::TooLarge {
                    routine: "check_upper_uniform",
                    size: n,
                    limit: MAX_UPPER_UNIFORM_ORDER,
                });
            }
            let adj = g.adjacency_masks().expect("order checked above");
            let all: Vertex = n;
            let high_bits = n.min(8);
            let low_bits = n - high_bits;
            let found: Vec<Option<Violation<T>>> = (0u64..1 << high_bits)
                .into_par_iter()
                .map(|hi| {
                    let mut order: Vec<Vertex> = Vec::with_capacity(all);
                    for lo in 0u64..1 << low_bits {
                        let mask = hi << low_bits | lo;
                        let size_u = mask.count_ones() as usize;
                        if size_u < min_size || n - size_u < min_size {
                            continue;
                        }
                        order.clear();
                        order.extend((0..n).filter(|&w| mask >> w & 1 == 0));
                        let count = |w: Vertex| (adj[w] & mask).count_ones() as usize;
                        order.sort_by(|&x, &y| count(y).cmp(&count(x)).then(x.cmp(&y)));
                        let mut edges = 0;
                        for (i, &w) in order.iter().enumerate() {
                            edges += count(w);
                            let k = i + 1;
                            if k < min_size {
                                continue;
                            }
                            let d: T = ratio(edges, size_u * k);
                            if d > bound {
                                let mut v_set = order[..k].to_vec();
                                v_set.sort_unstable();
                                return Some(Violation {
                                    u_set: (0..n).filter(|&x| mask >> x & 1 == 1).collect(),
                                    v_set,
                                    value: d,
                                });
                            }
                        }
                    }
                    None
                })
                .collect();
            Ok(CheckOutcome::from_search(Method::Exact, found.into_iter().flatten().next()))
        }
        Mode::Sampled { probes, seed } => {
            let mut rng = rng_from_seed(seed);
            let mut vertices: Vec<Vertex> = (0..n).collect();
            for _ in 0..probes {
                vertices.shuffle(&mut rng);
                let ku = rng.gen_range(min_size..=n - min_size);
                let kv = min_size;
                let (us, rest) = vertices.split_at(ku);
                let vs = &rest[..kv];
                let d: T = ratio(edges_across(g, us, vs), ku * kv);
                if d > bound {
                    let mut u_set = us.to_vec();
                    let mut v_set = vs.to_vec();
                    u_set.sort_unstable();
                    v_set.sort_unstable();
                    let violation = Violation { u_set, v_set, value: d };
                    return Ok(CheckOutcome::from_search(sampled(probes), Some(violation)));
                }
            }
            Ok(CheckOutcome::from_search(sampled(probes), None))
        }
    }
}
