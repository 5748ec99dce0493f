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

//! The discrepancy property `DISC(eps)`:
//! `|e(U, V) - vol(U) vol(V) / vol(G)| <= eps vol(G)` for all `U, V`.
//!
//! `U` and `V` may overlap, and `e(U, V)` counts ordered pairs
//! `(u, v) ∈ U × V` with `uv` an edge, so an edge inside `U ∩ V` counts
//! twice. (Counting it once makes `U = V = V(G)` give discrepancy `1/2`
//! for every graph, so no graph could have `DISC(eps)` with `eps < 1/2`.)
//!
//! For fixed `U` the deviation is `sum_{v in V} r_v / vol(G)` with
//! `r_v = |N(v) ∩ U| - vol(U) d(v) / vol(G)`, so the worst `V` collects all
//! positive (or all negative) `r_v`. Only `U` is enumerated.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CheckOutcome, Method, Mode, Violation};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::num::RealScalar;
use crate::random::rng_from_seed;

pub const MAX_DISC_ORDER: usize = 18;

/// Smallest `eps` with `DISC(eps)` (exact mode), or a lower bound on it
/// (sampled mode). `numerator / denominator` is the exact value behind
/// `epsilon`, with `denominator = vol(G)^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscReport<T> {
    pub epsilon: T,
    pub numerator: u64,
    pub denominator: u64,
    pub u_set: Vec<Vertex>,
    pub v_set: Vec<Vertex>,
    pub method: Method,
}

struct Best {
    numerator: u64,
    u_mask: u64,
    positive: bool,
}

/// Worst `V` for the `U` given by `mask`, scaled by `vol(G)`.
fn best_for_u(adj: &[u64], degrees: &[u64], vol: i64, mask: u64) -> (u64, bool) {
    let vol_u: i64 = (0..adj.len())
        .filter(|&v| mask >> v & 1 == 1)
        .map(|v| degrees[v] as i64)
        .sum();
    let (mut pos, mut neg) = (0i64, 0i64);
    for (v, &a) in adj.iter().enumerate() {
        let r = vol * (a & mask).count_ones() as i64 - vol_u * degrees[v] as i64;
        if r > 0 {
            pos += r;
        } else {
            neg -= r;
        }
    }
    if pos >= neg {
        (pos as u64, true)
    } else {
        (neg as u64, false)
    }
}

fn v_set_for(adj: &[u64], degrees: &[u64], vol: i64, mask: u64, positive: bool) -> Vec<Vertex> {
    let vol_u: i64 = (0..adj.len())
        .filter(|&v| mask >> v & 1 == 1)
        .map(|v| degrees[v] as i64)
        .sum();
    (0..adj.len())
        .filter(|&v| {
            let r = vol * (adj[v] & mask).count_ones() as i64 - vol_u * degrees[v] as i64;
            if positive {
                r > 0
            } else {
                r < 0
            }
        })
        .collect()
}

fn bit_members(mask: u64, n: usize) -> Vec<Vertex> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

pub fn disc_discrepancy<T: RealScalar>(g: &Graph, mode: Mode) -> Result<DiscReport<T>> {
    let n = g.order();
    let vol = 2 * g.size() as i64;
    if vol == 0 {
        return Err(Error::InvalidGraph("discrepancy needs at least one edge".into()));
    }
    let limit = match mode {
        Mode::Exact => MAX_DISC_ORDER,
        Mode::Sampled { .. } => 64,
    };
    if n > limit {
        return Err(Error::TooLarge {
            routine: "disc_discrepancy",
            size: n,
            limit,
        });
    }
    let adj = g.adjacency_masks().expect("order checked above");
    let degrees: Vec<u64> = g.degrees().into_iter().map(|d| d as u64).collect();

    let pick = |a: Best, b: Best| {
        if b.numerator > a.numerator || (b.numerator == a.numerator && b.u_mask < a.u_mask) {
            b
        } else {
            a
        }
    };
    let (best, method) = match mode {
        Mode::Exact => {
            let best = (0u64..1 << n)
                .into_par_iter()
                .map(|mask| {
                    let (numerator, positive) = best_for_u(&adj, &degrees, vol, mask);
                    Best {
                        numerator,
                        u_mask: mask,
                        positive,
                    }
                })
                .reduce(
                    || Best {
                        numerator: 0,
                        u_mask: 0,
                        positive: true,
                    },
                    pick,
                );
            (best, Method::Exact)
        }
        Mode::Sampled { probes, seed } => {
            let mut rng = rng_from_seed(seed);
            let mut best = Best {
                numerator: 0,
                u_mask: 0,
                positive: true,
            };
            for _ in 0..probes {
                let mask = if n == 64 {
                    rng.gen::<u64>()
                } else {
                    rng.gen::<u64>() & ((1 << n) - 1)
                };
                let (numerator, positive) = best_for_u(&adj, &degrees, vol, mask);
                best = pick(
                    best,
                    Best {
                        numerator,
                        u_mask: mask,
                        positive,
                    },
                );
            }
            let method = Method::Sampled {
                samples: probes,
                std_error: None,
            };
            (best, method)
        }
    };
    let denominator = (vol * vol) as u64;
    Ok(DiscReport {
        epsilon: T::from_u64(best.numerator).expect("fits") / T::from_u64(denominator).expect("fits"),
        numerator: best.numerator,
        denominator,
        u_set: bit_members(best.u_mask, n),
        v_set: v_set_for(&adj, &degrees, vol, best.u_mask, best.positive),
        method,
    })
}

/// Does `g` have `DISC(eps)`? Sampled mode can only refute.
pub fn check_disc<T: RealScalar>(g: &Graph, eps: T, mode: Mode) -> Result<CheckOutcome<T>> {
    let report = disc_discrepancy::<T>(g, mode)?;
    let violation = (report.epsilon > eps).then(|| Violation {
        u_set: report.u_set.clone(),
        v_set: report.v_set.clone(),
        value: report.epsilon,
    });
    Ok(CheckOutcome::from_search(report.method, violation))
}
