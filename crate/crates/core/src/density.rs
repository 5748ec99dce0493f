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

//! Exact m2-density arithmetic.
//!
//! `m2(H) = max (e(J) - 1) / (v(J) - 2)` over subgraphs `J ⊆ H` with
//! `v(J) >= 3`. For a fixed vertex set the induced subgraph has the most
//! edges and the ratio is strictly increasing in `e(J)`, so the maximum over
//! arbitrary subgraphs equals the maximum over induced ones.
//!
//! The search further restricts to connected induced subgraphs. This is
//! exact whenever `Δ(H) >= 2`: a connected `J` with `v(J) >= 3` has ratio at
//! least 1, and for a disconnected `J = A ∪ B` (with `A` a component)
//! the ratio is the mediant of `(e(A) - 1) / (v(A) - 2)` and `e(B) / v(B)`,
//! where `e(B) / v(B)` is strictly below the ratio of every component of `B`
//! with three or more vertices and at most `1/2` otherwise. Graphs with
//! `Δ(H) <= 1` (matchings) are handled in closed form. The brute-force
//! oracle in the tests checks all of this against edge-subgraph enumeration.

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{amalgamate, make_book, Edge, Graph, LabeledTwoGraph};
use crate::num::ExactInt;
use crate::rainbow::{arrows_rainbow, ArrowsOptions, ArrowsVerdict};

/// Largest order handled by the exact subset search.
pub const MAX_DENSITY_ORDER: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport<I: ExactInt> {
    /// `m2(H)`.
    #[serde(serialize_with = "serialize_ratio")]
    pub value: Ratio<I>,
    /// The maximising subgraph, relabelled along `witness_vertices`.
    pub witness: Graph,
    /// Vertices of `H` spanning the witness, increasing.
    pub witness_vertices: Vec<usize>,
    /// The whole graph attains the maximum.
    pub two_balanced: bool,
}

pub(crate) fn serialize_ratio<I: ExactInt, S: serde::Serializer>(
    r: &Ratio<I>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ratio<I: ExactInt>(num: i64, den: i64) -> Ratio<I> {
    Ratio::new(
        I::from_i64(num).expect("fits"),
        I::from_i64(den).expect("fits"),
    )
}

/// Ordering of `(e1 - 1)/(k1 - 2)` against `(e2 - 1)/(k2 - 2)`, denominators positive.
fn cmp_ratio(e1: i64, k1: i64, e2: i64, k2: i64) -> std::cmp::Ordering {
    ((e1 - 1) * (k2 - 2)).cmp(&((e2 - 1) * (k1 - 2)))
}

fn induced_edges(masks: &[u64], set: u64) -> i64 {
    let mut twice = 0u32;
    let mut rest = set;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        twice += (masks[v] & set).count_ones();
    }
    (twice / 2) as i64
}

fn is_connected(masks: &[u64], set: u64) -> bool {
    let start = set & set.wrapping_neg();
    let mut seen = start;
    let mut frontier = start;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = masks[v] & set & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen == set
}

fn edge_list_of(g: &Graph, set: u64) -> Vec<Edge> {
    g.edges()
        .iter()
        .copied()
        .filter(|&(u, v)| set >> u & 1 == 1 && set >> v & 1 == 1)
        .collect()
}

fn mask_vertices(set: u64) -> Vec<usize> {
    (0..64).filter(|&v| set >> v & 1 == 1).collect()
}

/// Next larger integer with the same popcount (Gosper's hack).
fn next_same_popcount(x: u64) -> Option<u64> {
    let c = x & x.wrapping_neg();
    let r = x.checked_add(c)?;
    Some((((r ^ x) >> 2) / c) | r)
}

/// Exact `m2(h)` with a witness subgraph.
///
/// Ties between maximisers are broken by fewest vertices, then fewest edges,
/// then lexicographically smallest edge list.
pub fn m2_density<I: ExactInt>(h: &Graph) -> Result<DensityReport<I>> {
    let n = h.order();
    if n < 3 {
        return Err(Error::InvalidGraph(format!(
            "m2-density needs at least 3 vertices, got {n}"
        )));
    }
    if h.size() == 0 {
        return Err(Error::InvalidGraph("m2-density needs at least one edge".into()));
    }
    if n > MAX_DENSITY_ORDER {
        return Err(Error::TooLarge {
            routine: "m2_density",
            size: n,
            limit: MAX_DENSITY_ORDER,
        });
    }
    let masks = h.adjacency_masks().expect("order checked above");
    let whole = h.size() as i64;

    let (best_e, best_k, best_set) = if h.max_degree() <= 1 {
        matching_optimum(h)
    } else {
        let mut degrees = h.degrees();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        let mut best: Option<(i64, i64, u64, Vec<Edge>)> = None;
        for k in 3..=n {
            let ki = k as i64;
            let by_degree = degrees[..k].iter().sum::<usize>() as i64 / 2;
            let bound = by_degree.min(ki * (ki - 1) / 2);
            if let Some((be, bk, _, _)) = &best {
                if cmp_ratio(bound, ki, *be, *bk).is_lt() {
                    continue;
                }
            }
            let mut set = (1u64 << k) - 1;
            let limit = 1u64 << n;
            while set < limit {
                let e = induced_edges(&masks, set);
                let verdict = best
                    .as_ref()
                    .map_or(std::cmp::Ordering::Greater, |(be, bk, _, _)| {
                        cmp_ratio(e, ki, *be, *bk)
                    });
                if verdict.is_ge() && is_connected(&masks, set) {
                    match verdict {
                        std::cmp::Ordering::Greater => {
                            best = Some((e, ki, set, edge_list_of(h, set)));
                        }
                        _ => {
                            let (_, bk, _, be_list) = best.as_ref().expect("tie implies best");
                            if *bk == ki {
                                let list = edge_list_of(h, set);
                                if list < *be_list {
                                    best = Some((e, ki, set, list));
                                }
                            }
                        }
                    }
                }
                set = match next_same_popcount(set) {
                    Some(s) => s,
                    None => break,
                };
            }
        }
        let (e, k, set, _) = best.expect("a vertex of degree two spans a connected triple");
        (e, k, set)
    };

    let witness_vertices = mask_vertices(best_set);
    let witness = h.induced_subgraph(&witness_vertices)?;
    let two_balanced = cmp_ratio(whole, n as i64, best_e, best_k).is_eq();
    Ok(DensityReport {
        value: ratio(best_e - 1, best_k - 2),
        witness,
        witness_vertices,
        two_balanced,
    })
}

/// `Δ <= 1`: two edges on four vertices give 1/2; a single edge plus a
/// vertex gives 0.
fn matching_optimum(h: &Graph) -> (i64, i64, u64) {
    let edges = h.edges();
    if edges.len() >= 2 {
        let set = [edges[0], edges[1]]
            .iter()
            .fold(0u64, |m, &(u, v)| m | 1 << u | 1 << v);
        (2, 4, set)
    } else {
        let (u, v) = edges[0];
        let extra = (0..h.order()).find(|&w| w != u && w != v).expect("n >= 3");
        (1, 3, 1 << u | 1 << v | 1 << extra)
    }
}

/// `s` attains its own m2-density.
pub fn is_two_balanced(s: &Graph) -> Result<bool> {
    Ok(m2_density::<i64>(s)?.two_balanced)
}

/// `beta(H, S) = (v(S) - 2 + 1/m2(H)) / e(S)`.
pub fn beta<I: ExactInt>(h: &Graph, s: &Graph) -> Result<Ratio<I>> {
    if s.order() < 3 || s.size() == 0 {
        return Err(Error::InvalidGraph(format!(
            "beta needs v(S) >= 3 and e(S) >= 1, got v={} e={}",
            s.order(),
            s.size()
        )));
    }
    let m2 = m2_density::<I>(h)?.value;
    if m2.is_zero() {
        return Err(Error::InvalidGraph("m2(H) = 0, 1/m2(H) undefined".into()));
    }
    Ok(beta_from_m2(&m2, s.order(), s.size()))
}

pub(crate) fn beta_from_m2<I: ExactInt>(m2: &Ratio<I>, v_s: usize, e_s: usize) -> Ratio<I> {
    let base = ratio::<I>(v_s as i64 - 2, 1);
    (base + m2.recip()) / ratio::<I>(e_s as i64, 1)
}

/// Each hypothesis of the amalgamation threshold theorem, reported separately.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremHypotheses {
    #[serde(serialize_with = "serialize_ratio")]
    pub m2_h: Ratio<num_bigint::BigInt>,
    #[serde(serialize_with = "serialize_ratio")]
    pub m2_f: Ratio<num_bigint::BigInt>,
    /// `1 < m2(H)`.
    pub h_above_one: bool,
    /// `m2(H) < m2(F)`.
    pub h_below_f: bool,
    pub s_two_balanced: bool,
    /// Verdict on `S ->rb F` from the exact procedure (or unknown past the budget).
    pub s_arrows_f: ArrowsVerdict,
    /// `beta(H, S)`, when defined.
    pub beta: Option<String>,
    pub amalgam_order: usize,
    pub amalgam_size: usize,
}

impl TheoremHypotheses {
    pub fn all_hold(&self) -> bool {
        self.h_above_one
            && self.h_below_f
            && self.s_two_balanced
            && self.s_arrows_f == ArrowsVerdict::Holds
    }
}

pub fn check_theorem_hypotheses(
    f: &LabeledTwoGraph,
    h: &LabeledTwoGraph,
    s: &Graph,
    arrows: &ArrowsOptions,
) -> Result<TheoremHypotheses> {
    type Big = num_bigint::BigInt;
    let m2_h = m2_density::<Big>(h.graph())?.value;
    let m2_f = m2_density::<Big>(f.graph())?.value;
    let s_report = m2_density::<Big>(s)?;
    let s_arrows_f = arrows_rainbow(s, f.graph(), arrows).verdict;
    let beta = (!m2_h.is_zero()).then(|| beta_from_m2(&m2_h, s.order(), s.size()).to_string());
    let amalgam = amalgamate(f, h);
    Ok(TheoremHypotheses {
        h_above_one: m2_h > Ratio::one(),
        h_below_f: m2_h < m2_f,
        s_two_balanced: s_report.two_balanced,
        s_arrows_f,
        beta,
        amalgam_order: amalgam.order(),
        amalgam_size: amalgam.size(),
        m2_h,
        m2_f,
    })
}

/// Arithmetic behind the book-graph corollary for one `(H, t)`.
#[derive(Clone, Debug, Serialize)]
pub struct CorollaryGap<I: ExactInt> {
    pub t: usize,
    #[serde(serialize_with = "serialize_ratio")]
    pub m2_h: Ratio<I>,
    /// `beta(H, B_{3t-2})`.
    #[serde(serialize_with = "serialize_ratio")]
    pub beta_value: Ratio<I>,
    #[serde(serialize_with = "serialize_ratio")]
    pub half: Ratio<I>,
    /// Largest `1/m2(B_t ⊕ H)` over all 2-labelings of `B_t` and `H`.
    #[serde(serialize_with = "serialize_ratio")]
    pub m2_amalgam_reciprocal: Ratio<I>,
    pub beta_exceeds_half: bool,
    pub reciprocal_at_most_half: bool,
    /// `beta > 1/m2(B_t ⊕ H)` for every labeling.
    pub strict_gap: bool,
}

/// Checks `beta(H, B_{3t-2}) > 1/2 >= 1/m2(B_t ⊕ H)`.
///
/// `B_t` is rooted at its spine and at a page edge; `H` at every edge in
/// both orientations, which covers every 2-labeling up to isomorphism.
pub fn check_corollary_gap<I: ExactInt>(h: &Graph, t: usize) -> Result<CorollaryGap<I>> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    let m2_h = m2_density::<I>(h)?.value;
    let one = Ratio::<I>::one();
    let two = ratio::<I>(2, 1);
    if !(m2_h > one && m2_h < two) {
        return Err(Error::InvalidParameter(format!(
            "m2(H) = {m2_h} is outside (1, 2)"
        )));
    }
    let big_book = make_book(3 * t - 2)?;
    let beta_value = beta_from_m2(&m2_h, big_book.order(), big_book.size());
    let book = make_book(t)?;
    let mut worst: Option<Ratio<I>> = None;
    for book_root in [(0, 1), (0, 2)] {
        let f = LabeledTwoGraph::new(book.clone(), book_root)?;
        for &(a, b) in h.edges() {
            for root in [(a, b), (b, a)] {
                let hl = LabeledTwoGraph::new(h.clone(), root)?;
                let m2 = m2_density::<I>(&amalgamate(&f, &hl))?.value;
                let reciprocal = m2.recip();
                if worst.as_ref().is_none_or(|w| reciprocal > *w) {
                    worst = Some(reciprocal);
                }
            }
        }
    }
    let m2_amalgam_reciprocal = worst.expect("H has an edge");
    let half = ratio::<I>(1, 2);
    Ok(CorollaryGap {
        t,
        beta_exceeds_half: beta_value > half,
        reciprocal_at_most_half: m2_amalgam_reciprocal <= half,
        strict_gap: beta_value > m2_amalgam_reciprocal,
        m2_h,
        beta_value,
        half,
        m2_amalgam_reciprocal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_clique, make_cycle, make_path};
    use num_bigint::BigInt;

    type Q = Ratio<i64>;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a, b)
    }

    /// Maximum over every vertex set W (|W| >= 3) and every edge subset of H[W].
    pub(crate) fn brute_force_m2(g: &Graph) -> Q {
        let n = g.order();
        let mut best: Option<Q> = None;
        for set in 0u64..(1 << n) {
            let k = set.count_ones() as i64;
            if k < 3 {
                continue;
            }
            let inside = edge_list_of(g, set);
            for sub in 0u64..(1 << inside.len()) {
                let r = q(sub.count_ones() as i64 - 1, k - 2);
                if best.is_none_or(|b| r > b) {
                    best = Some(r);
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn examples() {
        let k3 = make_clique(3).unwrap();
        assert_eq!(m2_density::<i64>(&k3).unwrap().value, q(2, 1));
        for t in 1..=6 {
            assert_eq!(m2_density::<i64>(&make_book(t).unwrap()).unwrap().value, q(2, 1));
        }
        let b1 = LabeledTwoGraph::new(make_book(1).unwrap(), (0, 1)).unwrap();
        let c5 = LabeledTwoGraph::new(make_cycle(5).unwrap(), (0, 1)).unwrap();
        let g = amalgamate(&b1, &c5);
        let report = m2_density::<i64>(&g).unwrap();
        assert_eq!(report.value, q(2, 1));
        assert_eq!(report.witness, k3);
        assert_eq!(report.witness_vertices, vec![0, 1, 2]);
        assert!(!report.two_balanced);
        assert_eq!(brute_force_m2(&g), q(2, 1));
    }

    #[test]
    fn rejects_degenerate_graphs() {
        assert!(m2_density::<i64>(&make_path(2).unwrap()).is_err());
        assert!(m2_density::<i64>(&Graph::empty(4)).is_err());
        let big = make_cycle(MAX_DENSITY_ORDER + 1).unwrap();
        assert!(matches!(m2_density::<i64>(&big), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn matchings_and_forests() {
        let one = Graph::new(4, [(0, 1)]).unwrap();
        assert_eq!(m2_density::<i64>(&one).unwrap().value, q(0, 1));
        let two = Graph::new(5, [(0, 1), (2, 3)]).unwrap();
        let r = m2_density::<i64>(&two).unwrap();
        assert_eq!(r.value, q(1, 2));
        assert_eq!(r.witness_vertices, vec![0, 1, 2, 3]);
        assert_eq!(brute_force_m2(&two), q(1, 2));
        assert_eq!(m2_density::<i64>(&make_path(5).unwrap()).unwrap().value, q(1, 1));
    }

    #[test]
    fn two_balanced_examples() {
        assert!(is_two_balanced(&make_cycle(5).unwrap()).unwrap());
        assert!(is_two_balanced(&make_book(4).unwrap()).unwrap());
        let pendant = Graph::new(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        assert!(!is_two_balanced(&pendant).unwrap());
        assert_eq!(brute_force_m2(&pendant), q(2, 1));
    }

    #[test]
    fn beta_examples() {
        let c5 = make_cycle(5).unwrap();
        let k3 = make_clique(3).unwrap();
        assert_eq!(beta::<i64>(&c5, &k3).unwrap(), q(7, 12));
        assert_eq!(beta::<i64>(&make_book(2).unwrap(), &k3).unwrap(), q(1, 2));
        // S = B_{3t-2}
        for t in 1..=4usize {
            let s = make_book(3 * t - 2).unwrap();
            let expected = (q(3 * t as i64 - 2, 1) + q(3, 4)) / q(6 * t as i64 - 3, 1);
            assert_eq!(beta::<i64>(&c5, &s).unwrap(), expected);
        }
        assert!(beta::<i64>(&c5, &make_path(2).unwrap()).is_err());
        let single = Graph::new(3, [(0, 1)]).unwrap();
        assert!(beta::<i64>(&single, &k3).is_err());
    }

    #[test]
    fn beta_decreases_in_m2() {
        let s = make_book(4).unwrap();
        let hs: Vec<Graph> = (4..=9).map(|k| make_cycle(k).unwrap()).collect();
        for a in &hs {
            for b in &hs {
                let (ma, mb) = (
                    m2_density::<i64>(a).unwrap().value,
                    m2_density::<i64>(b).unwrap().value,
                );
                let (ba, bb) = (beta::<i64>(a, &s).unwrap(), beta::<i64>(b, &s).unwrap());
                assert_eq!(ma.cmp(&mb), bb.cmp(&ba));
            }
        }
    }

    #[test]
    fn corollary_gap_examples() {
        let c5 = make_cycle(5).unwrap();
        let gap = check_corollary_gap::<i64>(&c5, 1).unwrap();
        assert_eq!(gap.beta_value, q(7, 12));
        assert_eq!(gap.m2_amalgam_reciprocal, q(1, 2));
        assert!(gap.beta_exceeds_half && gap.reciprocal_at_most_half && gap.strict_gap);

        // m2(C6) = 5/4 by brute force, so beta = (4 + 4/5)/9 = 8/15.
        let c6 = make_cycle(6).unwrap();
        assert_eq!(brute_force_m2(&c6), q(5, 4));
        let gap = check_corollary_gap::<i64>(&c6, 2).unwrap();
        assert_eq!(gap.beta_value, q(8, 15));
        assert!(gap.strict_gap);

        assert!(check_corollary_gap::<i64>(&make_clique(3).unwrap(), 1).is_err());
        assert!(check_corollary_gap::<i64>(&c5, 0).is_err());
    }

    #[test]
    fn gap_closes_at_m2_two() {
        // with 1/m2(H) = 1/2 the numerator is exactly half of 6t - 3
        for t in 1..=50i64 {
            let b = (q(3 * t - 2, 1) + q(1, 2)) / q(6 * t - 3, 1);
            assert_eq!(b, q(1, 2));
        }
    }

    #[test]
    fn hypotheses_report() {
        let opts = ArrowsOptions::default();
        let f = LabeledTwoGraph::new(make_book(2).unwrap(), (0, 1)).unwrap();
        let h = LabeledTwoGraph::new(make_cycle(5).unwrap(), (0, 1)).unwrap();
        let r = check_theorem_hypotheses(&f, &h, &make_book(4).unwrap(), &opts).unwrap();
        assert!(r.h_above_one && r.h_below_f && r.s_two_balanced);
        assert_eq!(r.s_arrows_f, ArrowsVerdict::Holds);
        assert!(r.all_hold());
        assert_eq!(r.m2_h, Ratio::new(BigInt::from(4), BigInt::from(3)));

        let k3 = LabeledTwoGraph::new(make_clique(3).unwrap(), (0, 1)).unwrap();
        let r = check_theorem_hypotheses(&k3, &k3, &make_clique(3).unwrap(), &opts).unwrap();
        assert!(!r.h_below_f);

        let c4 = LabeledTwoGraph::new(make_cycle(4).unwrap(), (0, 1)).unwrap();
        let r = check_theorem_hypotheses(&f, &c4, &make_book(4).unwrap(), &opts).unwrap();
        assert_eq!(r.m2_h, Ratio::new(BigInt::from(3), BigInt::from(2)));
        assert!(r.all_hold());
    }

    #[test]
    fn bigint_and_i64_agree() {
        let g = make_book(3).unwrap();
        let a = m2_density::<i64>(&g).unwrap().value;
        let b = m2_density::<BigInt>(&g).unwrap().value;
        assert_eq!(a.to_string(), b.to_string());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
            (3usize..=max_n).prop_flat_map(|n| {
                proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                    let mut edges = Vec::new();
                    let mut k = 0;
                    for v in 1..n {
                        for u in 0..v {
                            if bits[k] {
                                edges.push((u, v));
                            }
                            k += 1;
                        }
                    }
                    Graph::new(n, edges).unwrap()
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn matches_brute_force(g in arb_small_graph(7)) {
                prop_assume!(g.size() > 0);
                let fast = m2_density::<i64>(&g).unwrap();
                prop_assert_eq!(fast.value, brute_force_m2(&g));
                let w = &fast.witness;
                prop_assert!(w.order() >= 3);
                prop_assert_eq!(q(w.size() as i64 - 1, w.order() as i64 - 2), fast.value);
            }

            #[test]
            fn monotone_under_subgraphs(g in arb_small_graph(8), drop in any::<u64>()) {
                let sub = g.spanning_subgraph(|i| drop >> (i % 64) & 1 == 0);
                prop_assume!(sub.size() > 0);
                let full = m2_density::<i64>(&g).unwrap().value;
                let part = m2_density::<i64>(&sub).unwrap().value;
                prop_assert!(part <= full);
            }
        }
    }
}
