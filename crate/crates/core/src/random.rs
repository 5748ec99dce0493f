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

//! Random graphs, colorings and color-class assignments.
//!
//! All randomness comes from ChaCha8 seeded with a `u64`. Independent
//! streams (one per trial, restart, ...) use [`derive_seed`], which mixes
//! the master seed with a stream tag and a counter through SplitMix64, so a
//! trial's outcome depends only on its index and never on scheduling.

use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};
use crate::rainbow::{adversarial_coloring, ProperColoring};

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for item `index` of stream `stream` under `master`.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(stream)) ^ index)
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("{name} = {p} is not in [0, 1]")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GnpSample {
    pub graph: Graph,
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

/// Calls `emit(i)` for each index in `0..total` kept independently with
/// probability `p`, jumping over rejected runs with geometric skips.
fn bernoulli_indices(total: u64, p: f64, rng: &mut Rng, mut emit: impl FnMut(u64)) {
    if p <= 0.0 || total == 0 {
        return;
    }
    if p >= 1.0 {
        (0..total).for_each(emit);
        return;
    }
    let log_q = (-p).ln_1p();
    let mut i: u64 = 0;
    loop {
        let u: f64 = 1.0 - rng.gen::<f64>();
        let skip = (u.ln() / log_q).floor();
        if skip >= (total - i) as f64 {
            return;
        }
        i += skip as u64;
        emit(i);
        i += 1;
        if i >= total {
            return;
        }
    }
}

/// Lexicographic pair order `(0,1), (0,2), ..., (1,2), ...` walked forward.
struct PairCursor {
    n: usize,
    u: usize,
    row_start: u64,
}

impl PairCursor {
    fn new(n: usize) -> Self {
        PairCursor {
            n,
            u: 0,
            row_start: 0,
        }
    }

    /// Pair with linear index `k`; indices must be nondecreasing across calls.
    fn pair(&mut self, k: u64) -> Edge {
        loop {
            let row_len = (self.n - 1 - self.u) as u64;
            if k < self.row_start + row_len {
                return (self.u, self.u + 1 + (k - self.row_start) as usize);
            }
            self.row_start += row_len;
            self.u += 1;
        }
    }
}

fn gnp_edges(n: usize, p: f64, rng: &mut Rng) -> Vec<Edge> {
    let total = (n as u64) * (n.saturating_sub(1) as u64) / 2;
    let mut cursor = PairCursor::new(n);
    let mut edges = Vec::new();
    bernoulli_indices(total, p, rng, |k| edges.push(cursor.pair(k)));
    edges
}

/// Binomial random graph on `n` vertices.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<GnpSample> {
    check_probability("p", p)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let edges = gnp_edges(n, p, &mut rng);
    Ok(GnpSample {
        graph: Graph::from_sorted_edges(n, edges),
        n,
        p,
        seed,
    })
}

/// One uniform draw per vertex pair, shared across edge probabilities:
/// `graph(p)` keeps the pairs whose draw is below `p`, so samples are
/// nested in `p` for a fixed seed.
#[derive(Clone, Debug)]
pub struct CoupledGnp {
    n: usize,
    draws: Vec<f64>,
}

impl CoupledGnp {
    pub fn new(n: usize, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let total = n * n.saturating_sub(1) / 2;
        let draws = (0..total).map(|_| rng.gen::<f64>()).collect();
        CoupledGnp { n, draws }
    }

    pub fn graph(&self, p: f64) -> Result<Graph> {
        check_probability("p", p)?;
        let mut cursor = PairCursor::new(self.n);
        let edges = self
            .draws
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d < p)
            .map(|(k, _)| cursor.pair(k as u64))
            .collect();
        Ok(Graph::from_sorted_edges(self.n, edges))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PartRole {
    /// `V_i`, for the vertices of a pattern.
    V(usize),
    /// `U_i`, auxiliary parts.
    U(usize),
}

/// Equitable partition of `0..n` into consecutive blocks with roles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionLayout {
    pub parts: Vec<Vec<Vertex>>,
    pub roles: Vec<PartRole>,
}

impl PartitionLayout {
    /// Splits `0..n` into `roles.len()` blocks whose sizes differ by at most one.
    pub fn equitable(n: usize, roles: Vec<PartRole>) -> Result<Self> {
        let k = roles.len();
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!(
                "cannot split {n} vertices into {k} nonempty parts"
            )));
        }
        let mut parts = Vec::with_capacity(k);
        let mut start = 0;
        for i in 0..k {
            let size = n / k + usize::from(i < n % k);
            parts.push((start..start + size).collect());
            start += size;
        }
        Ok(PartitionLayout { parts, roles })
    }

    /// Parts `V_1..V_s` followed by `U_3..U_h`.
    pub fn with_auxiliary(n: usize, s: usize, h: usize) -> Result<Self> {
        let mut roles: Vec<PartRole> = (1..=s).map(PartRole::V).collect();
        roles.extend((3..=h).map(PartRole::U));
        Self::equitable(n, roles)
    }

    pub fn order(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    pub fn part(&self, role: PartRole) -> Option<&[Vertex]> {
        self.roles
            .iter()
            .position(|&r| r == role)
            .map(|i| self.parts[i].as_slice())
    }

    /// Sorted union of the `V` parts.
    pub fn v_vertices(&self) -> Vec<Vertex> {
        let mut vs: Vec<Vertex> = self
            .parts
            .iter()
            .zip(&self.roles)
            .filter(|(_, r)| matches!(r, PartRole::V(_)))
            .flat_map(|(p, _)| p.iter().copied())
            .collect();
        vs.sort_unstable();
        vs
    }

    fn validate(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        for &v in self.parts.iter().flatten() {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidParameter(format!(
                    "layout vertex {v} is out of range or repeated"
                )));
            }
        }
        if self.parts.len() != self.roles.len() {
            return Err(Error::InvalidParameter("one role per part is required".into()));
        }
        Ok(())
    }
}

/// Union of two independent layers: pairs with both ends in the `V` parts
/// with probability `p`, and every pair with probability `q_prime`. A pair
/// hit by both layers is one edge.
pub fn sample_two_layer(
    n: usize,
    p: f64,
    q_prime: f64,
    layout: &PartitionLayout,
    seed: u64,
) -> Result<GnpSample> {
    check_probability("p", p)?;
    check_probability("q'", q_prime)?;
    if q_prime > p {
        return Err(Error::InvalidParameter(format!("q' = {q_prime} exceeds p = {p}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    layout.validate(n)?;
    let mut inner_rng = rng_from_seed(derive_seed(seed, 1, 0));
    let mut outer_rng = rng_from_seed(derive_seed(seed, 2, 0));
    let inside = layout.v_vertices();
    let mut edges: Vec<Edge> = gnp_edges(inside.len(), p, &mut inner_rng)
        .into_iter()
        .map(|(a, b)| (inside[a], inside[b]))
        .collect();
    edges.extend(gnp_edges(n, q_prime, &mut outer_rng));
    edges.sort_unstable();
    edges.dedup();
    Ok(GnpSample {
        graph: Graph::from_sorted_edges(n, edges),
        n,
        p,
        seed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColoringStrategy {
    /// Random edge order, smallest color free at both ends: at most `2Δ - 1` colors.
    Greedy,
    Distinct,
    /// Heuristic: the rainbow hunter's best coloring against `target`.
    Adversarial { target: Graph, restarts: usize },
}

pub fn proper_color(g: &Graph, strategy: &ColoringStrategy, seed: u64) -> ProperColoring {
    match strategy {
        ColoringStrategy::Distinct => ProperColoring::distinct(g),
        ColoringStrategy::Greedy => {
            let mut rng = rng_from_seed(seed);
            let mut order: Vec<usize> = (0..g.size()).collect();
            order.shuffle(&mut rng);
            let mut at_vertex: Vec<Vec<usize>> = vec![Vec::new(); g.order()];
            let mut colors = vec![0; g.size()];
            for e in order {
                let (u, v) = g.edges()[e];
                let c = (0..)
                    .find(|c| !at_vertex[u].contains(c) && !at_vertex[v].contains(c))
                    .expect("unbounded range");
                colors[e] = c;
                at_vertex[u].push(c);
                at_vertex[v].push(c);
            }
            ProperColoring::new(g, colors).expect("greedy coloring is proper")
        }
        ColoringStrategy::Adversarial { target, restarts } => {
            adversarial_coloring(g, target, *restarts, seed).coloring
        }
    }
}

/// Where colors are sent: `T` anonymous classes, or the edges of a pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassSpec {
    Count(usize),
    Edges(Vec<Edge>),
}

impl ClassSpec {
    pub fn len(&self) -> usize {
        match self {
            ClassSpec::Count(t) => *t,
            ClassSpec::Edges(es) => es.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `sigma[c]` is the class of color `c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorAssignment {
    pub sigma: Vec<usize>,
    pub classes: ClassSpec,
}

impl ColorAssignment {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Class of edge `e` under coloring `c`.
    pub fn class_of(&self, c: &ProperColoring, e: usize) -> usize {
        self.sigma[c.color(e)]
    }
}

/// Sends each color of `c` to a class chosen independently and uniformly.
pub fn assign_colors(c: &ProperColoring, classes: ClassSpec, seed: u64) -> Result<ColorAssignment> {
    if classes.is_empty() {
        return Err(Error::InvalidParameter("class set is empty".into()));
    }
    let t = classes.len();
    let mut rng = rng_from_seed(seed);
    let sigma = (0..c.num_colors()).map(|_| rng.gen_range(0..t)).collect();
    Ok(ColorAssignment { sigma, classes })
}

/// Spanning subgraph `G_t` of the edges whose color lands in class `t`.
pub fn color_class_subgraph(
    g: &Graph,
    c: &ProperColoring,
    a: &ColorAssignment,
    t: usize,
) -> Result<Graph> {
    if t >= a.class_count() {
        return Err(Error::InvalidParameter(format!(
            "class {t} out of range for {} classes",
            a.class_count()
        )));
    }
    if c.len() != g.size() || a.sigma.len() != c.num_colors() {
        return Err(Error::ColoringMismatch("graph, coloring and assignment disagree".into()));
    }
    Ok(g.spanning_subgraph(|e| a.class_of(c, e) == t))
}

/// All class subgraphs `G_0, ..., G_{T-1}`.
pub fn color_classes(g: &Graph, c: &ProperColoring, a: &ColorAssignment) -> Result<Vec<Graph>> {
    (0..a.class_count())
        .map(|t| color_class_subgraph(g, c, a, t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_clique, make_cycle};
    use crate::rainbow::check_proper;

    #[test]
    fn extreme_probabilities() {
        assert_eq!(sample_gnp(7, 0.0, 1).unwrap().graph.size(), 0);
        assert_eq!(sample_gnp(7, 1.0, 1).unwrap().graph, make_clique(7).unwrap());
        assert!(sample_gnp(7, 1.5, 1).is_err());
        assert!(sample_gnp(7, -0.1, 1).is_err());
        assert!(sample_gnp(0, 0.5, 1).is_err());
        assert_eq!(sample_gnp(1, 0.5, 1).unwrap().graph.size(), 0);
    }

    #[test]
    fn edge_counts_within_five_sigma() {
        let (n, p) = (1000usize, 0.01);
        let pairs = (n * (n - 1) / 2) as f64;
        let mean = pairs * p;
        let sd = (pairs * p * (1.0 - p)).sqrt();
        for seed in 0..20 {
            let m = sample_gnp(n, p, seed).unwrap().graph.size() as f64;
            assert!((m - mean).abs() <= 5.0 * sd, "seed {seed}: {m}");
        }
    }

    #[test]
    fn pair_indicators_pass_chi_square() {
        let (n, p, trials) = (10usize, 0.3, 4000u64);
        let mut hits = vec![vec![0u64; n]; n];
        for seed in 0..trials {
            for &(u, v) in sample_gnp(n, p, derive_seed(99, 0, seed)).unwrap().graph.edges() {
                hits[u][v] += 1;
            }
        }
        let expected = trials as f64 * p;
        let var = trials as f64 * p * (1.0 - p);
        let mut chi = 0.0;
        for u in 0..n {
            for v in u + 1..n {
                chi += (hits[u][v] as f64 - expected).powi(2) / var;
            }
        }
        // 45 degrees of freedom; mean 45, sd about 9.5
        assert!(chi < 45.0 + 5.0 * 90f64.sqrt(), "chi-square {chi}");
    }

    #[test]
    fn samples_are_reproducible() {
        let a = sample_gnp(60, 0.2, 5).unwrap();
        assert_eq!(a, sample_gnp(60, 0.2, 5).unwrap());
        assert_ne!(a.graph, sample_gnp(60, 0.2, 6).unwrap().graph);
    }

    #[test]
    fn coupled_samples_are_nested() {
        let coupled = CoupledGnp::new(40, 3);
        let small = coupled.graph(0.1).unwrap();
        let large = coupled.graph(0.3).unwrap();
        assert!(small.edges().iter().all(|&(u, v)| large.has_edge(u, v)));
        assert_eq!(coupled.graph(1.0).unwrap(), make_clique(40).unwrap());
    }

    #[test]
    fn two_layer_model() {
        let layout = PartitionLayout::with_auxiliary(30, 3, 4).unwrap();
        assert_eq!(layout.parts.iter().map(Vec::len).collect::<Vec<_>>(), vec![6, 6, 6, 6, 6]);
        assert!(sample_two_layer(30, 0.2, 0.3, &layout, 1).is_err());

        let inside = layout.v_vertices();
        let only_p = sample_two_layer(30, 0.5, 0.0, &layout, 1).unwrap().graph;
        assert!(only_p
            .edges()
            .iter()
            .all(|&(u, v)| inside.contains(&u) && inside.contains(&v)));

        // inside pairs: 1 - (1 - p)(1 - q'); outside pairs: q'
        let (p, q) = (0.3, 0.2);
        let trials = 3000;
        let (mut in_hits, mut out_hits) = (0u64, 0u64);
        for seed in 0..trials {
            let g = sample_two_layer(30, p, q, &layout, seed).unwrap().graph;
            in_hits += g.has_edge(0, 7) as u64;
            out_hits += g.has_edge(0, 25) as u64;
        }
        let f_in = in_hits as f64 / trials as f64;
        let f_out = out_hits as f64 / trials as f64;
        let want_in = 1.0 - (1.0 - p) * (1.0 - q);
        assert!((f_in - want_in).abs() < 5.0 * (want_in * (1.0 - want_in) / trials as f64).sqrt());
        assert!((f_out - q).abs() < 5.0 * (q * (1.0 - q) / trials as f64).sqrt());
    }

    #[test]
    fn greedy_bounds() {
        let c4 = make_cycle(4).unwrap();
        let c = proper_color(&c4, &ColoringStrategy::Greedy, 0);
        assert!(c.num_colors() <= 3);
        check_proper(&c4, c.colors()).unwrap();
        for n in 3..12 {
            let kn = make_clique(n).unwrap();
            for seed in 0..5 {
                let c = proper_color(&kn, &ColoringStrategy::Greedy, seed);
                assert!(c.num_colors() <= 2 * n - 3);
            }
        }
        let g = sample_gnp(50, 0.2, 2).unwrap().graph;
        let d = proper_color(&g, &ColoringStrategy::Distinct, 0);
        assert_eq!(d.num_colors(), g.size());
    }

    #[test]
    fn assignments_and_classes() {
        let g = sample_gnp(80, 0.3, 4).unwrap().graph;
        let c = proper_color(&g, &ColoringStrategy::Greedy, 4);
        assert!(assign_colors(&c, ClassSpec::Count(0), 1).is_err());

        let one = assign_colors(&c, ClassSpec::Count(1), 1).unwrap();
        assert!(one.sigma.iter().all(|&s| s == 0));
        assert_eq!(color_class_subgraph(&g, &c, &one, 0).unwrap(), g);
        assert!(color_class_subgraph(&g, &c, &one, 1).is_err());

        let d = ProperColoring::distinct(&g);
        let two = assign_colors(&d, ClassSpec::Count(2), 9).unwrap();
        let zeros = two.sigma.iter().filter(|&&s| s == 0).count() as f64;
        let k = two.sigma.len() as f64;
        assert!((zeros - k / 2.0).abs() <= 5.0 * (k / 4.0).sqrt());

        let tri = ClassSpec::Edges(make_clique(3).unwrap().edges().to_vec());
        let a = assign_colors(&c, tri, 2).unwrap();
        let parts = color_classes(&g, &c, &a).unwrap();
        assert_eq!(parts.len(), 3);
        let mut union: Vec<Edge> = parts.iter().flat_map(|p| p.edges().to_vec()).collect();
        assert_eq!(union.len(), g.size());
        union.sort_unstable();
        assert_eq!(union, g.edges());
        for (t, part) in parts.iter().enumerate() {
            for &(u, v) in part.edges() {
                let e = g.edge_index(u, v).unwrap();
                assert_eq!(a.class_of(&c, e), t);
            }
        }
    }

    #[test]
    fn one_color_class_moves_degrees_by_at_most_one() {
        let g = sample_gnp(40, 0.4, 8).unwrap().graph;
        let c = proper_color(&g, &ColoringStrategy::Greedy, 8);
        let a = assign_colors(&c, ClassSpec::Count(3), 8).unwrap();
        let g0 = color_class_subgraph(&g, &c, &a, 0).unwrap();
        for color in 0..c.num_colors() {
            let mut moved = a.clone();
            moved.sigma[color] = if a.sigma[color] == 0 { 1 } else { 0 };
            let h0 = color_class_subgraph(&g, &c, &moved, 0).unwrap();
            for v in 0..g.order() {
                assert!(g0.degree(v).abs_diff(h0.degree(v)) <= 1);
            }
        }
    }
}
