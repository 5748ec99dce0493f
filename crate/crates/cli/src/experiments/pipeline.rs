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

//! One run of the amalgamation pipeline per trial.
//!
//! Layout: `0..n` is split equitably into `V_1..V_{v(S)}` (vertex `i` of
//! `S` owns `V_{i+1}`) and `U_3..U_{v(H)}`. The root of `H` is glued to the
//! root of `S`, so its two root vertices own the root parts of `S`, and the
//! other vertices of `H` take the `U` parts in increasing order.
//!
//! Each trial samples the two-layer graph, colors it properly, sends the
//! colors to classes, and for every class `G_k` reports
//!
//! * degrees in the bipartite graph `G_k[P(x), P(y)]` between the parts of
//!   the `H`-edge `xy` the class belongs to, against their expected value;
//! * the weighted circuit sum of that bipartite graph and the ratio of
//!   circuits to `2l` times cycles;
//! * `Y` (isolated transversal copies of `S`) in the root class and in `G`.
//!
//! It also looks for a rainbow `F ⊕ H` in `G` directly.

use antiramsey_core::census::{transversal_counts, TransversalOptions};
use antiramsey_core::density::check_theorem_hypotheses;
use antiramsey_core::diagnostics::{circuit_weight_sum, count_circuits, count_cycles};
use antiramsey_core::graph::amalgamate;
use antiramsey_core::rainbow::{has_rainbow_copy, ArrowsOptions};
use antiramsey_core::random::{
    assign_colors, color_classes, derive_seed, proper_color, sample_two_layer, ClassSpec, PartitionLayout,
};
use antiramsey_core::{Graph, Real};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ClassMode, PipelineConfig};
use crate::error::{config_error, CliError, CliResult};
use crate::report::{Record, SCHEMA_VERSION};

pub const MAX_PIPELINE_ORDER: usize = 1000;

/// Budget for deciding `S ->rb F` in the hypotheses summary.
const HYPOTHESES_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineRow {
    pub trial: u64,
    pub seed: u64,
    pub vertices: usize,
    pub edges: usize,
    pub colors: usize,
    pub q_prime: f64,
    pub class: usize,
    /// The `H`-edge `x-y` of the class, empty for anonymous classes.
    pub class_edge: String,
    pub class_edges: usize,
    pub bipartite_edges: usize,
    pub degree_reference: f64,
    pub degree_fraction: f64,
    pub circuit_weight: f64,
    pub circuit_cycle_ratio: Option<f64>,
    pub y_root: u64,
    pub y_total: u64,
    pub alpha_bound: f64,
    pub rainbow_found: Option<bool>,
    pub strategy: String,
    pub schema_version: u32,
}

impl Record for PipelineRow {
    const KIND: &'static str = "pipeline";
    const COLUMNS: &'static [&'static str] = &[
        "trial",
        "seed",
        "vertices",
        "edges",
        "colors",
        "q_prime",
        "class",
        "class_edge",
        "class_edges",
        "bipartite_edges",
        "degree_reference",
        "degree_fraction",
        "circuit_weight",
        "circuit_cycle_ratio",
        "y_root",
        "y_total",
        "alpha_bound",
        "rainbow_found",
        "strategy",
        "schema_version",
    ];
}

#[derive(Clone, Debug)]
pub struct PipelineOutcome {
    pub rows: Vec<PipelineRow>,
    pub details: serde_json::Value,
}

/// `q = 6 e(S) n^{v(S)-2} p^{e(S)}`.
pub fn derived_q(n: usize, p: f64, s: &Graph) -> f64 {
    6.0 * s.size() as f64 * (n as f64).powi(s.order() as i32 - 2) * p.powi(s.size() as i32)
}

/// Cross edges of `g` between `a` and `b`, on vertices `a ++ b`.
fn bipartite_between(g: &Graph, a: &[usize], b: &[usize]) -> Graph {
    let mut local = vec![usize::MAX; g.order()];
    for (i, &v) in a.iter().chain(b).enumerate() {
        local[v] = i;
    }
    let in_a = |v: usize| local[v] < a.len();
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX && in_a(u) != in_a(v))
        .map(|&(u, v)| (local[u], local[v]))
        .collect();
    Graph::new(a.len() + b.len(), edges).expect("relabelled edges are valid")
}

fn degree_fraction(g: &Graph, reference: f64, delta: f64) -> f64 {
    if g.order() == 0 || reference <= 0.0 {
        return 0.0;
    }
    let within = (0..g.order())
        .filter(|&v| (g.degree(v) as f64 - reference).abs() <= delta * reference)
        .count();
    within as f64 / g.order() as f64
}

struct ClassView {
    label: String,
    graph: Graph,
    reference: f64,
}

pub fn run_pipeline(config: &PipelineConfig, seed: u64) -> CliResult<PipelineOutcome> {
    config.validate()?;
    let s_lab = config.s.build_labeled(0)?;
    let f_lab = config.f.build_labeled(0)?;
    let h_lab = config.h.build_labeled(0)?;
    let (s, h) = (s_lab.graph(), h_lab.graph());
    let n = config.n;
    if n > MAX_PIPELINE_ORDER {
        return Err(CliError::Infeasible(format!(
            "n = {n} exceeds {MAX_PIPELINE_ORDER}; copy enumeration would not finish, use a smaller n"
        )));
    }
    let parts_needed = s.order() + h.order() - 2;
    if n < parts_needed {
        return Err(config_error(format!("n = {n} is below the {parts_needed} parts of the layout")));
    }
    let q = derived_q(n, config.p, s);
    let q_prime = config.q_prime.unwrap_or(h.size() as f64 * q);
    if q_prime > config.p {
        return Err(config_error(format!(
            "q' = {q_prime} exceeds p = {}; lower p or set q_prime",
            config.p
        )));
    }
    let layout = PartitionLayout::with_auxiliary(n, s.order(), h.order())?;

    // part index owned by each vertex of H
    let (sa, sb) = s_lab.root();
    let (ha, hb) = h_lab.root();
    let mut part_of_h = vec![usize::MAX; h.order()];
    part_of_h[ha] = sa;
    part_of_h[hb] = sb;
    let mut next = s.order();
    for slot in part_of_h.iter_mut().filter(|p| **p == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let inside = |i: usize, j: usize| i < s.order() && j < s.order();
    let pair_probability = |i: usize, j: usize| {
        if inside(i, j) {
            1.0 - (1.0 - config.p) * (1.0 - q_prime)
        } else {
            q_prime
        }
    };

    let amalgam = amalgamate(&f_lab, &h_lab);
    let s_parts: Vec<Vec<usize>> = layout.parts[..s.order()].to_vec();
    let root_class = h.edge_index(ha, hb).expect("root is an edge");
    let strategy = config.strategy.to_strategy(&amalgam);
    let alpha_bound = config.alpha * (n as f64).powi(s.order() as i32) * config.p.powi(s.size() as i32);
    let census_options = TransversalOptions {
        labeled: true,
        keep_copies: false,
    };

    let per_trial: Vec<Vec<PipelineRow>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| -> CliResult<Vec<PipelineRow>> {
            let trial_seed = derive_seed(seed, 2, trial);
            let g = sample_two_layer(n, config.p, q_prime, &layout, derive_seed(trial_seed, 0, 0))?.graph;
            let c = proper_color(&g, &strategy, derive_seed(trial_seed, 1, 0));
            let spec = match config.classes {
                ClassMode::Edges => ClassSpec::Edges(h.edges().to_vec()),
                ClassMode::Count(t) => ClassSpec::Count(t),
            };
            let assignment = assign_colors(&c, spec, derive_seed(trial_seed, 2, 0))?;
            let classes = color_classes(&g, &c, &assignment)?;
            assert_eq!(
                classes.iter().map(Graph::size).sum::<usize>(),
                g.size(),
                "class subgraphs must partition E(G)"
            );

            let views: Vec<ClassView> = match config.classes {
                ClassMode::Edges => h
                    .edges()
                    .iter()
                    .zip(&classes)
                    .map(|(&(x, y), gk)| {
                        let (px, py) = (part_of_h[x], part_of_h[y]);
                        let (a, b) = (&layout.parts[px], &layout.parts[py]);
                        let mean_part = (a.len() + b.len()) as f64 / 2.0;
                        ClassView {
                            label: format!("{x}-{y}"),
                            graph: bipartite_between(gk, a, b),
                            reference: pair_probability(px, py) * mean_part / h.size() as f64,
                        }
                    })
                    .collect(),
                ClassMode::Count(t) => classes
                    .iter()
                    .map(|gk| ClassView {
                        label: String::new(),
                        graph: gk.clone(),
                        reference: 2.0 * g.size() as f64 / (n as f64 * t as f64),
                    })
                    .collect(),
            };

            let y_class = match config.classes {
                ClassMode::Edges => root_class,
                ClassMode::Count(_) => 0,
            };
            let y_root = transversal_counts(&classes[y_class], s, &s_parts, census_options)?.y;
            let y_total = transversal_counts(&g, s, &s_parts, census_options)?.y;
            let rainbow_found = if config.search_rainbow {
                Some(has_rainbow_copy(&g, &c, &amalgam)?.is_some())
            } else {
                None
            };

            let ell = config.circuit_length;
            views
                .into_iter()
                .enumerate()
                .map(|(k, view)| {
                    let b = &view.graph;
                    let weight = circuit_weight_sum::<Real>(b, ell)?.sum;
                    let ratio = if ell >= 3 {
                        let cycles = count_cycles(b, ell)?;
                        let circuits = count_circuits(b, ell)?;
                        (cycles > 0).then(|| circuits as f64 / (2.0 * ell as f64 * cycles as f64))
                    } else {
                        None
                    };
                    Ok(PipelineRow {
                        trial,
                        seed: trial_seed,
                        vertices: n,
                        edges: g.size(),
                        colors: c.num_colors(),
                        q_prime,
                        class: k,
                        class_edge: view.label,
                        class_edges: classes[k].size(),
                        bipartite_edges: b.size(),
                        degree_reference: view.reference,
                        degree_fraction: degree_fraction(b, view.reference, config.delta),
                        circuit_weight: weight,
                        circuit_cycle_ratio: ratio,
                        y_root,
                        y_total,
                        alpha_bound,
                        rainbow_found,
                        strategy: config.strategy.name().to_string(),
                        schema_version: SCHEMA_VERSION,
                    })
                })
                .collect()
        })
        .collect::<CliResult<_>>()?;

    let arrows = ArrowsOptions {
        budget: Some(HYPOTHESES_BUDGET),
        ..ArrowsOptions::default()
    };
    let hypotheses = check_theorem_hypotheses(&f_lab, &h_lab, s, &arrows)?;
    let details = serde_json::json!({
        "q": q,
        "q_prime": q_prime,
        "part_sizes": layout.parts.iter().map(Vec::len).collect::<Vec<_>>(),
        "amalgam_graph6": antiramsey_core::graph::io::to_graph6(&amalgam),
        "hypotheses": hypotheses,
    });
    Ok(PipelineOutcome {
        rows: per_trial.into_iter().flatten().collect(),
        details,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::StrategySpec;

    fn config() -> PipelineConfig {
        PipelineConfig {
            n: 40,
            p: 0.4,
            s: "K3".parse().unwrap(),
            f: "K3".parse().unwrap(),
            h: "C5".parse().unwrap(),
            alpha: 0.001,
            q_prime: Some(0.1),
            strategy: StrategySpec::Greedy,
            classes: ClassMode::Edges,
            trials: 3,
            circuit_length: 4,
            delta: 0.5,
            search_rainbow: true,
        }
    }

    #[test]
    fn rows_are_well_formed() {
        let out = run_pipeline(&config(), 11).unwrap();
        assert_eq!(out.rows.len(), 3 * 5);
        for trial in out.rows.chunks(5) {
            let total: usize = trial.iter().map(|r| r.class_edges).sum();
            assert_eq!(total, trial[0].edges);
            assert!(trial.iter().all(|r| r.y_root <= r.y_total));
            assert_eq!(trial[0].class_edge, "0-1");
        }
        assert_eq!(out.details["hypotheses"]["s_arrows_f"], "holds");
    }

    #[test]
    fn anonymous_classes() {
        let mut c = config();
        c.classes = ClassMode::Count(3);
        c.search_rainbow = false;
        let out = run_pipeline(&c, 2).unwrap();
        assert_eq!(out.rows.len(), 9);
        assert!(out.rows.iter().all(|r| r.rainbow_found.is_none() && r.class_edge.is_empty()));
    }

    #[test]
    fn derived_q_prime_may_exceed_p() {
        let mut c = config();
        c.q_prime = None;
        assert!(matches!(run_pipeline(&c, 0), Err(CliError::Config(_))));
        // q' = 5 * 18 * 40 * p^3 stays below p once p^2 <= 1/3600
        c.p = 0.015;
        let k3 = antiramsey_core::graph::make_clique(3).unwrap();
        assert!((derived_q(40, 0.015, &k3) - 18.0 * 40.0 * 0.015f64.powi(3)).abs() < 1e-12);
        assert!(run_pipeline(&c, 0).is_ok());
    }

    #[test]
    fn bipartite_view() {
        let k4 = antiramsey_core::graph::make_clique(4).unwrap();
        let b = bipartite_between(&k4, &[0, 1], &[2, 3]);
        assert_eq!(b.size(), 4);
        assert!(!b.has_edge(0, 1));
    }
}
