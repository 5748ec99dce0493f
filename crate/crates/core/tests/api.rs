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


//! End-to-end use of the public API across modules.

use antiramsey_core::density::{beta, m2_density};
use antiramsey_core::diagnostics::{circuit_weight_sum, count_circuits, count_cycles};
use antiramsey_core::graph::io::{from_graph6, to_graph6};
use antiramsey_core::graph::{make_book, make_clique, make_cycle, make_path};
use antiramsey_core::rainbow::{arrows_rainbow, check_proper, has_rainbow_copy, ArrowsOptions, ArrowsVerdict};
use antiramsey_core::random::{
    assign_colors, color_classes, derive_seed, proper_color, sample_gnp, ClassSpec, ColoringStrategy, CoupledGnp,
};
use antiramsey_core::{BigInt, DensityReport, Graph, Rational};
use num_rational::Ratio;

#[test]
fn families_survive_graph6() {
    let graphs = [
        make_book(3).unwrap(),
        make_cycle(9).unwrap(),
        make_clique(7).unwrap(),
        make_path(5).unwrap(),
        sample_gnp(40, 0.3, 1).unwrap().graph,
    ];
    for g in graphs {
        assert_eq!(from_graph6(&to_graph6(&g)).unwrap(), g);
    }
}

#[test]
fn density_agrees_across_integer_backends() {
    for g in [make_book(4).unwrap(), make_cycle(6).unwrap(), make_clique(5).unwrap()] {
        let big: DensityReport = m2_density(&g).unwrap();
        let small = m2_density::<i64>(&g).unwrap();
        let (n, d) = (small.value.numer(), small.value.denom());
        assert_eq!(big.value, Rational::new(BigInt::from(*n), BigInt::from(*d)));
    }
    assert_eq!(
        beta::<i64>(&make_cycle(6).unwrap(), &make_book(4).unwrap()).unwrap(),
        Ratio::new(8, 15)
    );
}

#[test]
fn sampled_colorings_are_proper_and_classes_partition_the_edges() {
    for i in 0..5 {
        let g = sample_gnp(60, 0.2, derive_seed(3, 0, i)).unwrap().graph;
        let c = proper_color(&g, &ColoringStrategy::Greedy, derive_seed(3, 1, i));
        check_proper(&g, c.colors()).unwrap();
        assert!(c.num_colors() <= (2 * g.max_degree()).saturating_sub(1).max(1));
        let a = assign_colors(&c, ClassSpec::Count(4), derive_seed(3, 2, i)).unwrap();
        let classes = color_classes(&g, &c, &a).unwrap();
        assert_eq!(classes.iter().map(Graph::size).sum::<usize>(), g.size());
        let mut all: Vec<_> = classes.iter().flat_map(|h| h.edges().to_vec()).collect();
        all.sort_unstable();
        assert_eq!(all, g.edges());
    }
}

#[test]
fn coupled_samples_are_nested() {
    let coupled = CoupledGnp::new(50, 11);
    let ps = [0.05, 0.1, 0.3, 0.6];
    let graphs: Vec<Graph> = ps.iter().map(|&p| coupled.graph(p).unwrap()).collect();
    for w in graphs.windows(2) {
        assert!(w[0].edges().iter().all(|&(u, v)| w[1].has_edge(u, v)));
    }
}

#[test]
fn rainbow_search_and_arrows_agree_on_small_hosts() {
    let k3 = make_clique(3).unwrap();
    let distinct = proper_color(&make_clique(5).unwrap(), &ColoringStrategy::Distinct, 0);
    assert!(has_rainbow_copy(&make_clique(5).unwrap(), &distinct, &k3).unwrap().is_some());
    // a proper coloring of a triangle uses three colors
    let r = arrows_rainbow(&k3, &k3, &ArrowsOptions::default());
    assert_eq!(r.verdict, ArrowsVerdict::Holds);
    let r = arrows_rainbow(&make_book(2).unwrap(), &make_book(2).unwrap(), &ArrowsOptions::default());
    assert_eq!(r.verdict, ArrowsVerdict::Fails);
    let c = r.counterexample.unwrap();
    assert!(has_rainbow_copy(&make_book(2).unwrap(), &c, &make_book(2).unwrap()).unwrap().is_none());
}

#[test]
fn walk_counts_on_cycles() {
    for k in 3..=9 {
        let c = make_cycle(k).unwrap();
        assert_eq!(count_cycles(&c, k).unwrap(), 1);
        // tr(A^k) on C_k: 2k rotations of the cycle plus backtracking walks
        assert!(count_circuits(&c, k).unwrap() >= 2 * k as u128);
        // 2k closed 2-walks, each weighted 1/4
        let w = circuit_weight_sum::<f32>(&c, 2).unwrap().sum;
        assert!((w - k as f32 / 2.0).abs() < 1e-5);
    }
}
