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

//! Pseudo-randomness checks: pair densities, regularity, upper uniformity,
//! discrepancy, circuit weights, cycle and path counts, degree spread.
//!
//! Subset-quantified properties are decided exactly only below fixed size
//! limits; past them the call fails with [`Error::TooLarge`]. Sampled modes
//! probe random subsets, so a "holds" from them only means no violation
//! was found.

mod disc;
mod pairs;
mod walks;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::num::RealScalar;

pub use disc::{check_disc, disc_discrepancy, DiscReport, MAX_DISC_ORDER};
pub use pairs::{
    check_regular_pair, check_upper_uniform, pair_density, PairDensity, MAX_REGULARITY_ORDER,
    MAX_UPPER_UNIFORM_ORDER,
};
pub use walks::{
    check_circuit_property, circuit_weight_sum, count_circuits, count_color_tied_paths,
    count_cycles, count_non_rainbow_cycles, count_paths_between, count_rainbow_cycles,
    cycle_color_census, CircuitCheck, CircuitWeight, CycleCensus,
};

/// How a subset-quantified check is run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled { probes: u64, seed: u64 },
}

/// How a reported value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Method {
    Exact,
    /// Not a certificate; `std_error` is present for Monte Carlo estimates.
    Sampled { samples: u64, std_error: Option<f64> },
}

/// A pair of vertex sets breaking a property, with the offending value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation<T> {
    pub u_set: Vec<Vertex>,
    pub v_set: Vec<Vertex>,
    pub value: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome<T> {
    pub holds: bool,
    pub method: Method,
    pub violation: Option<Violation<T>>,
}

impl<T> CheckOutcome<T> {
    fn from_search(method: Method, violation: Option<Violation<T>>) -> Self {
        CheckOutcome {
            holds: violation.is_none(),
            method,
            violation,
        }
    }
}

/// Smallest `k` in `0..=n` with `k >= fraction * n`, at least 1.
pub(crate) fn min_part_size<T: RealScalar>(fraction: T, n: usize) -> usize {
    let target = fraction * T::from_usize_lossy(n);
    (1..=n)
        .find(|&k| T::from_usize_lossy(k) >= target)
        .unwrap_or(n + 1)
}

pub(crate) fn check_vertices(g: &Graph, set: &[Vertex], what: &str) -> Result<()> {
    if let Some(&v) = set.iter().find(|&&v| v >= g.order()) {
        return Err(Error::InvalidParameter(format!("{what} contains vertex {v} outside the graph")));
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameter(format!("{what} repeats a vertex")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeConcentration<T> {
    pub reference: T,
    pub delta: T,
    pub within: usize,
    pub vertices: usize,
    pub fraction: T,
    pub min_degree: usize,
    pub max_degree: usize,
}

/// Share of vertices whose degree lies in `(1 ± delta) * reference`.
pub fn degree_concentration_report<T: RealScalar>(
    g: &Graph,
    reference: T,
    delta: T,
) -> Result<DegreeConcentration<T>> {
    if reference <= T::zero() || delta < T::zero() {
        return Err(Error::InvalidParameter(
            "reference must be positive and delta nonnegative".into(),
        ));
    }
    let within = (0..g.order())
        .filter(|&v| (T::from_usize_lossy(g.degree(v)) - reference).abs() <= delta * reference)
        .count();
    let degrees = g.degrees();
    Ok(DegreeConcentration {
        reference,
        delta,
        within,
        vertices: g.order(),
        fraction: if g.order() == 0 {
            T::zero()
        } else {
            T::from_usize_lossy(within) / T::from_usize_lossy(g.order())
        },
        min_degree: degrees.iter().copied().min().unwrap_or(0),
        max_degree: degrees.iter().copied().max().unwrap_or(0),
    })
}

/// One line of a [`DiagnosticsReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticEntry {
    pub name: String,
    pub parameters: BTreeMap<String, f64>,
    pub estimate: f64,
    pub verdict: Option<bool>,
    #[serde(flatten)]
    pub method: Method,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub entries: Vec<DiagnosticEntry>,
}

impl DiagnosticsReport {
    pub fn push_exact(
        &mut self,
        name: &str,
        parameters: &[(&str, f64)],
        estimate: f64,
        verdict: Option<bool>,
    ) {
        self.push(name, parameters, estimate, verdict, Method::Exact);
    }

    pub fn push_sampled(
        &mut self,
        name: &str,
        parameters: &[(&str, f64)],
        estimate: f64,
        verdict: Option<bool>,
        samples: u64,
        std_error: Option<f64>,
    ) {
        let method = Method::Sampled { samples, std_error };
        self.push(name, parameters, estimate, verdict, method);
    }

    fn push(
        &mut self,
        name: &str,
        parameters: &[(&str, f64)],
        estimate: f64,
        verdict: Option<bool>,
        method: Method,
    ) {
        self.entries.push(DiagnosticEntry {
            name: name.to_string(),
            parameters: parameters.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            estimate,
            verdict,
            method,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_clique, make_cycle};
    use crate::random::sample_gnp;

    #[test]
    fn part_sizes() {
        assert_eq!(min_part_size(0.1f64, 10), 1);
        assert_eq!(min_part_size(0.25f64, 10), 3);
        assert_eq!(min_part_size(0.0f64, 10), 1);
        assert_eq!(min_part_size(1.0f64, 4), 4);
    }

    #[test]
    fn degree_concentration_examples() {
        let c7 = make_cycle(7).unwrap();
        let r = degree_concentration_report(&c7, 2.0, 0.01).unwrap();
        assert_eq!(r.fraction, 1.0);
        let r = degree_concentration_report(&Graph::empty(5), 3.0, 0.5).unwrap();
        assert_eq!(r.fraction, 0.0);
        assert!(degree_concentration_report(&c7, 0.0, 0.1).is_err());
        let k = make_clique(6).unwrap();
        assert_eq!(degree_concentration_report::<f32>(&k, 5.0, 0.0).unwrap().within, 6);
    }

    /// `P[|X - reference| <= delta * reference]` for `X ~ Bin(trials, p)`.
    fn binomial_window(trials: usize, p: f64, reference: f64, delta: f64) -> f64 {
        let mut log_pmf = trials as f64 * (1.0 - p).ln();
        let mut mass = 0.0;
        for k in 0..=trials {
            if k > 0 {
                log_pmf += ((trials - k + 1) as f64 / k as f64).ln() + (p / (1.0 - p)).ln();
            }
            if (k as f64 - reference).abs() <= delta * reference {
                mass += log_pmf.exp();
            }
        }
        mass
    }

    #[test]
    fn degrees_of_dense_samples_follow_the_binomial() {
        let (n, p, delta) = (2000, 0.05, 0.2);
        let reference = p * n as f64;
        let want = binomial_window(n - 1, p, reference, delta);
        assert!(want > 0.95 && want < 0.97);
        for seed in 0..3 {
            let g = sample_gnp(n, p, 17 + seed).unwrap().graph;
            let r = degree_concentration_report(&g, reference, delta).unwrap();
            let sd = (want * (1.0 - want) / n as f64).sqrt();
            assert!((r.fraction - want).abs() < 5.0 * sd, "{} vs {want}", r.fraction);
        }
    }

    #[test]
    fn report_serialises_method_inline() {
        let mut report = DiagnosticsReport::default();
        report.push_exact("disc", &[("n", 4.0)], 0.125, None);
        report.push_sampled("regular", &[("eps", 0.1)], 0.0, Some(true), 50, None);
        assert_eq!(report.entries[0].method, Method::Exact);
        assert_eq!(report.entries[1].parameters["eps"], 0.1);
    }
}
