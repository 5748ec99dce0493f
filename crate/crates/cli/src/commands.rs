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

//! Runners for the exact and diagnostic subcommands.

use antiramsey_core::density::{beta, m2_density};
use antiramsey_core::diagnostics::{
    check_circuit_property, check_upper_uniform, count_circuits, count_cycles, degree_concentration_report,
    disc_discrepancy, DiagnosticsReport, Method, Mode, MAX_DISC_ORDER, MAX_UPPER_UNIFORM_ORDER,
};
use antiramsey_core::rainbow::{arrows_rainbow, verify_book_lemma, ArrowsOptions, ArrowsResult};
use antiramsey_core::random::derive_seed;
use antiramsey_core::{BigInt, Graph, ProperColoring, Real};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::config::{ArrowsConfig, BookLemmaConfig, DensityConfig, DiagnoseConfig, ModeSpec};
use crate::error::{CliError, CliResult};
use crate::report::{Record, SCHEMA_VERSION};

/// Exact arrows searches on larger hosts need an explicit budget.
pub const MAX_EXACT_ARROWS_EDGES: usize = 16;

/// Sampled discrepancy works on bitmasks.
const MAX_SAMPLED_DISC_ORDER: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub graph: String,
    pub vertices: usize,
    pub edges: usize,
    pub m2: String,
    pub m2_approx: f64,
    pub two_balanced: bool,
    /// Vertices spanning a densest subgraph, space separated.
    pub witness: String,
    pub s: Option<String>,
    /// `beta(graph, s)`.
    pub beta: Option<String>,
    pub schema_version: u32,
}

impl Record for DensityRow {
    const KIND: &'static str = "density";
    const COLUMNS: &'static [&'static str] = &[
        "graph",
        "vertices",
        "edges",
        "m2",
        "m2_approx",
        "two_balanced",
        "witness",
        "s",
        "beta",
        "schema_version",
    ];
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn run_density(config: &DensityConfig, seed: u64) -> CliResult<Vec<DensityRow>> {
    let s = config.s.as_ref().map(|s| s.build(seed)).transpose()?;
    config
        .graphs
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let g = spec.build(derive_seed(seed, 4, i as u64))?;
            let report = m2_density::<BigInt>(&g)?;
            let beta = s.as_ref().map(|s| beta::<BigInt>(&g, s)).transpose()?;
            Ok(DensityRow {
                graph: spec.to_string(),
                vertices: g.order(),
                edges: g.size(),
                m2_approx: report.value.to_f64().unwrap_or(f64::NAN),
                m2: report.value.to_string(),
                two_balanced: report.two_balanced,
                witness: join(&report.witness_vertices),
                s: config.s.as_ref().map(|s| s.to_string()),
                beta: beta.map(|b| b.to_string()),
                schema_version: SCHEMA_VERSION,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrowsRow {
    pub host: String,
    pub pattern: String,
    pub host_edges: usize,
    pub verdict: String,
    pub colorings_examined: u64,
    pub skipped_by_symmetry: u64,
    /// `u-v:color` per host edge, when the verdict is `fails`.
    pub counterexample: Option<String>,
    pub schema_version: u32,
}

impl Record for ArrowsRow {
    const KIND: &'static str = "arrows";
    const COLUMNS: &'static [&'static str] = &[
        "host",
        "pattern",
        "host_edges",
        "verdict",
        "colorings_examined",
        "skipped_by_symmetry",
        "counterexample",
        "schema_version",
    ];
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BookLemmaRow {
    pub t: usize,
    pub host: String,
    pub pattern: String,
    pub host_edges: usize,
    pub verdict: String,
    pub colorings_examined: u64,
    pub skipped_by_symmetry: u64,
    pub counterexample: Option<String>,
    pub schema_version: u32,
}

impl Record for BookLemmaRow {
    const KIND: &'static str = "book-lemma";
    const COLUMNS: &'static [&'static str] = &[
        "t",
        "host",
        "pattern",
        "host_edges",
        "verdict",
        "colorings_examined",
        "skipped_by_symmetry",
        "counterexample",
        "schema_version",
    ];
}

fn options(budget: Option<u64>, symmetry_pruning: bool, split_depth: Option<usize>) -> ArrowsOptions {
    ArrowsOptions {
        budget,
        symmetry_pruning,
        split_depth,
    }
}

fn check_arrows_size(host: &Graph, budget: Option<u64>) -> CliResult<()> {
    if budget.is_none() && host.size() > MAX_EXACT_ARROWS_EDGES {
        return Err(CliError::Infeasible(format!(
            "host has {} edges; exact search is limited to {MAX_EXACT_ARROWS_EDGES}, set a budget",
            host.size()
        )));
    }
    Ok(())
}

fn compact_coloring(g: &Graph, c: &ProperColoring) -> String {
    join(c.colored_edges(g).iter().map(|e| format!("{}-{}:{}", e.u, e.v, e.color)))
}

fn verdict_name(r: &ArrowsResult) -> String {
    serde_json::to_value(r.verdict)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

/// The row plus the counterexample as a colored edge list.
pub fn run_arrows(config: &ArrowsConfig, seed: u64) -> CliResult<(Vec<ArrowsRow>, serde_json::Value)> {
    let host = config.host.build(derive_seed(seed, 4, 0))?;
    let pattern = config.pattern.build(derive_seed(seed, 4, 1))?;
    check_arrows_size(&host, config.budget)?;
    let result = arrows_rainbow(
        &host,
        &pattern,
        &options(config.budget, config.symmetry_pruning, config.split_depth),
    );
    let details = serde_json::json!({
        "counterexample": result.counterexample.as_ref().map(|c| c.colored_edges(&host)),
    });
    let row = ArrowsRow {
        host: config.host.to_string(),
        pattern: config.pattern.to_string(),
        host_edges: host.size(),
        verdict: verdict_name(&result),
        colorings_examined: result.colorings_examined,
        skipped_by_symmetry: result.skipped_by_symmetry,
        counterexample: result.counterexample.as_ref().map(|c| compact_coloring(&host, c)),
        schema_version: SCHEMA_VERSION,
    };
    Ok((vec![row], details))
}

pub fn run_book_lemma(config: &BookLemmaConfig) -> CliResult<Vec<BookLemmaRow>> {
    config
        .t
        .iter()
        .map(|&t| {
            if t == 0 {
                return Err(CliError::Config("t must be positive".into()));
            }
            let host = antiramsey_core::graph::make_book(3 * t - 2)?;
            check_arrows_size(&host, config.budget)?;
            let result = verify_book_lemma(
                t,
                &options(config.budget, config.symmetry_pruning, config.split_depth),
            )?;
            Ok(BookLemmaRow {
                t,
                host: format!("B{}", 3 * t - 2),
                pattern: format!("B{t}"),
                host_edges: host.size(),
                verdict: verdict_name(&result),
                colorings_examined: result.colorings_examined,
                skipped_by_symmetry: result.skipped_by_symmetry,
                counterexample: result.counterexample.as_ref().map(|c| compact_coloring(&host, c)),
                schema_version: SCHEMA_VERSION,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnoseRow {
    pub name: String,
    /// `key=value` pairs, `;` separated, keys sorted.
    pub parameters: String,
    pub estimate: f64,
    pub verdict: Option<bool>,
    pub method: String,
    pub samples: Option<u64>,
    pub std_error: Option<f64>,
    pub schema_version: u32,
}

impl Record for DiagnoseRow {
    const KIND: &'static str = "diagnostics";
    const COLUMNS: &'static [&'static str] = &[
        "name",
        "parameters",
        "estimate",
        "verdict",
        "method",
        "samples",
        "std_error",
        "schema_version",
    ];
}

fn resolve_mode(spec: ModeSpec, n: usize, limit: usize, probes: u64, seed: u64) -> Mode {
    match spec {
        ModeSpec::Exact => Mode::Exact,
        ModeSpec::Auto if n <= limit => Mode::Exact,
        _ => Mode::Sampled { probes, seed },
    }
}

/// Runs the diagnostics on one graph.
///
/// Subset-quantified checks (discrepancy, upper uniformity) are exact below
/// their size limits in `auto` mode and sampled above. For upper
/// uniformity the estimate is the density of the violating pair, or 0 when
/// none was found. The discrepancy verdict is taken at `eps^(1/ell)`, the
/// level a passing circuit check of length `ell` implies.
pub fn run_diagnose(config: &DiagnoseConfig, seed: u64) -> CliResult<(Vec<DiagnoseRow>, DiagnosticsReport)> {
    config.validate()?;
    let g = config.graph.build(derive_seed(seed, 4, 0))?;
    let n = g.order();
    if g.size() == 0 {
        return Err(CliError::Config("diagnostics need at least one edge".into()));
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let density = g.size() as f64 / pairs;
    let p = config.p.unwrap_or(density);
    let mut report = DiagnosticsReport::default();

    report.push_exact("edge_density", &[("n", n as f64)], density, None);

    let reference = p * (n - 1) as f64;
    if reference > 0.0 {
        let deg = degree_concentration_report::<Real>(&g, reference, config.delta)?;
        report.push_exact(
            "degree_concentration",
            &[("delta", config.delta), ("reference", reference)],
            deg.fraction,
            None,
        );
    }

    let ell = config.ell;
    let circuit = check_circuit_property::<Real>(&g, ell, config.eps)?;
    report.push_exact(
        "circuit_weight",
        &[("ell", ell as f64), ("eps", config.eps), ("isolated_excluded", circuit.isolated_excluded as f64)],
        circuit.weight_sum,
        Some(circuit.holds),
    );
    report.push_exact("circuits", &[("ell", ell as f64)], count_circuits(&g, ell)? as f64, None);
    report.push_exact("cycles", &[("ell", ell as f64)], count_cycles(&g, ell)? as f64, None);

    let disc_skipped = config.mode == ModeSpec::Auto && n > MAX_SAMPLED_DISC_ORDER;
    if !disc_skipped {
        let mode = resolve_mode(config.mode, n, MAX_DISC_ORDER, config.probes, derive_seed(seed, 5, 0));
        let disc = disc_discrepancy::<Real>(&g, mode)?;
        let threshold = config.eps.powf(1.0 / ell as f64);
        let params = [("eps", config.eps), ("threshold", threshold)];
        match disc.method {
            Method::Exact => report.push_exact("disc", &params, disc.epsilon, Some(disc.epsilon <= threshold)),
            Method::Sampled { samples, .. } => {
                // sampling can only refute
                let verdict = (disc.epsilon > threshold).then_some(false);
                report.push_sampled("disc", &params, disc.epsilon, verdict, samples, None)
            }
        }
    }

    let mode = resolve_mode(config.mode, n, MAX_UPPER_UNIFORM_ORDER, config.probes, derive_seed(seed, 5, 1));
    let uniform = check_upper_uniform::<Real>(&g, config.mu, p, mode)?;
    let estimate = uniform.violation.as_ref().map_or(0.0, |v| v.value);
    let params = [("mu", config.mu), ("p", p)];
    match uniform.method {
        Method::Exact => report.push_exact("upper_uniform", &params, estimate, Some(uniform.holds)),
        Method::Sampled { samples, .. } => {
            let verdict = (!uniform.holds).then_some(false);
            report.push_sampled("upper_uniform", &params, estimate, verdict, samples, None)
        }
    }

    let rows = report
        .entries
        .iter()
        .map(|e| {
            let (method, samples, std_error) = match e.method {
                Method::Exact => ("exact", None, None),
                Method::Sampled { samples, std_error } => ("sampled", Some(samples), std_error),
            };
            DiagnoseRow {
                name: e.name.clone(),
                parameters: e
                    .parameters
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(";"),
                estimate: e.estimate,
                verdict: e.verdict,
                method: method.to_string(),
                samples,
                std_error,
                schema_version: SCHEMA_VERSION,
            }
        })
        .collect();
    Ok((rows, report))
}
