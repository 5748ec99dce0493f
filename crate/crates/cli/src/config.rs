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

//! JSON experiment configs.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "kind": "threshold-curve",
//!   "seed": 7,
//!   "n": 60,
//!   "p": [0.01, 0.02, 0.05],
//!   "target": "K3",
//!   "strategy": "greedy",
//!   "trials": 500
//! }
//! ```
//!
//! `kind` selects the experiment and the remaining fields; unknown fields
//! are rejected. A `--seed` flag overrides the config seed.

use std::path::Path;

use antiramsey_core::random::ColoringStrategy;
use antiramsey_core::Graph;
use serde::{Deserialize, Serialize};

use crate::error::{config_error, CliError, CliResult};
use crate::graph_spec::GraphSpec;
use crate::report::SCHEMA_VERSION;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub seed: Option<u64>,
    pub experiment: Experiment,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Experiment {
    ThresholdCurve(CurveConfig),
    Pipeline(PipelineConfig),
    Diagnostics(DiagnoseConfig),
    Arrows(ArrowsConfig),
    Density(DensityConfig),
    BookLemma(BookLemmaConfig),
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::ThresholdCurve(_) => "threshold-curve",
            Experiment::Pipeline(_) => "pipeline",
            Experiment::Diagnostics(_) => "diagnostics",
            Experiment::Arrows(_) => "arrows",
            Experiment::Density(_) => "density",
            Experiment::BookLemma(_) => "book-lemma",
        }
    }
}

/// How proper colorings are drawn.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum StrategySpec {
    #[default]
    Greedy,
    Distinct,
    /// Heuristic search for a coloring without rainbow copies of the target.
    Adversarial { restarts: usize },
}

impl StrategySpec {
    pub fn name(&self) -> &'static str {
        match self {
            StrategySpec::Greedy => "greedy",
            StrategySpec::Distinct => "distinct",
            StrategySpec::Adversarial { .. } => "adversarial",
        }
    }

    pub fn to_strategy(&self, target: &Graph) -> ColoringStrategy {
        match self {
            StrategySpec::Greedy => ColoringStrategy::Greedy,
            StrategySpec::Distinct => ColoringStrategy::Distinct,
            StrategySpec::Adversarial { restarts } => ColoringStrategy::Adversarial {
                target: target.clone(),
                restarts: *restarts,
            },
        }
    }
}

fn default_constant() -> f64 {
    1.0
}

/// `P[G(n, p) contains a rainbow target under the strategy]` along a grid,
/// given either as probabilities `p` or as exponents with
/// `p = constant * n^-exponent`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub n: usize,
    #[serde(default)]
    pub p: Option<Vec<f64>>,
    #[serde(default)]
    pub exponents: Option<Vec<f64>>,
    #[serde(default = "default_constant")]
    pub constant: f64,
    pub target: GraphSpec,
    #[serde(default)]
    pub strategy: StrategySpec,
    pub trials: u64,
}

/// Where colors go in the pipeline.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ClassMode {
    /// One class per edge of `H`.
    #[default]
    Edges,
    /// `T` anonymous classes.
    Count(usize),
}

fn default_circuit_length() -> usize {
    4
}

fn default_delta() -> f64 {
    0.5
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub n: usize,
    pub p: f64,
    /// 2-labeled `S`; its vertex `i` owns part `V_{i+1}`.
    pub s: GraphSpec,
    pub f: GraphSpec,
    pub h: GraphSpec,
    pub alpha: f64,
    /// Overrides the derived `q' = e(H) * 6 e(S) n^{v(S)-2} p^{e(S)}`.
    #[serde(default)]
    pub q_prime: Option<f64>,
    #[serde(default)]
    pub strategy: StrategySpec,
    #[serde(default)]
    pub classes: ClassMode,
    pub trials: u64,
    #[serde(default = "default_circuit_length")]
    pub circuit_length: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_true")]
    pub search_rainbow: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeSpec {
    /// Exact where the size limits allow, sampled elsewhere.
    #[default]
    Auto,
    Exact,
    Sampled,
}

fn default_probes() -> u64 {
    2000
}

fn default_eps() -> f64 {
    0.1
}

fn default_mu() -> f64 {
    0.1
}

fn default_degree_delta() -> f64 {
    0.2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnoseConfig {
    pub graph: GraphSpec,
    /// Circuit length; cycles are counted at the same length.
    #[serde(default = "default_circuit_length")]
    pub ell: usize,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_mu")]
    pub mu: f64,
    /// Reference density; the edge density of the graph when absent.
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default = "default_degree_delta")]
    pub delta: f64,
    #[serde(default)]
    pub mode: ModeSpec,
    #[serde(default = "default_probes")]
    pub probes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowsConfig {
    pub host: GraphSpec,
    pub pattern: GraphSpec,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default = "default_true")]
    pub symmetry_pruning: bool,
    #[serde(default)]
    pub split_depth: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityConfig {
    pub graphs: Vec<GraphSpec>,
    /// When present, `beta(graph, s)` is reported too.
    #[serde(default)]
    pub s: Option<GraphSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BookLemmaConfig {
    pub t: Vec<usize>,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default = "default_true")]
    pub symmetry_pruning: bool,
    #[serde(default)]
    pub split_depth: Option<usize>,
}

fn check_probability(what: &str, p: f64) -> CliResult<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(config_error(format!("{what} = {p} is not a probability")))
    }
}

impl CurveConfig {
    /// Grid points as `(p, exponent)`; the exponent is `None` for `p` grids.
    pub fn grid(&self) -> CliResult<Vec<(f64, Option<f64>)>> {
        let points: Vec<(f64, Option<f64>)> = match (&self.p, &self.exponents) {
            (Some(ps), None) => ps.iter().map(|&p| (p, None)).collect(),
            (None, Some(bs)) => {
                if !(self.constant.is_finite() && self.constant > 0.0) {
                    return Err(config_error("constant must be positive"));
                }
                bs.iter()
                    .map(|&b| (self.constant * (self.n as f64).powf(-b), Some(b)))
                    .collect()
            }
            _ => return Err(config_error("give exactly one of p and exponents")),
        };
        if points.is_empty() {
            return Err(config_error("the grid is empty"));
        }
        for &(p, _) in &points {
            check_probability("grid point p", p)?;
        }
        Ok(points)
    }

    pub fn validate(&self) -> CliResult<()> {
        self.grid()?;
        if self.trials == 0 {
            return Err(config_error("trials must be positive"));
        }
        if self.target.is_random() {
            return Err(config_error("the target must be a fixed graph"));
        }
        Ok(())
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> CliResult<()> {
        check_probability("p", self.p)?;
        if let Some(q) = self.q_prime {
            check_probability("q_prime", q)?;
        }
        if self.trials == 0 {
            return Err(config_error("trials must be positive"));
        }
        if self.circuit_length < 2 {
            return Err(config_error("circuit_length must be at least 2"));
        }
        if !(self.alpha >= 0.0 && self.delta >= 0.0) {
            return Err(config_error("alpha and delta must be nonnegative"));
        }
        if let ClassMode::Count(0) = self.classes {
            return Err(config_error("class count must be positive"));
        }
        if [&self.s, &self.f, &self.h].iter().any(|g| g.is_random()) {
            return Err(config_error("S, F and H must be fixed graphs"));
        }
        Ok(())
    }
}

impl DiagnoseConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.ell < 3 {
            return Err(config_error("ell must be at least 3"));
        }
        for (what, v) in [("eps", self.eps), ("mu", self.mu), ("delta", self.delta)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(config_error(format!("{what} must be nonnegative")));
            }
        }
        if let Some(p) = self.p {
            check_probability("p", p)?;
        }
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let mut value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| config_error(format!("config is not JSON: {e}")))?;
        let map = value
            .as_object_mut()
            .ok_or_else(|| config_error("config must be a JSON object"))?;
        let version = map
            .remove("schema_version")
            .ok_or_else(|| config_error("config lacks schema_version"))?;
        let schema_version = version
            .as_u64()
            .ok_or_else(|| config_error("schema_version must be an integer"))? as u32;
        if schema_version != SCHEMA_VERSION {
            return Err(config_error(format!(
                "schema_version {schema_version} is not supported (expected {SCHEMA_VERSION})"
            )));
        }
        let seed = match map.remove("seed") {
            None | Some(serde_json::Value::Null) => None,
            Some(s) => Some(s.as_u64().ok_or_else(|| config_error("seed must be a nonnegative integer"))?),
        };
        let experiment: Experiment =
            serde_json::from_value(value).map_err(|e| config_error(format!("bad config: {e}")))?;
        let config = ExperimentConfig {
            schema_version,
            seed,
            experiment,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> CliResult<()> {
        match &self.experiment {
            Experiment::ThresholdCurve(c) => c.validate(),
            Experiment::Pipeline(c) => c.validate(),
            Experiment::Diagnostics(c) => c.validate(),
            Experiment::Density(c) if c.graphs.is_empty() => Err(config_error("no graphs given")),
            Experiment::BookLemma(c) if c.t.is_empty() => Err(config_error("no t given")),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_curve() {
        let c = ExperimentConfig::from_json(
            r#"{"schema_version": 1, "kind": "threshold-curve", "seed": 3, "n": 60,
                "exponents": [1.0, 0.9], "constant": 2.0, "target": "K3", "trials": 10}"#,
        )
        .unwrap();
        assert_eq!(c.seed, Some(3));
        let Experiment::ThresholdCurve(curve) = c.experiment else {
            panic!("wrong kind")
        };
        assert_eq!(curve.strategy, StrategySpec::Greedy);
        let grid = curve.grid().unwrap();
        assert!((grid[0].0 - 2.0 / 60.0).abs() < 1e-15);
        assert_eq!(grid[1].1, Some(0.9));
    }

    #[test]
    fn strategies() {
        let s: StrategySpec = serde_json::from_str(r#"{"adversarial": {"restarts": 3}}"#).unwrap();
        assert_eq!(s, StrategySpec::Adversarial { restarts: 3 });
        assert_eq!(serde_json::from_str::<StrategySpec>("\"distinct\"").unwrap(), StrategySpec::Distinct);
        let m: ClassMode = serde_json::from_str(r#"{"count": 3}"#).unwrap();
        assert_eq!(m, ClassMode::Count(3));
    }

    #[test]
    fn rejections() {
        let bad = [
            r#"{"kind": "density", "graphs": ["K3"]}"#,
            r#"{"schema_version": 2, "kind": "density", "graphs": ["K3"]}"#,
            r#"{"schema_version": 1, "kind": "density", "graphs": []}"#,
            r#"{"schema_version": 1, "kind": "density", "graphs": ["K3"], "extra": 1}"#,
            r#"{"schema_version": 1, "kind": "density", "graphs": ["Z3"]}"#,
            r#"{"schema_version": 1, "kind": "nope"}"#,
            r#"{"schema_version": 1, "kind": "threshold-curve", "n": 9, "p": [], "target": "K3", "trials": 1}"#,
            r#"{"schema_version": 1, "kind": "threshold-curve", "n": 9, "p": [1.5], "target": "K3", "trials": 1}"#,
            r#"{"schema_version": 1, "kind": "threshold-curve", "n": 9, "p": [0.5], "exponents": [1],
                "target": "K3", "trials": 1}"#,
            r#"{"schema_version": 1, "kind": "threshold-curve", "n": 9, "p": [0.5], "target": "K3", "trials": 0}"#,
            r#"{"schema_version": 1, "kind": "book-lemma", "t": [1], "seed": -1}"#,
            r#"[1, 2]"#,
        ];
        for text in bad {
            assert!(matches!(ExperimentConfig::from_json(text), Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn pipeline_defaults() {
        let c = ExperimentConfig::from_json(
            r#"{"schema_version": 1, "kind": "pipeline", "n": 40, "p": 0.3, "s": "K3", "f": "K3",
                "h": "C5", "alpha": 0.01, "trials": 2}"#,
        )
        .unwrap();
        let Experiment::Pipeline(p) = c.experiment else {
            panic!("wrong kind")
        };
        assert_eq!(p.classes, ClassMode::Edges);
        assert_eq!(p.circuit_length, 4);
        assert!(p.search_rainbow);
        assert_eq!(c.seed, None);
    }
}
