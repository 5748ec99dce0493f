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

//! Monte Carlo estimate of `P[G(n, p) has a rainbow target]` under a
//! coloring strategy.
//!
//! This is a proxy for the arrows relation: the strategy produces one
//! coloring per sample, and a hit means that coloring has a rainbow copy.
//! Trial `i` draws one uniform per vertex pair from `derive_seed(seed, 0, i)`
//! and reuses it at every grid point, so the sampled graphs are nested in
//! `p`. With `distinct` colors, or a target whose proper colorings are all
//! rainbow (such as `K3`), each trial's outcomes are then monotone in `p`.

use antiramsey_core::random::{derive_seed, proper_color, CoupledGnp};
use antiramsey_core::rainbow::has_rainbow_copy;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::CurveConfig;
use crate::error::{CliError, CliResult};
use crate::report::{Record, SCHEMA_VERSION};

/// `CoupledGnp` keeps `n(n-1)/2` draws per trial in memory.
pub const MAX_CURVE_ORDER: usize = 4000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub p: f64,
    /// `beta` with `p = C n^-beta`, for exponent grids.
    pub exponent: Option<f64>,
    pub frequency: f64,
    pub hits: u64,
    pub trials: u64,
    /// 95% Wilson score interval.
    pub ci_low: f64,
    pub ci_high: f64,
    pub strategy: String,
    pub schema_version: u32,
}

impl Record for CurveRow {
    const KIND: &'static str = "threshold-curve";
    const COLUMNS: &'static [&'static str] = &[
        "p",
        "exponent",
        "frequency",
        "hits",
        "trials",
        "ci_low",
        "ci_high",
        "strategy",
        "schema_version",
    ];
}

#[derive(Clone, Debug)]
pub struct CurveOutcome {
    pub rows: Vec<CurveRow>,
    /// `hits[i][j]`: trial `i` found a rainbow copy at grid point `j`.
    pub hits: Vec<Vec<bool>>,
}

pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    let z = 1.959_963_984_540_054;
    let n = trials as f64;
    let f = hits as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (f + z * z / (2.0 * n)) / denom;
    let half = z * (f * (1.0 - f) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    // the endpoints are exact at 0 and `trials` hits
    let lo = if hits == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if hits == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

pub fn run_threshold_curve(config: &CurveConfig, seed: u64) -> CliResult<CurveOutcome> {
    config.validate()?;
    if config.n > MAX_CURVE_ORDER {
        return Err(CliError::Infeasible(format!(
            "n = {} exceeds {MAX_CURVE_ORDER}; coupled samples would not fit, use a smaller n",
            config.n
        )));
    }
    let grid = config.grid()?;
    let target = config.target.build(0)?;
    if target.size() == 0 {
        return Err(CliError::Config("the target needs at least one edge".into()));
    }
    let strategy = config.strategy.to_strategy(&target);
    let n = config.n;

    let hits: Vec<Vec<bool>> = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let coupled = CoupledGnp::new(n, derive_seed(seed, 0, i));
            grid.iter()
                .map(|&(p, _)| {
                    let g = coupled.graph(p)?;
                    if g.size() < target.size() {
                        return Ok(false);
                    }
                    let c = proper_color(&g, &strategy, derive_seed(seed, 1, i));
                    Ok(has_rainbow_copy(&g, &c, &target)?.is_some())
                })
                .collect::<CliResult<Vec<bool>>>()
        })
        .collect::<CliResult<_>>()?;

    let rows = grid
        .iter()
        .enumerate()
        .map(|(j, &(p, exponent))| {
            let count = hits.iter().filter(|h| h[j]).count() as u64;
            let (ci_low, ci_high) = wilson_interval(count, config.trials);
            CurveRow {
                p,
                exponent,
                frequency: count as f64 / config.trials as f64,
                hits: count,
                trials: config.trials,
                ci_low,
                ci_high,
                strategy: config.strategy.name().to_string(),
                schema_version: SCHEMA_VERSION,
            }
        })
        .collect();
    Ok(CurveOutcome { rows, hits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::StrategySpec;

    fn curve(p: Vec<f64>, target: &str, strategy: StrategySpec, trials: u64) -> CurveConfig {
        CurveConfig {
            n: 20,
            p: Some(p),
            exponents: None,
            constant: 1.0,
            target: target.parse().unwrap(),
            strategy,
            trials,
        }
    }

    #[test]
    fn endpoints() {
        let c = curve(vec![0.0, 1.0], "K3", StrategySpec::Greedy, 20);
        let out = run_threshold_curve(&c, 1).unwrap();
        assert_eq!(out.rows[0].frequency, 0.0);
        assert_eq!(out.rows[1].frequency, 1.0);
        assert_eq!(out.rows[1].ci_high, 1.0);
    }

    #[test]
    fn distinct_colors_are_monotone_per_trial() {
        let c = curve(vec![0.05, 0.1, 0.2, 0.3], "C4", StrategySpec::Distinct, 40);
        let out = run_threshold_curve(&c, 9).unwrap();
        for row in &out.hits {
            assert!(row.windows(2).all(|w| w[0] <= w[1]), "{row:?}");
        }
    }

    #[test]
    fn seeds_reproduce() {
        let c = curve(vec![0.1, 0.2], "C4", StrategySpec::Greedy, 30);
        assert_eq!(run_threshold_curve(&c, 5).unwrap().rows, run_threshold_curve(&c, 5).unwrap().rows);
    }

    #[test]
    fn wilson_brackets_the_estimate() {
        for (h, t) in [(0, 10), (5, 10), (10, 10), (37, 500)] {
            let (lo, hi) = wilson_interval(h, t);
            let f = h as f64 / t as f64;
            assert!(lo <= f && f <= hi && lo >= 0.0 && hi <= 1.0);
        }
    }

    #[test]
    fn oversized_orders_are_infeasible() {
        let mut c = curve(vec![0.1], "K3", StrategySpec::Greedy, 1);
        c.n = MAX_CURVE_ORDER + 1;
        assert!(matches!(run_threshold_curve(&c, 0), Err(CliError::Infeasible(_))));
    }
}
