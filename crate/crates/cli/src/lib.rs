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

//! The `antiramsey` command line: exact m2-densities and arrows checks,
//! Monte Carlo threshold curves, the amalgamation pipeline and
//! pseudo-randomness diagnostics.
//!
//! Every subcommand can read a JSON config (`--config`) or take its inputs
//! as arguments. Output goes to `--output` (stdout by default) as JSON or
//! CSV. Runs are deterministic in the seed and independent of `--threads`.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 config error, 3 infeasible
//! instance.

pub mod commands;
pub mod config;
pub mod error;
pub mod experiments;
pub mod graph_spec;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{
    ArrowsConfig, BookLemmaConfig, DensityConfig, DiagnoseConfig, Experiment, ExperimentConfig, ModeSpec,
};
use crate::error::{config_error, CliError, CliResult};
use crate::graph_spec::GraphSpec;
use crate::report::{render, Format};

#[derive(Debug, Parser)]
#[command(name = "antiramsey", version, about = "Rainbow subgraph experiments on graphs")]
pub struct Cli {
    /// Master seed; overrides the config seed (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ArrowsFlags {
    /// Stop after this many coloring classes and report `unknown`.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Examine every coloring class, skipping none by symmetry.
    #[arg(long)]
    pub no_symmetry: bool,
    /// Split the exact search in parallel over colorings of the first edges.
    #[arg(long)]
    pub split_depth: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// m2-density of graphs, and beta(graph, S) with --s.
    Density {
        graphs: Vec<GraphSpec>,
        #[arg(long)]
        s: Option<GraphSpec>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Decide whether every proper coloring of HOST has a rainbow PATTERN.
    Arrows {
        host: Option<GraphSpec>,
        pattern: Option<GraphSpec>,
        #[command(flatten)]
        flags: ArrowsFlags,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Check B_{3t-2} ->rb B_t for each given t.
    BookLemma {
        #[arg(long = "t")]
        t: Vec<usize>,
        #[command(flatten)]
        flags: ArrowsFlags,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Threshold curve for a rainbow target in G(n, p).
    GnpExperiment {
        #[arg(long)]
        config: PathBuf,
    },
    /// Amalgamation pipeline on the two-layer random graph.
    Pipeline {
        #[arg(long)]
        config: PathBuf,
    },
    /// Pseudo-randomness diagnostics of one graph.
    Diagnose {
        graph: Option<GraphSpec>,
        #[arg(long, default_value_t = 4)]
        ell: usize,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 0.1)]
        mu: f64,
        /// Reference density; the edge density when absent.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0.2)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = ModeSpec::Auto)]
        mode: ModeSpec,
        #[arg(long, default_value_t = 2000)]
        probes: u64,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load_kind(path: &Path, kind: &str) -> CliResult<ExperimentConfig> {
    let config = ExperimentConfig::load(path)?;
    if config.experiment.kind() != kind {
        return Err(config_error(format!(
            "{} holds a {} config, expected {kind}",
            path.display(),
            config.experiment.kind()
        )));
    }
    Ok(config)
}

fn from_args(experiment: Experiment) -> CliResult<ExperimentConfig> {
    let config = ExperimentConfig {
        schema_version: report::SCHEMA_VERSION,
        seed: None,
        experiment,
    };
    config.validate()?;
    Ok(config)
}

fn missing(what: &str) -> CliError {
    config_error(format!("{what} is required without --config"))
}

/// Resolves a subcommand into a validated experiment.
pub fn experiment_for(command: Command) -> CliResult<ExperimentConfig> {
    match command {
        Command::Density { graphs, s, config } => match config {
            Some(path) => load_kind(&path, "density"),
            None => from_args(Experiment::Density(DensityConfig { graphs, s })),
        },
        Command::Arrows {
            host,
            pattern,
            flags,
            config,
        } => match config {
            Some(path) => load_kind(&path, "arrows"),
            None => from_args(Experiment::Arrows(ArrowsConfig {
                host: host.ok_or_else(|| missing("HOST"))?,
                pattern: pattern.ok_or_else(|| missing("PATTERN"))?,
                budget: flags.budget,
                symmetry_pruning: !flags.no_symmetry,
                split_depth: flags.split_depth,
            })),
        },
        Command::BookLemma { t, flags, config } => match config {
            Some(path) => load_kind(&path, "book-lemma"),
            None => from_args(Experiment::BookLemma(BookLemmaConfig {
                t,
                budget: flags.budget,
                symmetry_pruning: !flags.no_symmetry,
                split_depth: flags.split_depth,
            })),
        },
        Command::GnpExperiment { config } => load_kind(&config, "threshold-curve"),
        Command::Pipeline { config } => load_kind(&config, "pipeline"),
        Command::Diagnose {
            graph,
            ell,
            eps,
            mu,
            p,
            delta,
            mode,
            probes,
            config,
        } => match config {
            Some(path) => load_kind(&path, "diagnostics"),
            None => from_args(Experiment::Diagnostics(DiagnoseConfig {
                graph: graph.ok_or_else(|| missing("GRAPH"))?,
                ell,
                eps,
                mu,
                p,
                delta,
                mode,
                probes,
            })),
        },
    }
}

/// Runs one experiment and renders its output.
pub fn execute(experiment: &Experiment, seed: u64, format: Format) -> CliResult<Vec<u8>> {
    match experiment {
        Experiment::Density(c) => render(&commands::run_density(c, seed)?, None, format),
        Experiment::Arrows(c) => {
            let (rows, details) = commands::run_arrows(c, seed)?;
            render(&rows, Some(&details), format)
        }
        Experiment::BookLemma(c) => render(&commands::run_book_lemma(c)?, None, format),
        Experiment::ThresholdCurve(c) => {
            render(&experiments::run_threshold_curve(c, seed)?.rows, None, format)
        }
        Experiment::Pipeline(c) => {
            let out = experiments::run_pipeline(c, seed)?;
            render(&out.rows, Some(&out.details), format)
        }
        Experiment::Diagnostics(c) => {
            let (rows, _) = commands::run_diagnose(c, seed)?;
            render(&rows, None, format)
        }
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    let config = experiment_for(cli.command)?;
    let seed = cli.seed.or(config.seed).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| config_error(format!("cannot start {} threads: {e}", cli.threads)))?;
    let bytes = pool.install(|| execute(&config.experiment, seed, cli.format))?;
    report::write_output(&bytes, cli.output.as_deref())
}
