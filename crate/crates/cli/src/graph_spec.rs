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

//! Graph arguments: named families, graph6 strings and random samples.
//!
//! | form          | graph                                 |
//! |---------------|---------------------------------------|
//! | `K5`          | complete graph on 5 vertices          |
//! | `C6`          | cycle on 6 vertices                   |
//! | `P4`          | path on 4 vertices                    |
//! | `B3`          | book: 3 triangles on the spine `01`   |
//! | `g6:D~{`      | graph6 text                           |
//! | `gnp:40,0.3`  | `G(40, 0.3)` drawn from the run seed  |
//!
//! A root for 2-labeled graphs is appended as `@a,b`, e.g. `C5@0,1`.

use std::fmt;
use std::str::FromStr;

use antiramsey_core::graph::io::from_graph6;
use antiramsey_core::graph::{make_book, make_clique, make_cycle, make_path};
use antiramsey_core::random::sample_gnp;
use antiramsey_core::{Edge, Graph, LabeledTwoGraph};
use serde::{Deserialize, Serialize};

use crate::error::{config_error, CliError, CliResult};

#[derive(Clone, Debug, PartialEq)]
enum Family {
    Clique(usize),
    Cycle(usize),
    Path(usize),
    Book(usize),
    Graph6(String),
    Gnp(usize, f64),
}

/// A parsed graph argument, kept in its textual form for reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GraphSpec {
    text: String,
    family: Family,
    root: Option<Edge>,
}

fn parse_count(name: &str, digits: &str) -> CliResult<usize> {
    digits
        .parse()
        .map_err(|_| config_error(format!("bad size in graph name {name:?}")))
}

impl FromStr for GraphSpec {
    type Err = CliError;

    fn from_str(text: &str) -> CliResult<Self> {
        let text = text.trim();
        let (body, root) = match text.rsplit_once('@') {
            Some((body, r)) => {
                let (a, b) = r
                    .split_once(',')
                    .ok_or_else(|| config_error(format!("root in {text:?} must read @a,b")))?;
                let a = a.trim().parse().map_err(|_| config_error(format!("bad root in {text:?}")))?;
                let b = b.trim().parse().map_err(|_| config_error(format!("bad root in {text:?}")))?;
                (body, Some((a, b)))
            }
            None => (text, None),
        };
        let family = if let Some(g6) = body.strip_prefix("g6:") {
            Family::Graph6(g6.to_string())
        } else if let Some(args) = body.strip_prefix("gnp:") {
            let (n, p) = args
                .split_once(',')
                .ok_or_else(|| config_error(format!("{text:?} must read gnp:n,p")))?;
            let n = parse_count(text, n.trim())?;
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| config_error(format!("bad probability in {text:?}")))?;
            Family::Gnp(n, p)
        } else {
            let mut chars = body.chars();
            let kind = chars.next().ok_or_else(|| config_error("empty graph name"))?;
            let k = parse_count(text, chars.as_str())?;
            match kind {
                'K' => Family::Clique(k),
                'C' => Family::Cycle(k),
                'P' => Family::Path(k),
                'B' => Family::Book(k),
                _ => return Err(config_error(format!("unknown graph {text:?}"))),
            }
        };
        let spec = GraphSpec {
            text: text.to_string(),
            family,
            root,
        };
        // named families and graph6 are checked up front; samples need a seed
        if !matches!(spec.family, Family::Gnp(..)) {
            spec.build(0)?;
        }
        Ok(spec)
    }
}

impl TryFrom<String> for GraphSpec {
    type Error = CliError;

    fn try_from(s: String) -> CliResult<Self> {
        s.parse()
    }
}

impl From<GraphSpec> for String {
    fn from(g: GraphSpec) -> String {
        g.text
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl GraphSpec {
    /// The graph; `seed` is used only by random samples.
    pub fn build(&self, seed: u64) -> CliResult<Graph> {
        let g = match &self.family {
            Family::Clique(k) => make_clique(*k)?,
            Family::Cycle(k) => make_cycle(*k)?,
            Family::Path(k) => make_path(*k)?,
            Family::Book(t) => make_book(*t)?,
            Family::Graph6(s) => from_graph6(s)?,
            Family::Gnp(n, p) => sample_gnp(*n, *p, seed)?.graph,
        };
        if let Some((a, b)) = self.root {
            if !g.has_edge(a, b) {
                return Err(config_error(format!("root {a},{b} of {} is not an edge", self.text)));
            }
        }
        Ok(g)
    }

    /// The graph rooted at `@a,b`, or at its first edge.
    pub fn build_labeled(&self, seed: u64) -> CliResult<LabeledTwoGraph> {
        let g = self.build(seed)?;
        Ok(match self.root {
            Some(root) => LabeledTwoGraph::new(g, root)?,
            None => LabeledTwoGraph::at_first_edge(g)?,
        })
    }

    pub fn is_random(&self) -> bool {
        matches!(self.family, Family::Gnp(..))
    }
}
