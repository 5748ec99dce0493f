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

//! Exact decision of `G ->rb H`: every proper coloring of `G` has a rainbow `H`.
//!
//! Rainbowness is invariant under renaming colors, so one representative per
//! renaming class suffices. With symmetry pruning, only classes whose color
//! string is the lexicographic minimum over the action of `Aut(G)` on edges
//! are checked; any other class is the image of a checked one under an
//! automorphism, which maps rainbow copies to rainbow copies.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classes::{canonical_prefixes, ColoringWalker};
use super::{CopyTable, ProperColoring};
use crate::error::{Error, Result};
use crate::graph::{automorphisms, make_book, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrowsVerdict {
    Holds,
    Fails,
    /// The budget ran out first.
    Unknown,
}

/// The default is exact and sequential with no budget.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowsOptions {
    /// Maximum number of coloring classes to examine.
    pub budget: Option<u64>,
    pub symmetry_pruning: bool,
    /// Split the search over all canonical colorings of the first `d`
    /// edges and process the prefixes in parallel. Ignored with a budget.
    pub split_depth: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowsResult {
    pub verdict: ArrowsVerdict,
    /// A coloring of `G` with no rainbow `H`, when the verdict is `Fails`.
    pub counterexample: Option<ProperColoring>,
    /// Coloring classes whose copies were checked.
    pub colorings_examined: u64,
    /// Classes skipped as non-minimal in their automorphism orbit.
    pub skipped_by_symmetry: u64,
}

struct EdgeSymmetry {
    perms: Vec<Vec<usize>>,
    image: Vec<usize>,
    rename: Vec<usize>,
}

impl EdgeSymmetry {
    fn new(g: &Graph) -> Self {
        let perms = automorphisms(g)
            .into_iter()
            .skip(1)
            .map(|sigma| {
                g.edges()
                    .iter()
                    .map(|&(u, v)| g.edge_index(sigma[u], sigma[v]).expect("automorphism"))
                    .collect()
            })
            .collect();
        EdgeSymmetry {
            perms,
            image: vec![0; g.size()],
            rename: vec![usize::MAX; g.size()],
        }
    }

    /// True when no automorphism maps `colors` to a lexicographically
    /// smaller canonical string.
    fn is_orbit_minimum(&mut self, colors: &[usize]) -> bool {
        for perm in &self.perms {
            for (e, &c) in colors.iter().enumerate() {
                self.image[perm[e]] = c;
            }
            self.rename.iter_mut().for_each(|r| *r = usize::MAX);
            let mut next = 0;
            for (i, &c) in self.image.iter().enumerate() {
                if self.rename[c] == usize::MAX {
                    self.rename[c] = next;
                    next += 1;
                }
                let mapped = self.rename[c];
                if mapped != colors[i] {
                    if mapped < colors[i] {
                        return false;
                    }
                    break;
                }
            }
        }
        true
    }
}

struct Chunk {
    examined: u64,
    skipped: u64,
    counterexample: Option<Vec<usize>>,
    exhausted: bool,
}

fn run_chunk(
    table: &CopyTable,
    mut walker: ColoringWalker,
    mut symmetry: Option<EdgeSymmetry>,
    budget: Option<u64>,
) -> Chunk {
    let mut chunk = Chunk {
        examined: 0,
        skipped: 0,
        counterexample: None,
        exhausted: true,
    };
    while let Some(colors) = walker.advance() {
        if let Some(sym) = symmetry.as_mut() {
            if !sym.is_orbit_minimum(colors) {
                chunk.skipped += 1;
                continue;
            }
        }
        if budget.is_some_and(|b| chunk.examined >= b) {
            chunk.exhausted = false;
            break;
        }
        chunk.examined += 1;
        if !table.any_rainbow(colors) {
            chunk.counterexample = Some(colors.to_vec());
            break;
        }
    }
    chunk
}

/// Decides `g ->rb h` by exhausting proper colorings of `g` up to renaming.
pub fn arrows_rainbow(g: &Graph, h: &Graph, options: &ArrowsOptions) -> ArrowsResult {
    let table = CopyTable::new(g, h);
    let symmetry = || options.symmetry_pruning.then(|| EdgeSymmetry::new(g));

    let chunks: Vec<Chunk> = match (options.split_depth, options.budget) {
        (Some(depth), None) if depth > 0 && g.size() > 0 => canonical_prefixes(g, depth)
            .into_par_iter()
            .map(|prefix| {
                run_chunk(
                    &table,
                    ColoringWalker::with_prefix(g, &prefix),
                    symmetry(),
                    None,
                )
            })
            .collect(),
        _ => vec![run_chunk(&table, ColoringWalker::new(g), symmetry(), options.budget)],
    };

    // Chunks come back in prefix order, so the reported counterexample is
    // the lexicographically first one found regardless of scheduling.
    let mut result = ArrowsResult {
        verdict: ArrowsVerdict::Holds,
        counterexample: None,
        colorings_examined: 0,
        skipped_by_symmetry: 0,
    };
    for chunk in chunks {
        result.colorings_examined += chunk.examined;
        result.skipped_by_symmetry += chunk.skipped;
        if result.counterexample.is_none() {
            if let Some(c) = chunk.counterexample {
                result.verdict = ArrowsVerdict::Fails;
                result.counterexample = Some(ProperColoring::from_canonical(c));
            } else if !chunk.exhausted {
                result.verdict = ArrowsVerdict::Unknown;
            }
        }
    }
    result
}

/// Checks `B_{3t-2} ->rb B_t` exactly.
pub fn verify_book_lemma(t: usize, options: &ArrowsOptions) -> Result<ArrowsResult> {
    if t == 0 {
        return Err(Error::InvalidParameter("book lemma needs t >= 1".into()));
    }
    let big = make_book(3 * t - 2)?;
    let small = make_book(t)?;
    Ok(arrows_rainbow(&big, &small, options))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_clique, make_cycle, make_path};
    use crate::rainbow::{check_proper, has_rainbow_copy};

    #[test]
    fn trivial_relations() {
        let k3 = make_clique(3).unwrap();
        let r = arrows_rainbow(&k3, &k3, &ArrowsOptions::default());
        assert_eq!(r.verdict, ArrowsVerdict::Holds);
        // no copy at all means some (every) coloring avoids it
        let r = arrows_rainbow(&make_cycle(5).unwrap(), &k3, &ArrowsOptions::default());
        assert_eq!(r.verdict, ArrowsVerdict::Fails);
    }

    #[test]
    fn b2_does_not_arrow_itself() {
        let b2 = make_book(2).unwrap();
        let r = arrows_rainbow(&b2, &b2, &ArrowsOptions::default());
        assert_eq!(r.verdict, ArrowsVerdict::Fails);
        let c = r.counterexample.unwrap();
        check_proper(&b2, c.colors()).unwrap();
        assert!(has_rainbow_copy(&b2, &c, &b2).unwrap().is_none());
    }

    #[test]
    fn c4_colorings_and_p4() {
        // the 2-coloring of C4 alternates, so any P4 repeats a color
        let c4 = make_cycle(4).unwrap();
        let r = arrows_rainbow(&c4, &make_path(4).unwrap(), &ArrowsOptions::default());
        assert_eq!(r.verdict, ArrowsVerdict::Fails);
        assert_eq!(r.counterexample.unwrap().num_colors(), 2);
    }

    #[test]
    fn options_agree() {
        let variants = [
            ArrowsOptions::default(),
            ArrowsOptions {
                symmetry_pruning: true,
                ..Default::default()
            },
            ArrowsOptions {
                split_depth: Some(3),
                ..Default::default()
            },
            ArrowsOptions {
                symmetry_pruning: true,
                split_depth: Some(2),
                ..Default::default()
            },
        ];
        let cases = [
            (make_book(3).unwrap(), make_book(2).unwrap(), ArrowsVerdict::Fails),
            (make_book(4).unwrap(), make_book(2).unwrap(), ArrowsVerdict::Holds),
            (make_clique(5).unwrap(), make_cycle(4).unwrap(), ArrowsVerdict::Holds),
        ];
        for (g, h, want) in &cases {
            let base = arrows_rainbow(g, h, &variants[0]);
            assert_eq!(base.verdict, *want);
            for opts in &variants[1..] {
                let r = arrows_rainbow(g, h, opts);
                assert_eq!(r.verdict, base.verdict);
                if *want == ArrowsVerdict::Fails {
                    continue;
                }
                if opts.symmetry_pruning {
                    assert!(r.colorings_examined <= base.colorings_examined);
                    assert_eq!(r.colorings_examined + r.skipped_by_symmetry, base.colorings_examined);
                } else {
                    assert_eq!(r.colorings_examined, base.colorings_examined);
                }
            }
        }
    }

    #[test]
    fn budget_gives_unknown() {
        let opts = ArrowsOptions {
            budget: Some(3),
            ..Default::default()
        };
        let r = verify_book_lemma(2, &opts).unwrap();
        assert_eq!(r.verdict, ArrowsVerdict::Unknown);
        assert_eq!(r.colorings_examined, 3);
        assert!(verify_book_lemma(0, &opts).is_err());
    }

    #[test]
    fn b3_misses_b2() {
        let r = arrows_rainbow(&make_book(3).unwrap(), &make_book(2).unwrap(), &ArrowsOptions::default());
        assert_eq!(r.verdict, ArrowsVerdict::Fails);
        assert_eq!(verify_book_lemma(1, &ArrowsOptions::default()).unwrap().verdict, ArrowsVerdict::Holds);
    }
}
