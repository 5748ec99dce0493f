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

//! Combinatorics of rainbow (anti-Ramsey) properties made executable.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: immutable simple graphs, the book/cycle/clique/path families,
//!   amalgamation of 2-labeled graphs, copy enumeration and graph6 I/O.
//! * [`density`]: exact m2-density, 2-balancedness and the threshold exponent
//!   `beta(H, S)`, generic over the integer type backing the rationals.
//! * [`rainbow`]: proper edge-colorings, rainbow copy detection and the exact
//!   decision procedure for `G ->rb H`.
//! * [`random`]: seeded samplers for `G(n, p)`, the two-layer model, proper
//!   colorings and random color-to-class assignments.
//! * [`diagnostics`]: pair densities, regularity, upper uniformity,
//!   discrepancy, weighted circuits, cycles and paths; floating point parts
//!   are generic over the scalar type.
//! * [`census`]: isolated and transversal copy counts.
//!
//! Numeric code is generic; the aliases below fix the types most callers want.

pub mod census;
pub mod density;
pub mod diagnostics;
mod error;
pub mod graph;
pub mod num;
pub mod rainbow;
pub mod random;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use graph::{Edge, Embedding, Graph, LabeledTwoGraph};
pub use rainbow::ProperColoring;

/// Arbitrary precision rational used for all density arithmetic.
pub type Rational = num_rational::Ratio<num_bigint::BigInt>;

/// Floating point type used by the diagnostics front ends.
pub type Real = f64;

/// m2-density report over [`Rational`].
pub type DensityReport = density::DensityReport<num_bigint::BigInt>;

/// Pair density with [`Real`] density values.
pub type PairDensity = diagnostics::PairDensity<Real>;

/// Discrepancy report with [`Real`] values.
pub type DiscReport = diagnostics::DiscReport<Real>;
