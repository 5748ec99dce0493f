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

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An exact routine was asked to run beyond its enumeration limit.
    #[error("instance too large for {routine}: size {size} exceeds limit {limit}")]
    TooLarge {
        routine: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("coloring is not proper: edges {0:?} and {1:?} share a vertex and color {2}")]
    NotProper((usize, usize), (usize, usize), usize),

    #[error("coloring does not match graph: {0}")]
    ColoringMismatch(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("graph6 parse error: {0}")]
    Graph6(String),
}
