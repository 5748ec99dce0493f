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

use super::Graph;
use crate::error::{Error, Result};

/// Book graph `B_t`: `t` triangles sharing the spine `u1 u2`.
///
/// Vertex order: `u1 = 0`, `u2 = 1`, page vertices `v_k = k + 1` for
/// `k = 1..=t`. The spine is edge index 0.
pub fn make_book(t: usize) -> Result<Graph> {
    if t == 0 {
        return Err(Error::InvalidParameter("book needs t >= 1".into()));
    }
    let mut edges = vec![(0, 1)];
    for k in 2..t + 2 {
        edges.push((0, k));
        edges.push((1, k));
    }
    Graph::new(t + 2, edges)
}

/// Cycle `C_k` on `0..k` with edges `i (i+1 mod k)`.
pub fn make_cycle(k: usize) -> Result<Graph> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("cycle needs k >= 3, got {k}")));
    }
    Graph::new(k, (0..k).map(|i| (i, (i + 1) % k)))
}

/// Complete graph `K_k` on `0..k`.
pub fn make_clique(k: usize) -> Result<Graph> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("clique needs k >= 3, got {k}")));
    }
    Ok(complete(k))
}

pub(crate) fn complete(k: usize) -> Graph {
    let edges = (0..k)
        .flat_map(|u| (u + 1..k).map(move |v| (u, v)))
        .collect();
    Graph::from_sorted_edges(k, edges)
}

/// Path on `k` vertices `0 - 1 - ... - (k-1)`; `k - 1` edges.
pub fn make_path(k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::InvalidParameter("path needs k >= 1".into()));
    }
    Graph::new(k, (1..k).map(|i| (i - 1, i)))
}
