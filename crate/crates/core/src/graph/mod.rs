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

//! Immutable simple undirected graphs.
//!
//! Vertices are the integers `0..n`. Edges are stored normalised as `(u, v)`
//! with `u < v`, sorted lexicographically; the position of an edge in
//! [`Graph::edges`] is its *edge index*, which colorings are keyed by.

mod embed;
mod families;
pub mod io;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use embed::{
    are_isomorphic, automorphisms, count_injective_homomorphisms, enumerate_copies,
    for_each_embedding, Embedding,
};
pub(crate) use embed::{copy_key, search, Placement, Plan};
pub use families::{make_book, make_clique, make_cycle, make_path};

pub type Vertex = usize;

/// An undirected edge `(u, v)`; normalised edges satisfy `u < v`.
pub type Edge = (Vertex, Vertex);

#[inline]
pub fn normalize(u: Vertex, v: Vertex) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "GraphRepr", try_from = "GraphRepr")]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Vertex>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<Edge>,
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            n: g.n,
            edges: g.edges,
        }
    }
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;

    fn try_from(repr: GraphRepr) -> Result<Self> {
        Graph::new(repr.n, repr.edges)
    }
}

impl Graph {
    /// Builds a graph on `n` vertices. Edges may be given in either
    /// orientation; self-loops, duplicates and out-of-range endpoints are
    /// rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut list: Vec<Edge> = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            list.push(normalize(u, v));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge {:?}", w[0])));
        }
        Ok(Self::from_sorted_edges(n, list))
    }

    /// `edges` must be normalised, sorted, duplicate free and in range.
    pub(crate) fn from_sorted_edges(n: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|&(u, v)| u < v && v < n));
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut adjacency: Vec<Vec<Vertex>> =
            degree.iter().map(|&d| Vec::with_capacity(d)).collect();
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph {
            n,
            edges,
            adjacency,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_edges(n, Vec::new())
    }

    /// Number of vertices, `v(G)`.
    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of edges, `e(G)`.
    #[inline]
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        if u == v || u >= self.n || v >= self.n {
            return false;
        }
        let (a, b) = if self.adjacency[u].len() <= self.adjacency[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Position of the edge `uv` in [`Graph::edges`].
    #[inline]
    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.edges.binary_search(&normalize(u, v)).ok()
    }

    /// Indices of the edges incident to `v`, in neighbor order.
    pub fn incident_edges(&self, v: Vertex) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().map(move |&w| {
            self.edge_index(v, w)
                .expect("adjacency is consistent with the edge list")
        })
    }

    /// Induced subgraph on `vertices`, relabelled to `0..k` in the order
    /// given. Duplicate or out-of-range vertices are rejected.
    pub fn induced_subgraph(&self, vertices: &[Vertex]) -> Result<Graph> {
        let mut position = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.n {
                return Err(Error::InvalidParameter(format!("vertex {v} out of range")));
            }
            if position[v] != usize::MAX {
                return Err(Error::InvalidParameter(format!("vertex {v} repeated")));
            }
            position[v] = i;
        }
        let edges = self.edges.iter().filter_map(|&(u, v)| {
            let (a, b) = (position[u], position[v]);
            (a != usize::MAX && b != usize::MAX).then_some((a, b))
        });
        Graph::new(vertices.len(), edges.collect::<Vec<_>>())
    }

    /// Spanning subgraph keeping the edges whose index satisfies `keep`.
    pub fn spanning_subgraph(&self, mut keep: impl FnMut(usize) -> bool) -> Graph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter_map(|(i, &e)| keep(i).then_some(e))
            .collect();
        Graph::from_sorted_edges(self.n, edges)
    }

    /// Vertex-disjoint union; the vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Graph::from_sorted_edges(self.n + other.n, edges)
    }

    /// Adjacency bitmasks, available for graphs with at most 64 vertices.
    pub fn adjacency_masks(&self) -> Option<Vec<u64>> {
        if self.n > 64 {
            return None;
        }
        Some(
            self.adjacency
                .iter()
                .map(|list| list.iter().fold(0u64, |m, &w| m | (1u64 << w)))
                .collect(),
        )
    }
}

/// A graph with a distinguished ordered edge: the root `(a, b)` carries the
/// labels 1 and 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledTwoGraph {
    graph: Graph,
    root: Edge,
}

impl LabeledTwoGraph {
    pub fn new(graph: Graph, root: Edge) -> Result<Self> {
        let (a, b) = root;
        if a == b {
            return Err(Error::InvalidParameter(format!(
                "root labels must sit on distinct vertices, got ({a}, {b})"
            )));
        }
        if !graph.has_edge(a, b) {
            return Err(Error::InvalidParameter(format!(
                "root ({a}, {b}) is not an edge of the graph"
            )));
        }
        Ok(LabeledTwoGraph { graph, root })
    }

    /// Roots the graph at its first edge in index order.
    pub fn at_first_edge(graph: Graph) -> Result<Self> {
        let root = *graph
            .edges()
            .first()
            .ok_or_else(|| Error::InvalidParameter("graph has no edge to root".into()))?;
        Self::new(graph, root)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn root(&self) -> Edge {
        self.root
    }
}

/// Amalgamation `F ⊕ H`: glue the root edge of `h` onto the root edge of `f`.
///
/// Vertex numbering: the vertices of `f` keep their numbers; `h`'s root
/// vertices map onto `f`'s root vertices (label 1 onto label 1, label 2 onto
/// label 2) and the remaining vertices of `h` are appended in increasing
/// order starting at `f.order()`.
pub fn amalgamate(f: &LabeledTwoGraph, h: &LabeledTwoGraph) -> Graph {
    let (fa, fb) = f.root;
    let (ha, hb) = h.root;
    let base = f.graph.order();
    let mut image = vec![0usize; h.graph.order()];
    let mut next = base;
    for (v, slot) in image.iter_mut().enumerate() {
        *slot = if v == ha {
            fa
        } else if v == hb {
            fb
        } else {
            next += 1;
            next - 1
        };
    }
    let mut edges = f.graph.edges.clone();
    edges.extend(
        h.graph
            .edges
            .iter()
            .map(|&(u, v)| normalize(image[u], image[v]))
            .filter(|&e| e != normalize(fa, fb)),
    );
    edges.sort_unstable();
    Graph::from_sorted_edges(next, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_rejects_bad_input() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        let g = Graph::new(3, [(2, 0), (1, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2)]);
        assert_eq!(g.neighbors(0), &[1, 2]);
        assert_eq!(g.edge_index(2, 0), Some(1));
        assert!(!g.has_edge(1, 2));
    }

    #[test]
    fn label_sensitive_equality() {
        let a = Graph::new(3, [(0, 1)]).unwrap();
        let b = Graph::new(3, [(1, 2)]).unwrap();
        assert_ne!(a, b);
        assert!(are_isomorphic(&a, &b));
    }

    #[test]
    fn labeled_graph_requires_root_edge() {
        let c4 = make_cycle(4).unwrap();
        assert!(LabeledTwoGraph::new(c4.clone(), (0, 2)).is_err());
        assert!(LabeledTwoGraph::new(c4.clone(), (1, 1)).is_err());
        assert!(LabeledTwoGraph::new(c4, (1, 0)).is_ok());
    }

    #[test]
    fn amalgamation_of_triangle_and_square() {
        let k3 = LabeledTwoGraph::new(make_clique(3).unwrap(), (0, 1)).unwrap();
        let c4 = LabeledTwoGraph::new(make_cycle(4).unwrap(), (0, 1)).unwrap();
        let g = amalgamate(&k3, &c4);
        assert_eq!((g.order(), g.size()), (5, 6));
        // C4's vertices 2 and 3 become 3 and 4.
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (0, 4), (1, 2), (1, 3), (3, 4)]);
    }

    #[test]
    fn amalgamation_respects_label_order() {
        let k3 = LabeledTwoGraph::new(make_clique(3).unwrap(), (0, 1)).unwrap();
        let p = LabeledTwoGraph::new(make_path(3).unwrap(), (1, 0)).unwrap();
        // path 0-1-2 with label 1 on vertex 1: vertex 2 hangs off label 1.
        let g = amalgamate(&k3, &p);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (0, 3), (1, 2)]);
    }

    #[test]
    fn two_triangles_give_book() {
        let k3 = LabeledTwoGraph::new(make_clique(3).unwrap(), (0, 1)).unwrap();
        let g = amalgamate(&k3, &k3);
        assert!(are_isomorphic(&g, &make_book(2).unwrap()));
    }

    #[test]
    fn induced_and_spanning_subgraphs() {
        let k4 = make_clique(4).unwrap();
        let tri = k4.induced_subgraph(&[3, 1, 0]).unwrap();
        assert_eq!(tri, make_clique(3).unwrap());
        let half = k4.spanning_subgraph(|i| i % 2 == 0);
        assert_eq!(half.order(), 4);
        assert_eq!(half.size(), 3);
        assert!(k4.induced_subgraph(&[0, 0]).is_err());
    }

    #[test]
    fn deserialization_revalidates() {
        let repr: GraphRepr = make_book(2).unwrap().into();
        assert_eq!(Graph::try_from(repr).unwrap(), make_book(2).unwrap());
        let bad = GraphRepr {
            n: 2,
            edges: vec![(0, 0)],
        };
        assert!(Graph::try_from(bad).is_err());
    }
}
