//! Weighted dual resolution graphs.
//!
//! A [`ResolutionGraph`] stores its vertices in lexicographic order of their
//! names; every per-vertex quantity in this crate is a `Vec` indexed by that
//! order ([`VertexId`]).

mod analysis;
mod parse;

pub use analysis::{Reduction, VertexAnalysis, Violation};
pub use parse::{parse_graph, ParseError, ParseErrorKind};

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Index of a vertex in a graph's lexicographic vertex order.
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("edge references unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate edge `{0}`--`{1}`")]
    DuplicateEdge(String, String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
}

/// Weighted graph of exceptional curves; `w(x) = -L_x^2`.
///
/// Construction only rejects structural nonsense (unknown names, loops,
/// repeated edges). Whether the graph is the dual graph of a minimal
/// singularity is answered by [`ResolutionGraph::validate_minimal`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResolutionGraph {
    names: Vec<String>,
    weights: Vec<u32>,
    adjacency: Vec<Vec<VertexId>>,
    edges: Vec<(VertexId, VertexId)>,
}

impl ResolutionGraph {
    pub fn new<S: AsRef<str>>(
        vertices: &[(S, u32)],
        edges: &[(S, S)],
    ) -> Result<Self, GraphError> {
        let mut by_name: BTreeMap<&str, u32> = BTreeMap::new();
        for (name, weight) in vertices {
            if by_name.insert(name.as_ref(), *weight).is_some() {
                return Err(GraphError::DuplicateVertex(name.as_ref().to_string()));
            }
        }
        let names: Vec<String> = by_name.keys().map(|s| s.to_string()).collect();
        let weights: Vec<u32> = by_name.values().copied().collect();
        let index = |name: &str| names.binary_search_by(|n| n.as_str().cmp(name)).ok();

        let mut seen = BTreeSet::new();
        let mut adjacency = vec![Vec::new(); names.len()];
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let ia = index(a).ok_or_else(|| GraphError::UnknownVertex(a.to_string()))?;
            let ib = index(b).ok_or_else(|| GraphError::UnknownVertex(b.to_string()))?;
            if ia == ib {
                return Err(GraphError::SelfLoop(a.to_string()));
            }
            if !seen.insert((ia.min(ib), ia.max(ib))) {
                return Err(GraphError::DuplicateEdge(a.to_string(), b.to_string()));
            }
            adjacency[ia].push(ib);
            adjacency[ib].push(ia);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(ResolutionGraph {
            names,
            weights,
            adjacency,
            edges: seen.into_iter().collect(),
        })
    }

    /// Single vertex of weight `n`: the cone over the rational normal curve of degree `n`.
    pub fn veronese(n: u32) -> Self {
        Self::new(&[("a", n)], &[]).expect("single vertex")
    }

    /// Chain of `k` weight-2 vertices, the dual graph of the A_k surface singularity.
    pub fn a_chain(k: usize) -> Self {
        assert!(k >= 1, "A_k needs k >= 1");
        let names: Vec<String> = (1..=k).map(|i| format!("a{i}")).collect();
        let vertices: Vec<(&str, u32)> = names.iter().map(|n| (n.as_str(), 2)).collect();
        let edges: Vec<(&str, &str)> = names
            .windows(2)
            .map(|w| (w[0].as_str(), w[1].as_str()))
            .collect();
        Self::new(&vertices, &edges).expect("chain is well formed")
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.names.len()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<VertexId> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn weight(&self, v: VertexId) -> u32 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn valence(&self, v: VertexId) -> u32 {
        self.adjacency[v].len() as u32
    }

    /// Edges as `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn is_adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Intersection number `L_a . L_b`.
    pub fn pairing(&self, a: VertexId, b: VertexId) -> i64 {
        if a == b {
            -(self.weights[a] as i64)
        } else if self.is_adjacent(a, b) {
            1
        } else {
            0
        }
    }

    /// The intersection matrix (diagonal `-w`, `1` on edges).
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        self.vertices()
            .map(|a| self.vertices().map(|b| self.pairing(a, b)).collect())
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.names.is_empty() {
            return false;
        }
        self.bfs_distances(&[0]).iter().all(Option::is_some)
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.names.len()
    }

    /// Multi-source breadth-first distances; `None` for unreachable vertices.
    pub fn bfs_distances(&self, sources: &[VertexId]) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.names.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &u in &self.adjacency[v] {
                if dist[u].is_none() {
                    dist[u] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// The unique path from `from` to `to`, both included. Requires a tree.
    pub fn chain(&self, from: VertexId, to: VertexId) -> Vec<VertexId> {
        let mut parent = vec![usize::MAX; self.names.len()];
        parent[to] = to;
        let mut queue = VecDeque::from([to]);
        while let Some(v) = queue.pop_front() {
            if v == from {
                break;
            }
            for &u in &self.adjacency[v] {
                if parent[u] == usize::MAX {
                    parent[u] = v;
                    queue.push_back(u);
                }
            }
        }
        assert!(parent[from] != usize::MAX, "vertices are not connected");
        let mut path = vec![from];
        let mut v = from;
        while v != to {
            v = parent[v];
            path.push(v);
        }
        path
    }

    pub fn chain_length(&self, from: VertexId, to: VertexId) -> usize {
        self.chain(from, to).len()
    }

    /// `|C(x, z) ∩ C(y, z)|`.
    pub fn overlap(&self, x: VertexId, y: VertexId, z: VertexId) -> usize {
        let a: BTreeSet<_> = self.chain(x, z).into_iter().collect();
        self.chain(y, z).iter().filter(|v| a.contains(v)).count()
    }

    /// Induced subgraph on `keep`, weights inherited.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> ResolutionGraph {
        let vertices: Vec<(&str, u32)> = keep
            .iter()
            .map(|&v| (self.names[v].as_str(), self.weights[v]))
            .collect();
        let edges: Vec<(&str, &str)> = self
            .edges
            .iter()
            .filter(|(a, b)| keep.contains(a) && keep.contains(b))
            .map(|&(a, b)| (self.names[a].as_str(), self.names[b].as_str()))
            .collect();
        ResolutionGraph::new(&vertices, &edges).expect("induced subgraph is well formed")
    }

    /// Same vertices and edges with new weights.
    pub fn with_weights(&self, weights: Vec<u32>) -> ResolutionGraph {
        assert_eq!(weights.len(), self.weights.len());
        ResolutionGraph {
            weights,
            ..self.clone()
        }
    }

    /// Serializes to the line-oriented graph format; parses back to an equal graph.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in self.vertices() {
            out.push_str(&format!("vertex {} {}\n", self.names[v], self.weights[v]));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("edge {} {}\n", self.names[a], self.names[b]));
        }
        out
    }
}

impl fmt::Display for ResolutionGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_errors() {
        assert_eq!(
            ResolutionGraph::new(&[("a", 2), ("a", 3)], &[]),
            Err(GraphError::DuplicateVertex("a".into()))
        );
        assert_eq!(
            ResolutionGraph::new(&[("a", 2)], &[("a", "b")]),
            Err(GraphError::UnknownVertex("b".into()))
        );
        assert_eq!(
            ResolutionGraph::new(&[("a", 2)], &[("a", "a")]),
            Err(GraphError::SelfLoop("a".into()))
        );
        assert_eq!(
            ResolutionGraph::new(&[("a", 2), ("b", 2)], &[("a", "b"), ("b", "a")]),
            Err(GraphError::DuplicateEdge("b".into(), "a".into()))
        );
    }

    #[test]
    fn chains_and_overlaps() {
        let g = crate::fixtures::fig2();
        let id = |n: &str| g.index_of(n).unwrap();
        let names = |p: Vec<VertexId>| p.into_iter().map(|v| g.name(v).to_string()).collect::<Vec<_>>();
        assert_eq!(names(g.chain(id("x1"), id("x2"))), ["x1", "a", "b", "c", "x2"]);
        assert_eq!(g.chain_length(id("x3"), id("x3")), 1);
        assert_eq!(g.chain_length(id("x2"), id("d")), 2);
        assert_eq!(g.overlap(id("x1"), id("x4"), id("x2")), 3);
        assert_eq!(g.overlap(id("x1"), id("x3"), id("x2")), 1);
        assert_eq!(g.overlap(id("a"), id("x3"), id("x3")), 1);
    }

    #[test]
    fn text_round_trip() {
        let g = crate::fixtures::note();
        assert_eq!(parse_graph(&g.to_text()).unwrap(), g);
    }
}
