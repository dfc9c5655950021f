use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use super::{ResolutionGraph, VertexId};
use crate::linalg;

/// One failed minimality rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Violation {
    NotATree { vertices: usize, edges: usize, connected: bool },
    WeightBelowTwo { vertex: String, weight: u32 },
    WeightBelowValence { vertex: String, weight: u32, valence: u32 },
    NotNegativeDefinite { order: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotATree { vertices, edges, connected } => write!(
                f,
                "not a tree: {vertices} vertices, {edges} edges, {}",
                if *connected { "connected" } else { "disconnected" }
            ),
            Violation::WeightBelowTwo { vertex, weight } => {
                write!(f, "weight below 2 at `{vertex}` (w = {weight})")
            }
            Violation::WeightBelowValence { vertex, weight, valence } => {
                write!(f, "weight below valence at `{vertex}` (w = {weight} < v = {valence})")
            }
            Violation::NotNegativeDefinite { order } => {
                write!(f, "intersection form not negative definite (leading minor of order {order})")
            }
        }
    }
}

/// Heights, tangent-cone vertices and central elements of a valid graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexAnalysis {
    pub heights: Vec<u32>,
    pub tc_vertices: Vec<VertexId>,
    /// `m(x) = w(x) - v(x)` for every vertex; positive exactly on `tc_vertices`.
    pub cone_degree: Vec<i64>,
    pub central_vertices: Vec<VertexId>,
    pub central_arcs: Vec<(VertexId, VertexId)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    Reduced(ResolutionGraph),
    /// The reduced single-vertex graph would have weight 1: a smooth point.
    Smooth,
}

impl Reduction {
    pub fn graph(&self) -> Option<&ResolutionGraph> {
        match self {
            Reduction::Reduced(g) => Some(g),
            Reduction::Smooth => None,
        }
    }
}

impl ResolutionGraph {
    /// All violated minimality rules; empty when the graph is the dual graph of
    /// a minimal singularity.
    pub fn validate_minimal(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !self.is_tree() {
            out.push(Violation::NotATree {
                vertices: self.vertex_count(),
                edges: self.edges().len(),
                connected: self.is_connected(),
            });
        }
        for v in self.vertices() {
            let (w, val) = (self.weight(v), self.valence(v));
            if w < 2 {
                out.push(Violation::WeightBelowTwo {
                    vertex: self.name(v).to_string(),
                    weight: w,
                });
            }
            if w < val {
                out.push(Violation::WeightBelowValence {
                    vertex: self.name(v).to_string(),
                    weight: w,
                    valence: val,
                });
            }
        }
        if let Some(order) = self
            .leading_minors()
            .iter()
            .position(|m| !m.is_positive())
        {
            out.push(Violation::NotNegativeDefinite { order: order + 1 });
        }
        out
    }

    pub fn is_valid_minimal(&self) -> bool {
        self.validate_minimal().is_empty()
    }

    /// Leading principal minors of the negated intersection matrix.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        let negated: Vec<Vec<BigInt>> = self
            .intersection_matrix()
            .into_iter()
            .map(|row| row.into_iter().map(|x| BigInt::from(-x)).collect())
            .collect();
        linalg::leading_minors(&negated)
    }

    pub fn cone_degree(&self, v: VertexId) -> i64 {
        self.weight(v) as i64 - self.valence(v) as i64
    }

    pub fn is_tc(&self, v: VertexId) -> bool {
        self.cone_degree(v) > 0
    }

    /// Vertices with `w > v`, i.e. components of the projectivized tangent cone.
    pub fn tc_vertices(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.is_tc(v)).collect()
    }

    /// `s_x = dist(x, Γ_TC) + 1`; 0 marks a vertex with no path to Γ_TC.
    pub fn heights(&self) -> Vec<u32> {
        self.bfs_distances(&self.tc_vertices())
            .into_iter()
            .map(|d| d.map_or(0, |d| d + 1))
            .collect()
    }

    pub fn multiplicity(&self) -> u64 {
        self.tc_vertices()
            .into_iter()
            .map(|v| self.cone_degree(v) as u64)
            .sum()
    }

    pub fn embedding_dimension(&self) -> u64 {
        self.multiplicity() + 1
    }

    pub fn central_elements(&self, heights: &[u32]) -> (Vec<VertexId>, Vec<(VertexId, VertexId)>) {
        let vertices = self
            .vertices()
            .filter(|&v| {
                heights[v] >= 2
                    && self
                        .neighbors(v)
                        .iter()
                        .filter(|&&u| heights[u] + 1 == heights[v])
                        .count()
                        >= 2
            })
            .collect();
        let arcs = self
            .edges()
            .iter()
            .copied()
            .filter(|&(a, b)| heights[a] == heights[b])
            .collect();
        (vertices, arcs)
    }

    pub fn analyze(&self) -> VertexAnalysis {
        let heights = self.heights();
        let (central_vertices, central_arcs) = self.central_elements(&heights);
        VertexAnalysis {
            tc_vertices: self.tc_vertices(),
            cone_degree: self.vertices().map(|v| self.cone_degree(v)).collect(),
            heights,
            central_vertices,
            central_arcs,
        }
    }

    /// Connected components of the graph minus Γ_TC, ordered by their
    /// smallest vertex name.
    pub fn tyurina_components(&self) -> Vec<ResolutionGraph> {
        self.tyurina_vertex_sets()
            .iter()
            .map(|set| self.induced(set))
            .collect()
    }

    pub fn tyurina_vertex_sets(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen: Vec<bool> = self.vertices().map(|v| self.is_tc(v)).collect();
        let mut out = Vec::new();
        for start in self.vertices() {
            if seen[start] {
                continue;
            }
            let mut set = BTreeSet::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                set.insert(v);
                for &u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            out.push(set);
        }
        out
    }

    /// Lowers every Γ_TC weight to `v(x) + 1`.
    pub fn reduce(&self) -> Reduction {
        let weights: Vec<u32> = self
            .vertices()
            .map(|v| {
                if self.is_tc(v) {
                    self.valence(v) + 1
                } else {
                    self.weight(v)
                }
            })
            .collect();
        if weights.iter().any(|&w| w < 2) {
            Reduction::Smooth
        } else {
            Reduction::Reduced(self.with_weights(weights))
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.vertices()
            .all(|v| !self.is_tc(v) || self.weight(v) == self.valence(v) + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::parse_graph;

    fn named(g: &ResolutionGraph, ids: &[VertexId]) -> Vec<String> {
        ids.iter().map(|&v| g.name(v).to_string()).collect()
    }

    fn height_of(g: &ResolutionGraph, name: &str) -> u32 {
        g.heights()[g.index_of(name).unwrap()]
    }

    #[test]
    fn validation() {
        assert!(fixtures::g32().validate_minimal().is_empty());
        let triangle =
            parse_graph("vertex a 3\nvertex b 3\nvertex c 3\nedge a b\nedge b c\nedge c a").unwrap();
        assert!(matches!(
            triangle.validate_minimal().as_slice(),
            [Violation::NotATree { .. }, ..]
        ));
        let v1 = parse_graph("vertex a 1").unwrap().validate_minimal();
        assert_eq!(
            v1,
            vec![Violation::WeightBelowTwo { vertex: "a".into(), weight: 1 }]
        );
    }

    #[test]
    fn validation_lists_every_violation() {
        let g = parse_graph("vertex a 1\nvertex b 2\nvertex c 2\nvertex d 2\nedge b a\nedge b c\nedge b d")
            .unwrap();
        let v = g.validate_minimal();
        assert!(v.contains(&Violation::WeightBelowTwo { vertex: "a".into(), weight: 1 }));
        assert!(v.contains(&Violation::WeightBelowValence {
            vertex: "b".into(),
            weight: 2,
            valence: 3
        }));
    }

    #[test]
    fn heights_of_fixtures() {
        let g = fixtures::fig2();
        for x in ["x1", "x2", "x3", "x4"] {
            assert_eq!(height_of(&g, x), 1);
        }
        for x in ["a", "c", "d", "e"] {
            assert_eq!(height_of(&g, x), 2);
        }
        assert_eq!(height_of(&g, "b"), 3);

        assert_eq!(fixtures::veronese(4).heights(), [1]);

        let g = fixtures::note();
        assert_eq!(height_of(&g, "v"), 3);
        for x in ["p", "q", "r", "w"] {
            assert_eq!(height_of(&g, x), 2);
        }
    }

    #[test]
    fn tangent_cone_and_multiplicity() {
        for n in 2..=6 {
            let g = fixtures::veronese(n);
            assert_eq!(g.tc_vertices(), [0]);
            assert_eq!(g.cone_degree(0), n as i64);
            assert_eq!(g.multiplicity(), n as u64);
            assert_eq!(g.embedding_dimension(), n as u64 + 1);
        }
        let g = fixtures::g32();
        assert_eq!(g.analyze().cone_degree, [2, 1]);
        assert_eq!(g.multiplicity(), 3);

        let g = fixtures::fig2();
        assert_eq!(named(&g, &g.tc_vertices()), ["x1", "x2", "x3", "x4"]);
        assert!(g.tc_vertices().iter().all(|&v| g.cone_degree(v) == 1));
        assert_eq!(g.multiplicity(), 4);

        let g = fixtures::note();
        assert_eq!(g.multiplicity(), 6);
        assert_eq!(g.embedding_dimension(), 7);
    }

    #[test]
    fn tyurina_components_of_fixtures() {
        let g = fixtures::fig2();
        let comps: Vec<Vec<String>> = g.tyurina_components().iter().map(|c| c.names().to_vec()).collect();
        assert_eq!(comps, vec![vec!["a", "b", "c", "e"], vec!["d"]]);
        assert!(fixtures::veronese(4).tyurina_components().is_empty());
        let comps = fixtures::join().tyurina_components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].names(), ["t1", "t2", "t3", "u", "v"]);
        assert!(comps.iter().all(|c| c.is_valid_minimal()));
    }

    #[test]
    fn central_elements_of_fixtures() {
        let g = fixtures::g32();
        let a = g.analyze();
        assert!(a.central_vertices.is_empty());
        assert_eq!(a.central_arcs, [(0, 1)]);

        let g = fixtures::fig2();
        let a = g.analyze();
        assert_eq!(named(&g, &a.central_vertices), ["b", "d"]);
        assert!(a.central_arcs.is_empty());

        let g = fixtures::note();
        let a = g.analyze();
        assert_eq!(named(&g, &a.central_vertices), ["r", "v"]);
        let arcs: Vec<_> = a
            .central_arcs
            .iter()
            .map(|&(x, y)| (g.name(x), g.name(y)))
            .collect();
        assert_eq!(arcs, [("p", "q")]);
    }

    #[test]
    fn reduction() {
        let g = fixtures::note();
        let Reduction::Reduced(r) = g.reduce() else { panic!("expected a graph") };
        assert_eq!(r.weight(r.index_of("x1").unwrap()), 2);
        assert!(r.is_reduced());
        assert_eq!(r.tc_vertices(), g.tc_vertices());
        assert_eq!(r.heights(), g.heights());

        let g = fixtures::fig2();
        assert!(g.is_reduced());
        assert_eq!(g.reduce(), Reduction::Reduced(g.clone()));

        for n in 2..=5 {
            assert_eq!(fixtures::veronese(n).reduce(), Reduction::Smooth);
        }
    }

    #[test]
    fn fundamental_cycle_self_intersection_is_multiplicity() {
        for g in fixtures::all().into_iter().map(|f| f.graph) {
            let m = g.intersection_matrix();
            let zz: i64 = m.iter().flatten().sum();
            assert_eq!(-zz, g.multiplicity() as i64, "{g}");
        }
    }
}
