//! Graphs shipped in the repository's `fixtures/` directory.

use crate::graph::{parse_graph, ResolutionGraph};

pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub graph: ResolutionGraph,
}

const SOURCES: &[(&str, &str, &str)] = &[
    ("ver2", "cone over a conic", include_str!("../../../fixtures/ver2.graph")),
    ("ver3", "cone over a twisted cubic", include_str!("../../../fixtures/ver3.graph")),
    ("ver4", "cone over a rational normal quartic", include_str!("../../../fixtures/ver4.graph")),
    ("g32", "two vertices, weights 3 and 2", include_str!("../../../fixtures/g32.graph")),
    ("fig2", "nine vertices, four tangent-cone vertices, two limit trees", include_str!("../../../fixtures/fig2.graph")),
    ("note", "multiplicity 6, polar with four lines, A5, A4, A3 (reconstruction)", include_str!("../../../fixtures/note.graph")),
    ("join", "multiplicity 3, polar with two A5 (reconstruction)", include_str!("../../../fixtures/join.graph")),
    ("a1", "A1 surface singularity", include_str!("../../../fixtures/a1.graph")),
    ("a2", "A2 surface singularity", include_str!("../../../fixtures/a2.graph")),
    ("a3", "A3 surface singularity", include_str!("../../../fixtures/a3.graph")),
    ("a4", "A4 surface singularity", include_str!("../../../fixtures/a4.graph")),
    ("a5", "A5 surface singularity", include_str!("../../../fixtures/a5.graph")),
    ("a6", "A6 surface singularity", include_str!("../../../fixtures/a6.graph")),
];

/// Every shipped fixture, in a fixed order.
pub fn all() -> Vec<Fixture> {
    SOURCES
        .iter()
        .map(|&(name, description, text)| Fixture {
            name,
            description,
            graph: parse_graph(text).expect("shipped fixture parses"),
        })
        .collect()
}

/// Source text of a fixture by name.
pub fn source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|s| s.0 == name).map(|s| s.2)
}

pub fn get(name: &str) -> Option<ResolutionGraph> {
    source(name).map(|t| parse_graph(t).expect("shipped fixture parses"))
}

pub fn veronese(n: u32) -> ResolutionGraph {
    ResolutionGraph::veronese(n)
}

pub fn a_chain(k: usize) -> ResolutionGraph {
    ResolutionGraph::a_chain(k)
}

pub fn g32() -> ResolutionGraph {
    get("g32").unwrap()
}

pub fn fig2() -> ResolutionGraph {
    get("fig2").unwrap()
}

pub fn note() -> ResolutionGraph {
    get("note").unwrap()
}

pub fn join() -> ResolutionGraph {
    get("join").unwrap()
}
