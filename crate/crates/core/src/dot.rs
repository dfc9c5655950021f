//! Graphviz exports. Output is deterministic: nodes and edges follow vertex
//! and edge order of the inputs.

use std::fmt::Write;

use crate::graph::{Reduction, ResolutionGraph};
use crate::limit_tree::{limit_assignments, quotient};
use crate::scott::ScottTree;

/// Nodes labeled `name:w=..,s=..`; tangent-cone vertices drawn as stars.
pub fn graph_dot(g: &ResolutionGraph) -> String {
    let h = g.heights();
    let mut out = String::from("graph resolution {\n");
    for v in g.vertices() {
        let shape = if g.is_tc(v) { "star" } else { "ellipse" };
        writeln!(
            out,
            "  \"{0}\" [label=\"{0}:w={1},s={2}\", shape={shape}];",
            g.name(v),
            g.weight(v),
            h[v]
        )
        .unwrap();
    }
    for &(a, b) in g.edges() {
        writeln!(out, "  \"{}\" -- \"{}\";", g.name(a), g.name(b)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Limit tree of the reduced graph under the first assignment. Edges carry
/// `l=<length>`; overlaps are listed as comments `// rho(x,y;z) = n`.
pub fn limit_tree_dot(g: &ResolutionGraph) -> String {
    let mut out = String::from("graph limit_tree {\n");
    match g.reduce() {
        Reduction::Smooth => out.push_str("  // reduces to a smooth point\n"),
        Reduction::Reduced(r) => {
            let a = limit_assignments(&r).into_iter().next().expect("at least one assignment");
            let d = quotient(&r, &a).data;
            for n in &d.nodes {
                writeln!(out, "  \"{n}\" [shape=star];").unwrap();
            }
            for (&(x, y), l) in d.edges.iter().zip(&d.lengths) {
                writeln!(out, "  \"{}\" -- \"{}\" [label=\"l={l}\"];", d.nodes[x], d.nodes[y]).unwrap();
            }
            for (&(i, j), rho) in &d.overlaps {
                let z = d.pivot(i, j).unwrap();
                let mut ends = [&d.nodes[d.other_end(i, z)], &d.nodes[d.other_end(j, z)]];
                ends.sort();
                writeln!(out, "  // rho({},{};{}) = {rho}", ends[0], ends[1], d.nodes[z]).unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Scott tree, nodes `n0, n1, ...` in preorder, labeled by cone degree.
pub fn scott_dot(t: &ScottTree) -> String {
    fn walk(t: &ScottTree, next: &mut usize, out: &mut String) -> usize {
        let id = *next;
        *next += 1;
        writeln!(out, "  n{id} [label=\"{}\"];", t.degree).unwrap();
        for c in &t.children {
            let cid = walk(c, next, out);
            writeln!(out, "  n{id} -> n{cid};").unwrap();
        }
        id
    }
    let mut out = String::from("digraph scott {\n");
    walk(t, &mut 0, &mut out);
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scott::scott_tree;

    #[test]
    fn fig2_graph() {
        let d = graph_dot(&fixtures::fig2());
        assert_eq!(d.matches("label=").count(), 9);
        assert_eq!(d.matches(" -- ").count(), 8);
        assert_eq!(d.matches("shape=star").count(), 4);
    }

    #[test]
    fn note_limit_tree_is_a_star() {
        let d = limit_tree_dot(&fixtures::note());
        let mut labels: Vec<&str> = d.lines().filter_map(|l| l.split("label=\"l=").nth(1)).map(|s| &s[..1]).collect();
        labels.sort_unstable();
        assert_eq!(labels, ["3", "4", "5"]);
        assert_eq!(d.matches("// rho(").count(), 3);
    }

    #[test]
    fn veronese_scott_is_one_node() {
        let d = scott_dot(&scott_tree(&fixtures::veronese(4)));
        assert_eq!(d, "digraph scott {\n  n0 [label=\"4\"];\n}\n");
    }

    #[test]
    fn join_scott_edges() {
        let d = scott_dot(&scott_tree(&fixtures::join()));
        assert_eq!(d.matches(" -> ").count(), 3);
    }
}
