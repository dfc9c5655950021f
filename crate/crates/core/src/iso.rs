//! Isomorphism of weighted trees via AHU canonical strings rooted at the center.

use crate::graph::{ResolutionGraph, VertexId};

fn rooted_code(g: &ResolutionGraph, v: VertexId, parent: Option<VertexId>) -> String {
    let mut children: Vec<String> = g
        .neighbors(v)
        .iter()
        .filter(|&&u| Some(u) != parent)
        .map(|&u| rooted_code(g, u, Some(v)))
        .collect();
    children.sort();
    format!("({}{})", g.weight(v), children.concat())
}

/// The one or two centers of a tree, found by peeling leaves.
fn centers(g: &ResolutionGraph) -> Vec<VertexId> {
    let n = g.vertex_count();
    if n <= 2 {
        return g.vertices().collect();
    }
    let mut degree: Vec<usize> = g.vertices().map(|v| g.neighbors(v).len()).collect();
    let mut layer: Vec<VertexId> = g.vertices().filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            for &u in g.neighbors(leaf) {
                degree[u] -= 1;
                if degree[u] == 1 {
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

/// A string equal for two weighted trees exactly when they are isomorphic
/// (vertex names are ignored). Requires `g` to be a tree.
pub fn canonical_form(g: &ResolutionGraph) -> String {
    assert!(g.is_tree(), "canonical form is only defined for trees");
    centers(g)
        .into_iter()
        .map(|c| rooted_code(g, c, None))
        .min()
        .unwrap_or_default()
}

pub fn isomorphic(a: &ResolutionGraph, b: &ResolutionGraph) -> bool {
    a.vertex_count() == b.vertex_count() && canonical_form(a) == canonical_form(b)
}
