//! δ of the generic polar curve by the Scott deformation recursion.
//!
//! A minimal singularity deforms into a cone over the rational normal curve
//! of degree `mult` plus its Tyurina components, recursively; δ is additive
//! over the pieces.

use serde::Serialize;
use thiserror::Error;

use crate::graph::ResolutionGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScottTree {
    pub degree: u64,
    pub children: Vec<ScottTree>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("cone degree must be positive")]
pub struct NonPositiveDegree;

pub fn scott_tree(g: &ResolutionGraph) -> ScottTree {
    ScottTree {
        degree: g.multiplicity(),
        children: g.tyurina_components().iter().map(scott_tree).collect(),
    }
}

/// δ of `2m - 2` generic lines through the origin of the plane projection of
/// the cone's polar.
pub fn delta_generic_lines(m: u64) -> Result<u64, NonPositiveDegree> {
    match m {
        0 => Err(NonPositiveDegree),
        1 => Ok(0),
        2 => Ok(1),
        m => Ok(3 * m - 6),
    }
}

pub fn scott_delta(g: &ResolutionGraph) -> u64 {
    scott_tree(g).delta()
}

impl ScottTree {
    pub fn delta(&self) -> u64 {
        delta_generic_lines(self.degree).expect("node degree of a valid graph is positive")
            + self.children.iter().map(ScottTree::delta).sum::<u64>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(ScottTree::depth).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(ScottTree::node_count).sum::<usize>()
    }

    pub fn leaf_count(&self) -> usize {
        if self.children.is_empty() {
            1
        } else {
            self.children.iter().map(ScottTree::leaf_count).sum()
        }
    }

    /// Node degrees in preorder.
    pub fn degrees(&self) -> Vec<u64> {
        let mut out = vec![self.degree];
        for c in &self.children {
            out.extend(c.degrees());
        }
        out
    }

    /// Bracket notation, e.g. `[4,[3,[3]],[2]]`.
    pub fn compact(&self) -> String {
        let mut s = format!("[{}", self.degree);
        for c in &self.children {
            s.push(',');
            s.push_str(&c.compact());
        }
        s.push(']');
        s
    }

    /// One line per node, indented by depth, with its δ contribution.
    pub fn trace(&self) -> String {
        let mut out = String::new();
        self.trace_into(0, &mut out);
        out.push_str(&format!("total delta {}\n", self.delta()));
        out
    }

    fn trace_into(&self, depth: usize, out: &mut String) {
        let own = delta_generic_lines(self.degree).unwrap_or(0);
        out.push_str(&format!(
            "{}cone degree {} -> {} lines, delta {}\n",
            "  ".repeat(depth),
            self.degree,
            2 * self.degree.saturating_sub(1),
            own
        ));
        for c in &self.children {
            c.trace_into(depth + 1, out);
        }
    }
}
