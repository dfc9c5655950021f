//! Limit equivalences, limit trees and their `(l, ρ)` data.
//!
//! A limit assignment ties every vertex of height `s >= 2` to one neighbor of
//! height `s - 1`. Following parents down to height one partitions the graph
//! into classes, one per tangent-cone vertex; the quotient is the limit tree.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{ResolutionGraph, VertexId};

/// Enumeration stops at this many assignments; larger sets are sampled.
pub const ASSIGNMENT_CAP: usize = 10_000;

/// `parent[v]` is `None` exactly for height-one vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LimitAssignment {
    pub parent: Vec<Option<VertexId>>,
}

/// Neighbors one step lower, per vertex; empty at height one.
pub fn parent_candidates(g: &ResolutionGraph) -> Vec<Vec<VertexId>> {
    let heights = g.heights();
    g.vertices()
        .map(|v| {
            if heights[v] <= 1 {
                Vec::new()
            } else {
                g.neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&u| heights[u] + 1 == heights[v])
                    .collect()
            }
        })
        .collect()
}

/// Size of the full product of parent choices, saturating.
pub fn assignment_count(g: &ResolutionGraph) -> u128 {
    parent_candidates(g)
        .iter()
        .filter(|c| !c.is_empty())
        .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
}

fn build(candidates: &[Vec<VertexId>], choice: &[usize]) -> LimitAssignment {
    LimitAssignment {
        parent: candidates
            .iter()
            .zip(choice)
            .map(|(c, &i)| c.get(i).copied())
            .collect(),
    }
}

/// Every limit assignment, in lexicographic order of candidate indices.
pub fn limit_assignments(g: &ResolutionGraph) -> Vec<LimitAssignment> {
    let candidates = parent_candidates(g);
    let free: Vec<usize> = g.vertices().filter(|&v| !candidates[v].is_empty()).collect();
    let mut choice = vec![0usize; g.vertex_count()];
    let mut out = Vec::new();
    loop {
        out.push(build(&candidates, &choice));
        let mut k = free.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            let v = free[k];
            choice[v] += 1;
            if choice[v] < candidates[v].len() {
                break;
            }
            choice[v] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentSet {
    pub assignments: Vec<LimitAssignment>,
    /// Size of the full product (saturating).
    pub total: u128,
    /// True when `assignments` is a seeded sample rather than the full set.
    pub sampled: bool,
}

/// All assignments when there are at most `cap`; otherwise the first
/// assignment plus a deterministic seeded sample, deduplicated and sorted.
pub fn enumerate_assignments(g: &ResolutionGraph, cap: usize, seed: u64) -> AssignmentSet {
    let total = assignment_count(g);
    if total <= cap as u128 {
        return AssignmentSet {
            assignments: limit_assignments(g),
            total,
            sampled: false,
        };
    }
    let candidates = parent_candidates(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = BTreeSet::new();
    set.insert(build(&candidates, &vec![0; g.vertex_count()]));
    for _ in 1..cap {
        let choice: Vec<usize> = candidates
            .iter()
            .map(|c| if c.len() > 1 { rng.random_range(0..c.len()) } else { 0 })
            .collect();
        set.insert(build(&candidates, &choice));
    }
    AssignmentSet {
        assignments: set.into_iter().collect(),
        total,
        sampled: true,
    }
}

/// Abstract `(T, l, ρ)` data: a tree on named nodes, a length per edge and an
/// overlap per pair of edges sharing a node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitTreeData {
    pub nodes: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub lengths: Vec<usize>,
    /// Keyed by `(i, j)` with `i < j` edge indices; the pivot is their shared node.
    pub overlaps: BTreeMap<(usize, usize), usize>,
}

impl LimitTreeData {
    /// The node shared by two distinct edges, if any.
    pub fn pivot(&self, i: usize, j: usize) -> Option<usize> {
        let (a, b) = self.edges[i];
        let (c, d) = self.edges[j];
        [a, b].into_iter().find(|&x| x == c || x == d)
    }

    /// The end of edge `e` that is not `z`.
    pub fn other_end(&self, e: usize, z: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == z {
            b
        } else {
            a
        }
    }

    pub fn overlap(&self, i: usize, j: usize) -> Option<usize> {
        self.overlaps.get(&(i.min(j), i.max(j))).copied()
    }

    fn incident(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.nodes.len()];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            inc[a].push(e);
            inc[b].push(e);
        }
        inc
    }

    /// Edge indices along the tree path from edge `i` to edge `j`, both included.
    pub fn edge_path(&self, i: usize, j: usize) -> Vec<usize> {
        if i == j {
            return vec![i];
        }
        let inc = self.incident();
        // BFS over edges; two edges are adjacent when they share a node.
        let mut prev = vec![usize::MAX; self.edges.len()];
        prev[i] = i;
        let mut queue = std::collections::VecDeque::from([i]);
        while let Some(e) = queue.pop_front() {
            if e == j {
                break;
            }
            let (a, b) = self.edges[e];
            for z in [a, b] {
                for &f in &inc[z] {
                    if prev[f] == usize::MAX {
                        prev[f] = e;
                        queue.push_back(f);
                    }
                }
            }
        }
        let mut path = vec![j];
        let mut e = j;
        while e != i {
            e = prev[e];
            path.push(e);
        }
        path.reverse();
        path
    }

    /// Contact between the A-curves of two tree edges: the overlap when they
    /// share a node, otherwise the minimum overlap of consecutive edges along
    /// the path between them. The diagonal carries the edge length.
    #[allow(clippy::needless_range_loop)]
    pub fn edge_contacts(&self) -> Vec<Vec<usize>> {
        let n = self.edges.len();
        let mut c = vec![vec![0; n]; n];
        for i in 0..n {
            c[i][i] = self.lengths[i];
            for j in i + 1..n {
                let path = self.edge_path(i, j);
                let v = path
                    .windows(2)
                    .map(|w| self.overlap(w[0], w[1]).expect("overlap of adjacent edges"))
                    .min()
                    .expect("distinct edges");
                c[i][j] = v;
                c[j][i] = v;
            }
        }
        c
    }
}

/// A quotient of a graph under one limit assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitTree {
    /// Height-one representative of each class, in vertex order.
    pub reps: Vec<VertexId>,
    /// `classes[i]` is the class of `reps[i]`.
    pub classes: Vec<BTreeSet<VertexId>>,
    pub data: LimitTreeData,
}

/// Quotient of `g` by `a`. Lengths and overlaps are measured on `g` between
/// the height-one representatives.
pub fn quotient(g: &ResolutionGraph, a: &LimitAssignment) -> LimitTree {
    let root = |mut v: VertexId| {
        while let Some(p) = a.parent[v] {
            v = p;
        }
        v
    };
    let reps: Vec<VertexId> = g.vertices().filter(|&v| a.parent[v].is_none()).collect();
    let slot: BTreeMap<VertexId, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let class_of: Vec<usize> = g.vertices().map(|v| slot[&root(v)]).collect();
    let mut classes = vec![BTreeSet::new(); reps.len()];
    for v in g.vertices() {
        classes[class_of[v]].insert(v);
    }
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|&&(x, y)| class_of[x] != class_of[y])
        .map(|&(x, y)| {
            let (i, j) = (class_of[x], class_of[y]);
            (i.min(j), i.max(j))
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let lengths = edges
        .iter()
        .map(|&(i, j)| g.chain_length(reps[i], reps[j]))
        .collect();
    let mut data = LimitTreeData {
        nodes: reps.iter().map(|&r| g.name(r).to_string()).collect(),
        edges,
        lengths,
        overlaps: BTreeMap::new(),
    };
    for i in 0..data.edges.len() {
        for j in i + 1..data.edges.len() {
            if let Some(z) = data.pivot(i, j) {
                let x = data.other_end(i, z);
                let y = data.other_end(j, z);
                data.overlaps
                    .insert((i, j), g.overlap(reps[x], reps[y], reps[z]));
            }
        }
    }
    LimitTree { reps, classes, data }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("limit tree needs at least one edge")]
    NoEdges,
    #[error("node name `{0}` is not a valid vertex name")]
    BadName(String),
    #[error("duplicate node name `{0}`")]
    DuplicateNode(String),
    #[error("edges do not form a tree on the nodes")]
    NotATree,
    #[error("edge {0} has length {1}, below 2")]
    ShortEdge(usize, usize),
    #[error("missing overlap for edges {0} and {1}")]
    MissingOverlap(usize, usize),
    #[error("overlap given for edges {0} and {1}, which share no node")]
    StrayOverlap(usize, usize),
    #[error("overlap {rho} of edges {i} and {j} is outside 1..={max}")]
    OverlapRange { i: usize, j: usize, rho: usize, max: usize },
    #[error("prefix condition fails at `{node}`: edges {a}, {b}, {c} have overlaps {ab}, {bc}, {ac}")]
    Prefix {
        node: String,
        a: usize,
        b: usize,
        c: usize,
        ab: usize,
        bc: usize,
        ac: usize,
    },
    #[error("merged chains do not form a tree")]
    NotRealizable,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check(data: &LimitTreeData) -> Result<(), ReconstructError> {
    if data.edges.is_empty() {
        return Err(ReconstructError::NoEdges);
    }
    let mut seen = BTreeSet::new();
    for n in &data.nodes {
        if !valid_name(n) {
            return Err(ReconstructError::BadName(n.clone()));
        }
        if !seen.insert(n) {
            return Err(ReconstructError::DuplicateNode(n.clone()));
        }
    }
    let n = data.nodes.len();
    if data.edges.len() + 1 != n || data.edges.iter().any(|&(a, b)| a >= n || b >= n || a == b) {
        return Err(ReconstructError::NotATree);
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for &(a, b) in &data.edges {
        if find(&mut parent, a) == find(&mut parent, b) {
            return Err(ReconstructError::NotATree);
        }
        union(&mut parent, a, b);
    }
    for (e, &l) in data.lengths.iter().enumerate() {
        if l < 2 {
            return Err(ReconstructError::ShortEdge(e, l));
        }
    }
    for &(i, j) in data.overlaps.keys() {
        if i >= j || j >= data.edges.len() || data.pivot(i, j).is_none() {
            return Err(ReconstructError::StrayOverlap(i, j));
        }
    }
    let inc = data.incident();
    for (z, edges) in inc.iter().enumerate() {
        for (p, &i) in edges.iter().enumerate() {
            for &j in &edges[p + 1..] {
                let rho = data.overlap(i, j).ok_or(ReconstructError::MissingOverlap(i, j))?;
                let max = data.lengths[i].min(data.lengths[j]);
                if rho < 1 || rho > max {
                    return Err(ReconstructError::OverlapRange { i, j, rho, max });
                }
            }
        }
        for (p, &a) in edges.iter().enumerate() {
            for (q, &b) in edges.iter().enumerate().skip(p + 1) {
                for &c in &edges[q + 1..] {
                    let (ab, bc, ac) = (
                        data.overlap(a, b).unwrap(),
                        data.overlap(b, c).unwrap(),
                        data.overlap(a, c).unwrap(),
                    );
                    let mut v = [ab, bc, ac];
                    v.sort_unstable();
                    // ultrametric: the two smallest coincide
                    if v[0] != v[1] {
                        return Err(ReconstructError::Prefix {
                            node: data.nodes[z].clone(),
                            a,
                            b,
                            c,
                            ab,
                            bc,
                            ac,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Rebuilds the reduced graph from `(T, l, ρ)`.
///
/// One chain of `l` vertices is laid along each tree edge; at every node the
/// first `ρ` vertices of two incident chains are identified. Tree nodes get
/// weight `v + 1`, fresh vertices weight `v`.
pub fn reconstruct(data: &LimitTreeData) -> Result<ResolutionGraph, ReconstructError> {
    check(data)?;
    let n = data.nodes.len();
    // slot ids: nodes first, then interior chain positions per edge
    let mut offsets = Vec::with_capacity(data.edges.len());
    let mut next = n;
    for &l in &data.lengths {
        offsets.push(next);
        next += l - 2;
    }
    let slot = |e: usize, k: usize| -> usize {
        let (a, b) = data.edges[e];
        let l = data.lengths[e];
        if k == 0 {
            a
        } else if k == l - 1 {
            b
        } else {
            offsets[e] + k - 1
        }
    };
    let from = |e: usize, z: usize, k: usize| -> usize {
        if data.edges[e].0 == z {
            slot(e, k)
        } else {
            slot(e, data.lengths[e] - 1 - k)
        }
    };
    let mut parent: Vec<usize> = (0..next).collect();
    for (&(i, j), &rho) in &data.overlaps {
        let z = data.pivot(i, j).unwrap();
        for k in 0..rho {
            union(&mut parent, from(i, z, k), from(j, z, k));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if find(&mut parent, a) == find(&mut parent, b) {
                return Err(ReconstructError::NotRealizable);
            }
        }
    }
    let mut links = BTreeSet::new();
    for e in 0..data.edges.len() {
        for k in 0..data.lengths[e] - 1 {
            let (x, y) = (find(&mut parent, slot(e, k)), find(&mut parent, slot(e, k + 1)));
            if x == y {
                return Err(ReconstructError::NotRealizable);
            }
            links.insert((x.min(y), x.max(y)));
        }
    }
    let reps: BTreeSet<usize> = (0..next).map(|s| find(&mut parent, s)).collect();
    let taken: BTreeSet<&str> = data.nodes.iter().map(String::as_str).collect();
    let mut names: BTreeMap<usize, String> = BTreeMap::new();
    for &r in &reps {
        let name = if r < n {
            data.nodes[r].clone()
        } else {
            let e = offsets.iter().rposition(|&o| o <= r).unwrap();
            let mut name = format!("c{}_{}", e, r - offsets[e] + 1);
            while taken.contains(name.as_str()) {
                name.insert(0, '_');
            }
            name
        };
        names.insert(r, name);
    }
    if links.len() + 1 != reps.len() {
        return Err(ReconstructError::NotRealizable);
    }
    let mut valence: BTreeMap<usize, u32> = BTreeMap::new();
    for &(x, y) in &links {
        *valence.entry(x).or_default() += 1;
        *valence.entry(y).or_default() += 1;
    }
    let vertices: Vec<(&str, u32)> = reps
        .iter()
        .map(|&r| {
            let v = valence.get(&r).copied().unwrap_or(0);
            (names[&r].as_str(), if r < n { v + 1 } else { v })
        })
        .collect();
    let edges: Vec<(&str, &str)> = links
        .iter()
        .map(|&(x, y)| (names[&x].as_str(), names[&y].as_str()))
        .collect();
    let g = ResolutionGraph::new(&vertices, &edges).map_err(|_| ReconstructError::NotRealizable)?;
    if !g.is_tree() || !g.is_valid_minimal() {
        return Err(ReconstructError::NotRealizable);
    }
    Ok(g)
}

#[derive(Serialize)]
struct EdgeJson<'a> {
    x: &'a str,
    y: &'a str,
    l: usize,
}

#[derive(Serialize)]
struct OverlapJson<'a> {
    x: &'a str,
    y: &'a str,
    z: &'a str,
    rho: usize,
}

#[derive(Serialize)]
struct TreeJson<'a> {
    classes: BTreeMap<&'a str, Vec<&'a str>>,
    edges: Vec<EdgeJson<'a>>,
    overlaps: Vec<OverlapJson<'a>>,
}

impl LimitTree {
    pub fn to_json(&self, g: &ResolutionGraph) -> serde_json::Value {
        let d = &self.data;
        let node = |i: usize| d.nodes[i].as_str();
        let tree = TreeJson {
            classes: self
                .classes
                .iter()
                .enumerate()
                .map(|(i, c)| (node(i), c.iter().map(|&v| g.name(v)).collect()))
                .collect(),
            edges: d
                .edges
                .iter()
                .zip(&d.lengths)
                .map(|(&(x, y), &l)| EdgeJson { x: node(x), y: node(y), l })
                .collect(),
            overlaps: d
                .overlaps
                .iter()
                .map(|(&(i, j), &rho)| {
                    let z = d.pivot(i, j).unwrap();
                    let (x, y) = (d.other_end(i, z), d.other_end(j, z));
                    let (x, y) = (node(x).min(node(y)), node(x).max(node(y)));
                    OverlapJson { x, y, z: node(z), rho }
                })
                .collect(),
        };
        serde_json::to_value(tree).expect("plain data")
    }
}
