//! Equisingularity type of the generic polar curve: line bunches, A_n curves
//! and their contact matrix.
//!
//! Components are indexed lines first (bunch by bunch), then curves. Contact
//! is stored per component pair; the diagonal is 0. Inside an `A_{2q-1}` the
//! two branches have contact `q`, and across components every branch pair has
//! the component contact.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cycles;
use crate::error::CrossCheckError;
use crate::graph::{Reduction, ResolutionGraph, VertexId};
use crate::limit_tree::{limit_assignments, quotient, LimitTreeData};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Site {
    /// Central vertex; carries `A_{2s-1}` curves.
    Vertex { vertex: String },
    /// Central arc; carries one `A_{2s}`.
    Arc { x: String, y: String },
    /// Edge of a limit tree between two tangent-cone vertices.
    LimitEdge { x: String, y: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AnCurve {
    pub n: u32,
    pub site: Site,
    pub site_height: u32,
}

impl AnCurve {
    /// `q` with `n = 2q - 1` or `n = 2q`.
    pub fn q(&self) -> u32 {
        self.n.div_ceil(2)
    }

    pub fn is_even(&self) -> bool {
        self.n.is_multiple_of(2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Bunch {
    pub vertex: String,
    pub m: u32,
    pub lines: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarType {
    pub bunches: Vec<Bunch>,
    pub curves: Vec<AnCurve>,
    /// Symmetric, over all components (each line is one component).
    pub contacts: Vec<Vec<u32>>,
    pub delta: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component<'a> {
    Line(&'a Bunch),
    Curve(&'a AnCurve),
}

fn bunches(g: &ResolutionGraph) -> Vec<Bunch> {
    g.tc_vertices()
        .into_iter()
        .map(|v| (g.name(v).to_string(), g.cone_degree(v) as u32))
        .filter(|&(_, m)| m >= 2)
        .map(|(vertex, m)| Bunch { vertex, m, lines: 2 * m - 2 })
        .collect()
}

/// Full component contact matrix from the curve-curve block.
fn with_lines(line_count: usize, curve_contacts: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = line_count + curve_contacts.len();
    let mut c = vec![vec![1; n]; n];
    for (i, row) in curve_contacts.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            c[line_count + i][line_count + j] = v;
        }
    }
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 0;
    }
    c
}

/// Type from one limit tree of the reduced graph (the first assignment).
pub fn assemble_from_limit_tree(g: &ResolutionGraph) -> PolarType {
    match g.reduce() {
        Reduction::Smooth => from_parts(bunches(g), Vec::new(), Vec::new()),
        Reduction::Reduced(r) => {
            let a = limit_assignments(&r).into_iter().next().expect("at least one assignment");
            assemble_from_tree_data(g, &quotient(&r, &a).data)
        }
    }
}

/// Type from explicit `(T, l, ρ)` data of the reduced graph of `g`.
pub fn assemble_from_tree_data(g: &ResolutionGraph, data: &LimitTreeData) -> PolarType {
    let curves = data
        .edges
        .iter()
        .zip(&data.lengths)
        .map(|(&(x, y), &l)| AnCurve {
            n: l as u32,
            site: Site::LimitEdge {
                x: data.nodes[x].clone(),
                y: data.nodes[y].clone(),
            },
            site_height: (l as u32).div_ceil(2),
        })
        .collect();
    let contacts = data
        .edge_contacts()
        .into_iter()
        .map(|row| row.into_iter().map(|c| c as u32).collect())
        .collect();
    from_parts(bunches(g), curves, contacts)
}

fn from_parts(bunches: Vec<Bunch>, curves: Vec<AnCurve>, curve_contacts: Vec<Vec<u32>>) -> PolarType {
    let lines: u32 = bunches.iter().map(|b| b.lines).sum();
    PolarType {
        contacts: with_lines(lines as usize, &curve_contacts),
        bunches,
        curves,
        delta: None,
    }
}

/// Type from branch counts, heights and central elements.
pub fn assemble_from_heights(g: &ResolutionGraph) -> Result<PolarType, CrossCheckError> {
    let counts = cycles::branch_counts(g)?;
    let heights = g.heights();
    let (central_vertices, central_arcs) = g.central_elements(&heights);
    let mut sites: Vec<(AnCurve, VertexId)> = Vec::new();
    for &(x, y) in &central_arcs {
        sites.push((
            AnCurve {
                n: 2 * heights[x],
                site: Site::Arc {
                    x: g.name(x).to_string(),
                    y: g.name(y).to_string(),
                },
                site_height: heights[x],
            },
            x,
        ));
    }
    for v in g.vertices() {
        let arcs = central_arcs.iter().filter(|&&(a, b)| a == v || b == v).count() as i64;
        let lines = if g.is_tc(v) { 2 * g.cone_degree(v) - 2 } else { 0 };
        let rem = counts[v] as i64 - arcs - lines;
        let fail = |detail: String| CrossCheckError::Pairing {
            vertex: g.name(v).to_string(),
            detail,
        };
        if rem < 0 || rem % 2 != 0 {
            return Err(fail(format!(
                "{} branches, {arcs} on arcs, {lines} lines leaves {rem}",
                counts[v]
            )));
        }
        if rem == 0 {
            continue;
        }
        if heights[v] < 2 || central_vertices.binary_search(&v).is_err() {
            return Err(fail(format!("{rem} unpaired branches at a non-central vertex")));
        }
        for _ in 0..rem / 2 {
            sites.push((
                AnCurve {
                    n: 2 * heights[v] - 1,
                    site: Site::Vertex {
                        vertex: g.name(v).to_string(),
                    },
                    site_height: heights[v],
                },
                v,
            ));
        }
    }
    let k = sites.len();
    let mut curve_contacts = vec![vec![0; k]; k];
    for i in 0..k {
        curve_contacts[i][i] = sites[i].0.n;
        for j in i + 1..k {
            let c = g
                .chain(sites[i].1, sites[j].1)
                .into_iter()
                .map(|v| heights[v])
                .min()
                .unwrap();
            curve_contacts[i][j] = c;
            curve_contacts[j][i] = c;
        }
    }
    Ok(from_parts(
        bunches(g),
        sites.into_iter().map(|s| s.0).collect(),
        curve_contacts,
    ))
}

impl PolarType {
    pub fn line_count(&self) -> usize {
        self.bunches.iter().map(|b| b.lines as usize).sum()
    }

    pub fn component_count(&self) -> usize {
        self.line_count() + self.curves.len()
    }

    pub fn component(&self, i: usize) -> Component<'_> {
        let mut k = i;
        for b in &self.bunches {
            if k < b.lines as usize {
                return Component::Line(b);
            }
            k -= b.lines as usize;
        }
        Component::Curve(&self.curves[k])
    }

    pub fn contact(&self, i: usize, j: usize) -> u32 {
        self.contacts[i][j]
    }

    /// Contact between curves `i` and `j` (curve indices).
    pub fn curve_contact(&self, i: usize, j: usize) -> u32 {
        let l = self.line_count();
        self.contacts[l + i][l + j]
    }

    /// `Σ lines + 2·#curves`.
    pub fn polar_multiplicity(&self) -> u64 {
        self.line_count() as u64 + 2 * self.curves.len() as u64
    }

    /// Checks `polar_multiplicity = 2m - 2`.
    pub fn check_multiplicity(&self, multiplicity: u64) -> Result<(), CrossCheckError> {
        let expected = 2 * multiplicity - 2;
        if self.polar_multiplicity() == expected {
            Ok(())
        } else {
            Err(CrossCheckError::PolarMultiplicity {
                found: self.polar_multiplicity(),
                expected,
            })
        }
    }

    /// `contact(i,k) >= min(contact(i,j), contact(j,k))` over distinct triples.
    pub fn is_ultrametric(&self) -> bool {
        is_ultrametric(&self.contacts)
    }

    /// Line contacts are 1 and curve contacts do not exceed either site height.
    pub fn respects_bounds(&self) -> bool {
        let l = self.line_count();
        let n = self.component_count();
        (0..n).all(|i| {
            (0..n).filter(|&j| j != i).all(|j| {
                let c = self.contacts[i][j];
                if i < l || j < l {
                    c == 1
                } else {
                    let (a, b) = (&self.curves[i - l], &self.curves[j - l]);
                    c >= 1 && c <= a.site_height.min(b.site_height)
                }
            })
        })
    }

    /// Branch counts implied by the sites, per vertex of `g`.
    pub fn expected_branch_counts(&self, g: &ResolutionGraph) -> Vec<u64> {
        let mut counts = vec![0u64; g.vertex_count()];
        let id = |n: &str| g.index_of(n).expect("site names a vertex of the graph");
        for b in &self.bunches {
            counts[id(&b.vertex)] += b.lines as u64;
        }
        for c in &self.curves {
            match &c.site {
                Site::Vertex { vertex } => counts[id(vertex)] += 2,
                Site::Arc { x, y } => {
                    counts[id(x)] += 1;
                    counts[id(y)] += 1;
                }
                Site::LimitEdge { x, y } => {
                    let chain = g.chain(id(x), id(y));
                    let l = chain.len();
                    if l % 2 == 1 {
                        counts[chain[l / 2]] += 2;
                    } else {
                        counts[chain[l / 2 - 1]] += 1;
                        counts[chain[l / 2]] += 1;
                    }
                }
            }
        }
        counts
    }

    /// Same type with components in canonical order.
    pub fn canonicalize(&self) -> PolarType {
        let mut border: Vec<usize> = (0..self.bunches.len()).collect();
        border.sort_by(|&a, &b| {
            let (x, y) = (&self.bunches[a], &self.bunches[b]);
            (y.m, &x.vertex).cmp(&(x.m, &y.vertex))
        });
        let bunches: Vec<Bunch> = border.iter().map(|&i| self.bunches[i].clone()).collect();
        let corder = curve_order(&self.curves, &self.curve_block());
        let curves: Vec<AnCurve> = corder.iter().map(|&i| self.curves[i].clone()).collect();
        let block = self.curve_block();
        let curve_contacts: Vec<Vec<u32>> = corder
            .iter()
            .map(|&i| corder.iter().map(|&j| block[i][j]).collect())
            .collect();
        PolarType {
            delta: self.delta,
            ..from_parts(bunches, curves, curve_contacts)
        }
    }

    /// Curve-curve contacts with `n` on the diagonal.
    fn curve_block(&self) -> Vec<Vec<u32>> {
        let l = self.line_count();
        (0..self.curves.len())
            .map(|i| {
                (0..self.curves.len())
                    .map(|j| {
                        if i == j {
                            self.curves[i].n
                        } else {
                            self.contacts[l + i][l + j]
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Name-independent key: equal exactly for equisingular types.
    pub fn canonical_key(&self) -> String {
        let mut ms: Vec<u32> = self.bunches.iter().map(|b| b.m).collect();
        ms.sort_unstable_by(|a, b| b.cmp(a));
        let block = self.curve_block();
        let curves = if is_ultrametric(&block) {
            dendrogram(&block, &(0..block.len()).collect::<Vec<_>>()).0
        } else {
            let order = curve_order(&self.curves, &block);
            let rows: Vec<Vec<u32>> = order
                .iter()
                .map(|&i| order.iter().map(|&j| block[i][j]).collect())
                .collect();
            format!("{rows:?}")
        };
        format!("bunches{ms:?};curves{curves}")
    }

    pub fn equals(&self, other: &PolarType) -> bool {
        self.canonical_key() == other.canonical_key()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Json<'a> {
            bunches: &'a [Bunch],
            curves: &'a [AnCurve],
            contacts: &'a [Vec<u32>],
            polar_multiplicity: u64,
            delta: Option<u64>,
        }
        serde_json::to_value(Json {
            bunches: &self.bunches,
            curves: &self.curves,
            contacts: &self.contacts,
            polar_multiplicity: self.polar_multiplicity(),
            delta: self.delta,
        })
        .expect("plain data")
    }
}

fn is_ultrametric(c: &[Vec<u32>]) -> bool {
    let n = c.len();
    (0..n).all(|i| {
        (0..n).filter(|&j| j != i).all(|j| {
            (0..n)
                .filter(|&k| k != i && k != j)
                .all(|k| c[i][k] >= c[i][j].min(c[j][k]))
        })
    })
}

/// Nested encoding of an ultrametric block restricted to `members`, and the
/// leaf order it induces. The diagonal holds `n`.
fn dendrogram(c: &[Vec<u32>], members: &[usize]) -> (String, Vec<usize>) {
    match members {
        [] => return (String::new(), Vec::new()),
        [only] => return (format!("A{}", c[*only][*only]), vec![*only]),
        _ => {}
    }
    let level = members
        .iter()
        .flat_map(|&i| members.iter().filter(move |&&j| j != i).map(move |&j| c[i][j]))
        .min()
        .unwrap();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in members {
        match groups.iter_mut().find(|g| c[g[0]][i] > level) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    let mut parts: Vec<(String, Vec<usize>)> = groups.iter().map(|g| dendrogram(c, g)).collect();
    parts.sort();
    let key = format!(
        "[{level}:{}]",
        parts.iter().map(|p| p.0.as_str()).collect::<Vec<_>>().join(",")
    );
    (key, parts.into_iter().flat_map(|p| p.1).collect())
}

/// Product of tie-class sizes above which the fallback stops permuting.
const PERMUTATION_LIMIT: usize = 40_320;

fn curve_order(curves: &[AnCurve], block: &[Vec<u32>]) -> Vec<usize> {
    let n = curves.len();
    if n == 0 {
        return Vec::new();
    }
    if is_ultrametric(block) {
        let mut order = dendrogram(block, &(0..n).collect::<Vec<_>>()).1;
        // interchangeable leaves: keep a deterministic order among equal keys
        stable_sites(curves, block, &mut order);
        return order;
    }
    // colour refinement on (n, contact profile), then exhaustive search within ties
    let mut label: Vec<usize> = {
        let keys: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut row: Vec<u32> = (0..n).filter(|&j| j != i).map(|j| block[i][j]).collect();
                row.sort_unstable();
                row.insert(0, block[i][i]);
                row
            })
            .collect();
        rank(&keys)
    };
    loop {
        let keys: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut nb: Vec<(u32, usize)> = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (block[i][j], label[j]))
                    .collect();
                nb.sort_unstable();
                let mut k = vec![label[i] as u32];
                k.extend(nb.into_iter().flat_map(|(a, b)| [a, b as u32]));
                k
            })
            .collect();
        let next = rank(&keys);
        let done = distinct(&next) == distinct(&label);
        label = next;
        if done {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (label[i], i));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match classes.last_mut() {
            Some(c) if label[c[0]] == label[i] => c.push(i),
            _ => classes.push(vec![i]),
        }
    }
    let budget: usize = classes
        .iter()
        .map(|c| (1..=c.len()).product::<usize>())
        .try_fold(1usize, |acc, f| acc.checked_mul(f))
        .unwrap_or(usize::MAX);
    if budget > PERMUTATION_LIMIT {
        return order;
    }
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    let mut search = |candidate: Vec<usize>| {
        let flat: Vec<u32> = candidate
            .iter()
            .flat_map(|&i| candidate.iter().map(move |&j| block[i][j]))
            .collect();
        if best.as_ref().is_none_or(|(b, _)| flat < *b) {
            best = Some((flat, candidate));
        }
    };
    permute_classes(&classes, 0, &mut Vec::new(), &mut search);
    best.unwrap().1
}

fn permute_classes(classes: &[Vec<usize>], k: usize, prefix: &mut Vec<usize>, visit: &mut dyn FnMut(Vec<usize>)) {
    if k == classes.len() {
        visit(prefix.clone());
        return;
    }
    let mut items = classes[k].clone();
    heap_permutations(&mut items, classes[k].len(), &mut |perm| {
        let len = prefix.len();
        prefix.extend_from_slice(perm);
        permute_classes(classes, k + 1, prefix, visit);
        prefix.truncate(len);
    });
}

fn heap_permutations(items: &mut [usize], k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        visit(items);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(items, k - 1, visit);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
    heap_permutations(items, k - 1, visit);
}

fn rank(keys: &[Vec<u32>]) -> Vec<usize> {
    let sorted: BTreeMap<&Vec<u32>, usize> = {
        let mut m = BTreeMap::new();
        for k in keys {
            m.insert(k, 0);
        }
        for (i, v) in m.values_mut().enumerate() {
            *v = i;
        }
        m
    };
    keys.iter().map(|k| sorted[k]).collect()
}

fn distinct(labels: &[usize]) -> usize {
    labels.iter().collect::<std::collections::BTreeSet<_>>().len()
}

/// Within runs of leaves whose subtrees are interchangeable, order by site.
fn stable_sites(curves: &[AnCurve], block: &[Vec<u32>], order: &mut [usize]) {
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && interchangeable(block, order, i, j) {
            j += 1;
        }
        order[i..j].sort_by(|&a, &b| curves[a].site.cmp(&curves[b].site).then(a.cmp(&b)));
        i = j;
    }
}

/// Leaves `order[i]` and `order[j]` can swap without changing the matrix.
fn interchangeable(block: &[Vec<u32>], order: &[usize], i: usize, j: usize) -> bool {
    let (a, b) = (order[i], order[j]);
    block[a][a] == block[b][b]
        && (0..order.len())
            .filter(|&k| k != i && k != j)
            .all(|k| block[a][order[k]] == block[b][order[k]])
}

/// Reads a type back from its JSON block (sites included).
pub fn from_json(v: &serde_json::Value) -> Option<PolarType> {
    let bunches = v["bunches"]
        .as_array()?
        .iter()
        .map(|b| {
            Some(Bunch {
                vertex: b["vertex"].as_str()?.to_string(),
                m: b["m"].as_u64()? as u32,
                lines: b["lines"].as_u64()? as u32,
            })
        })
        .collect::<Option<Vec<_>>>()?;
    let curves = v["curves"]
        .as_array()?
        .iter()
        .map(|c| {
            let s = &c["site"];
            let name = |k: &str| s[k].as_str().map(String::from);
            let site = match s["kind"].as_str()? {
                "vertex" => Site::Vertex { vertex: name("vertex")? },
                "arc" => Site::Arc { x: name("x")?, y: name("y")? },
                "limit_edge" => Site::LimitEdge { x: name("x")?, y: name("y")? },
                _ => return None,
            };
            Some(AnCurve {
                n: c["n"].as_u64()? as u32,
                site,
                site_height: c["site_height"].as_u64()? as u32,
            })
        })
        .collect::<Option<Vec<_>>>()?;
    let contacts = v["contacts"]
        .as_array()?
        .iter()
        .map(|r| r.as_array()?.iter().map(|x| x.as_u64().map(|x| x as u32)).collect())
        .collect::<Option<Vec<Vec<u32>>>>()?;
    Some(PolarType {
        bunches,
        curves,
        contacts,
        delta: v["delta"].as_u64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ns(pt: &PolarType) -> Vec<u32> {
        let mut v: Vec<u32> = pt.curves.iter().map(|c| c.n).collect();
        v.sort_unstable();
        v
    }

    fn contact_of(pt: &PolarType, a: u32, b: u32) -> Vec<u32> {
        let mut out = Vec::new();
        for i in 0..pt.curves.len() {
            for j in 0..pt.curves.len() {
                if i < j
                    && ((pt.curves[i].n, pt.curves[j].n) == (a, b)
                        || (pt.curves[i].n, pt.curves[j].n) == (b, a))
                {
                    out.push(pt.curve_contact(i, j));
                }
            }
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn fig2_both_routes() {
        let g = fixtures::fig2();
        for pt in [assemble_from_limit_tree(&g), assemble_from_heights(&g).unwrap()] {
            assert!(pt.bunches.is_empty());
            assert_eq!(ns(&pt), [3, 5, 5]);
            assert_eq!(contact_of(&pt, 5, 5), [3]);
            assert_eq!(contact_of(&pt, 5, 3), [1, 1]);
            assert_eq!(pt.polar_multiplicity(), 6);
            assert!(pt.is_ultrametric() && pt.respects_bounds());
        }
        assert!(assemble_from_limit_tree(&g).equals(&assemble_from_heights(&g).unwrap()));
    }

    #[test]
    fn fig2_all_assignments_agree() {
        let g = fixtures::fig2();
        let reference = assemble_from_heights(&g).unwrap();
        for a in limit_assignments(&g) {
            let pt = assemble_from_tree_data(&g, &quotient(&g, &a).data);
            assert!(pt.equals(&reference));
        }
    }

    #[test]
    fn note_type() {
        let g = fixtures::note();
        for pt in [assemble_from_limit_tree(&g), assemble_from_heights(&g).unwrap()] {
            assert_eq!(pt.bunches, [Bunch { vertex: "x1".into(), m: 3, lines: 4 }]);
            assert_eq!(ns(&pt), [3, 4, 5]);
            assert_eq!(contact_of(&pt, 5, 4), [2]);
            assert_eq!(contact_of(&pt, 5, 3), [1]);
            assert_eq!(contact_of(&pt, 4, 3), [1]);
            assert_eq!(pt.polar_multiplicity(), 10);
            pt.check_multiplicity(6).unwrap();
            for i in 0..4 {
                for j in 0..pt.component_count() {
                    if i != j {
                        assert_eq!(pt.contact(i, j), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn veronese_is_lines_only() {
        for n in 2..=8 {
            let g = fixtures::veronese(n);
            for pt in [assemble_from_limit_tree(&g), assemble_from_heights(&g).unwrap()] {
                assert!(pt.curves.is_empty());
                assert_eq!(pt.line_count() as u32, 2 * n - 2);
                assert_eq!(pt.expected_branch_counts(&g), [2 * n as u64 - 2]);
            }
        }
    }

    #[test]
    fn g32_type() {
        let g = fixtures::g32();
        let pt = assemble_from_heights(&g).unwrap();
        assert_eq!(pt.line_count(), 2);
        assert_eq!(ns(&pt), [2]);
        assert!(pt.contacts.iter().flatten().all(|&c| c <= 1));
        assert!(pt.equals(&assemble_from_limit_tree(&g)));
    }

    #[test]
    fn expected_counts() {
        let g = fixtures::fig2();
        let counts = |pt: &PolarType| -> BTreeMap<String, u64> {
            pt.expected_branch_counts(&g)
                .into_iter()
                .enumerate()
                .filter(|&(_, c)| c > 0)
                .map(|(v, c)| (g.name(v).to_string(), c))
                .collect()
        };
        let want = BTreeMap::from([("b".to_string(), 4), ("d".to_string(), 2)]);
        assert_eq!(counts(&assemble_from_heights(&g).unwrap()), want);
        assert_eq!(counts(&assemble_from_limit_tree(&g)), want);

        let g = fixtures::note();
        let pt = assemble_from_limit_tree(&g);
        let got: Vec<(String, u64)> = pt
            .expected_branch_counts(&g)
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(v, c)| (g.name(v).to_string(), c))
            .collect();
        let mut want: Vec<(String, u64)> = [("x1", 4), ("p", 1), ("q", 1), ("v", 2), ("r", 2)]
            .iter()
            .map(|&(n, c)| (n.to_string(), c))
            .collect();
        want.sort();
        assert_eq!(got, want);
        assert_eq!(pt.expected_branch_counts(&g), crate::cycles::branch_counts(&g).unwrap());
    }

    #[test]
    fn canonical_order_puts_deep_clusters_together() {
        let g = fixtures::fig2();
        let pt = assemble_from_heights(&g).unwrap().canonicalize();
        let n: Vec<u32> = pt.curves.iter().map(|c| c.n).collect();
        assert_eq!(n, [3, 5, 5]);
        assert_eq!(pt.curve_contact(1, 2), 3);
        assert_eq!(pt.canonical_key(), "bunches[];curves[1:A3,[3:A5,A5]]");
        assert_eq!(pt.canonicalize(), pt);
    }

    #[test]
    fn different_contacts_are_not_equal() {
        let g = fixtures::fig2();
        let a = assemble_from_heights(&g).unwrap();
        let mut b = a.clone();
        let l = b.line_count();
        let (i, j) = (0..b.curves.len())
            .flat_map(|i| (0..b.curves.len()).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && b.curve_contact(i, j) == 3)
            .unwrap();
        b.contacts[l + i][l + j] = 2;
        b.contacts[l + j][l + i] = 2;
        assert!(!a.equals(&b));
        assert!(a.equals(&a.clone()));
    }

    #[test]
    fn non_ultrametric_fallback_is_relabeling_invariant() {
        let curve = |n| AnCurve {
            n,
            site: Site::Vertex { vertex: "z".into() },
            site_height: 9,
        };
        let c = vec![vec![0, 1, 2, 3], vec![1, 0, 3, 1], vec![2, 3, 0, 2], vec![3, 1, 2, 0]];
        let a = from_parts(Vec::new(), (0..4).map(|_| curve(5)).collect(), c.clone());
        assert!(!a.is_ultrametric());
        let p = [2, 0, 3, 1];
        let c2: Vec<Vec<u32>> = p.iter().map(|&i| p.iter().map(|&j| c[i][j]).collect()).collect();
        let b = from_parts(Vec::new(), (0..4).map(|_| curve(5)).collect(), c2);
        assert!(a.equals(&b));
    }

    #[test]
    fn json_round_trip() {
        let pt = assemble_from_heights(&fixtures::note()).unwrap().canonicalize();
        let back = from_json(&pt.to_json()).unwrap();
        assert_eq!(back, pt);
    }
}
