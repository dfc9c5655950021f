//! Cross-module invariant suite, fuzzing and failure minimization.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::cycles::{self, RationalCycle};
use crate::gen::{case_seeds, gen_random_minimal};
use crate::graph::{Reduction, ResolutionGraph, VertexId};
use crate::iso::isomorphic;
use crate::limit_tree::{enumerate_assignments, quotient, reconstruct, ASSIGNMENT_CAP};
use crate::polar::{assemble_from_heights, assemble_from_tree_data, PolarType};
use crate::realize::{realize, verify};
use crate::scott::scott_tree;

/// Graphs up to this size are checked against the exhaustive floor oracle.
pub const ORACLE_MAX_VERTICES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub check: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub outcomes: Vec<Outcome>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }

    fn push(&mut self, check: &'static str, result: Result<(), String>) {
        let (passed, detail) = match result {
            Ok(()) => (true, String::new()),
            Err(d) => (false, d),
        };
        self.outcomes.push(Outcome { check, passed, detail });
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Minimal `V` in `[0, box_max]^V` with `V.L_x <= D.L_x` for all `x`, by
/// exhaustive enumeration; the componentwise minimum of all solutions,
/// which must itself be a solution. `None` when the box holds no solution.
pub fn floor_cycle_by_enumeration(
    g: &ResolutionGraph,
    d: &RationalCycle,
    box_max: i64,
) -> Option<Vec<i64>> {
    let n = g.vertex_count();
    let bound: Vec<i64> = g
        .vertices()
        .map(|x| {
            cycles::dot_vertex(g, d, x)
                .floor()
                .to_integer()
                .to_i64()
                .expect("bound fits in i64")
        })
        .collect();
    let satisfied = |v: &[i64], x: VertexId| {
        -(g.weight(x) as i64) * v[x] + g.neighbors(x).iter().map(|&u| v[u]).sum::<i64>() <= bound[x]
    };

    let mut min: Option<Vec<i64>> = None;
    let mut v = vec![0i64; n];
    // neighbor values only raise V.L_x, so a constraint that fails with the
    // unassigned neighbors at 0 fails for the whole subtree of the search
    fn search(
        k: usize,
        v: &mut Vec<i64>,
        box_max: i64,
        g: &ResolutionGraph,
        bound: &[i64],
        min: &mut Option<Vec<i64>>,
    ) {
        let n = v.len();
        for x in 0..k {
            let partial = -(g.weight(x) as i64) * v[x]
                + g.neighbors(x).iter().filter(|&&u| u < k).map(|&u| v[u]).sum::<i64>();
            if partial > bound[x] {
                return;
            }
        }
        if k == n {
            match min {
                Some(m) => m.iter_mut().zip(v.iter()).for_each(|(a, &b)| *a = (*a).min(b)),
                None => *min = Some(v.clone()),
            }
            return;
        }
        for val in 0..=box_max {
            v[k] = val;
            search(k + 1, v, box_max, g, bound, min);
        }
        v[k] = 0;
    }
    search(0, &mut v, box_max, g, &bound, &mut min);
    let m = min?;
    assert!(
        g.vertices().all(|x| satisfied(&m, x)),
        "componentwise minimum of solutions is not a solution"
    );
    Some(m)
}

fn names(g: &ResolutionGraph, set: impl IntoIterator<Item = VertexId>) -> Vec<String> {
    set.into_iter().map(|v| g.name(v).to_string()).collect()
}

/// Runs every invariant on one graph. Invalid graphs only report validation.
pub fn run_checks(g: &ResolutionGraph, seed: u64) -> CheckReport {
    let mut r = CheckReport { outcomes: Vec::new() };
    let violations = g.validate_minimal();
    r.push(
        "minimal graph",
        ensure(violations.is_empty(), || {
            violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
        }),
    );
    if !violations.is_empty() {
        return r;
    }
    let guard = g.leading_minors().iter().all(|m| m.is_positive());
    r.push("positive definite", ensure(guard, || "a leading minor is not positive".into()));

    let mult = g.multiplicity();
    let z = cycles::fundamental_cycle(g);
    r.push(
        "fundamental cycle",
        ensure(
            -cycles::intersect(g, &z, &z) == BigRational::from_integer(mult.into()),
            || "-Z.Z differs from the multiplicity".into(),
        ),
    );

    let zk = cycles::canonical_cycle(g);
    r.push(
        "canonical cycle",
        cycles::verify_canonical_cycle(g, &zk).map_err(|e| e.to_string()),
    );
    let counts = cycles::branch_counts(g);
    r.push("branch counts", counts.as_ref().map(|_| ()).map_err(|e| e.to_string()));

    let zo = cycles::z_omega_from(g, &zk);
    r.push("z_omega restriction", restriction(g, &zo));
    r.push("tyurina components", tyurina(g));
    r.push("reduction", reduction(g));

    if g.vertex_count() <= ORACLE_MAX_VERTICES {
        let box_max = 2 * *g.weights().iter().max().unwrap() as i64;
        let incremental = cycles::floor_cycle(g, &zo).to_integers();
        let brute = floor_cycle_by_enumeration(g, &zo, box_max);
        r.push(
            "floor cycle oracle",
            ensure(incremental == brute, || format!("incremental {incremental:?}, exhaustive {brute:?}")),
        );
    }

    let giraud = cycles::giraud_delta(g);
    let tree = scott_tree(g);
    let scott = tree.delta();
    r.push(
        "delta agreement",
        match &giraud {
            Ok(d) => ensure(*d == scott && *d >= 1, || format!("giraud {d}, scott {scott}")),
            Err(e) => Err(e.to_string()),
        },
    );
    let max_h = *g.heights().iter().max().unwrap() as usize;
    r.push(
        "scott tree shape",
        ensure(
            tree.depth() == max_h && tree.degrees().iter().all(|&d| d >= 2),
            || format!("depth {} for max height {max_h}, degrees {:?}", tree.depth(), tree.degrees()),
        ),
    );

    let heights_type = match assemble_from_heights(g) {
        Ok(t) => t,
        Err(e) => {
            r.push("heights route", Err(e.to_string()));
            return r;
        }
    };
    r.push("polar type bounds", type_sanity(&heights_type, mult));

    let (route, independence, round_trip) = limit_routes(g, &heights_type, seed);
    r.push("route equivalence", route);
    r.push("assignment independence", independence);
    r.push("limit tree round trip", round_trip);

    if let Ok(c) = &counts {
        let expected = heights_type.expected_branch_counts(g);
        r.push(
            "expected branch counts",
            ensure(expected == *c, || format!("sites give {expected:?}, cycles give {c:?}")),
        );
    }

    let canonical = heights_type.canonicalize();
    r.push(
        "realization",
        match realize(&canonical) {
            Ok(model) => {
                let v = verify(&model, &canonical);
                ensure(v.passed(), || {
                    v.mismatches.iter().map(|m| m.detail.clone()).collect::<Vec<_>>().join("; ")
                })
            }
            Err(e) => Err(e.to_string()),
        },
    );
    r
}

fn restriction(g: &ResolutionGraph, zo: &RationalCycle) -> Result<(), String> {
    for set in g.tyurina_vertex_sets() {
        let c = g.induced(&set);
        let zc = cycles::z_omega(&c);
        for (i, &x) in set.iter().enumerate() {
            let outer = cycles::dot_vertex(g, zo, x);
            let inner = cycles::dot_vertex(&c, &zc, i);
            if outer != inner {
                return Err(format!("at `{}`: {outer} vs {inner}", g.name(x)));
            }
        }
    }
    Ok(())
}

fn tyurina(g: &ResolutionGraph) -> Result<(), String> {
    let h = g.heights();
    for set in g.tyurina_vertex_sets() {
        let c = g.induced(&set);
        ensure(c.is_tree() && c.is_valid_minimal(), || {
            format!("component {:?} is not a minimal tree", names(g, set.iter().copied()))
        })?;
        let joining = g
            .edges()
            .iter()
            .filter(|&&(a, b)| set.contains(&a) != set.contains(&b))
            .count() as u64;
        ensure(joining == c.multiplicity(), || {
            format!("{joining} edges leave a component of multiplicity {}", c.multiplicity())
        })?;
        let hc = c.heights();
        for (i, &x) in set.iter().enumerate() {
            ensure(h[x] == hc[i] + 1, || format!("height at `{}` is not inherited", g.name(x)))?;
        }
    }
    Ok(())
}

fn reduction(g: &ResolutionGraph) -> Result<(), String> {
    match g.reduce() {
        Reduction::Smooth => ensure(g.vertex_count() == 1, || "smooth reduction of a graph with edges".into()),
        Reduction::Reduced(r) => {
            ensure(r.is_reduced() && r.is_valid_minimal(), || "reduced graph is not reduced and minimal".into())?;
            ensure(r.tc_vertices() == g.tc_vertices(), || "tangent-cone vertices changed".into())?;
            ensure(r.heights() == g.heights(), || "heights changed".into())?;
            let h = g.heights();
            ensure(r.central_elements(&h) == g.central_elements(&h), || "central elements changed".into())?;
            ensure(r.tyurina_vertex_sets() == g.tyurina_vertex_sets(), || "Tyurina components changed".into())
        }
    }
}

fn type_sanity(t: &PolarType, mult: u64) -> Result<(), String> {
    t.check_multiplicity(mult).map_err(|e| e.to_string())?;
    ensure(t.is_ultrametric(), || "contact matrix is not ultrametric".into())?;
    ensure(t.respects_bounds(), || "contact exceeds a site height or a line contact is not 1".into())?;
    Ok(())
}

type Verdict = Result<(), String>;

fn limit_routes(g: &ResolutionGraph, reference: &PolarType, seed: u64) -> (Verdict, Verdict, Verdict) {
    let reduced = match g.reduce() {
        Reduction::Smooth => {
            let lt = crate::polar::assemble_from_limit_tree(g);
            let route = ensure(lt.equals(reference), || "routes disagree on a smooth reduction".into());
            return (route, Ok(()), Ok(()));
        }
        Reduction::Reduced(r) => r,
    };
    let set = enumerate_assignments(&reduced, ASSIGNMENT_CAP, seed);
    let mut route = Ok(());
    let mut independence = Ok(());
    let mut round_trip = Ok(());
    let mut first: Option<PolarType> = None;
    for a in &set.assignments {
        let tree = quotient(&reduced, a);
        let t = assemble_from_tree_data(g, &tree.data);
        if let Err(e) = t.check_multiplicity(g.multiplicity()) {
            route = Err(e.to_string());
        }
        if !t.expected_branch_counts(g).iter().eq(reference.expected_branch_counts(g).iter()) {
            route = Err("limit-tree sites give different branch counts".into());
        }
        match &first {
            None => {
                if !t.equals(reference) {
                    route = Err(format!(
                        "limit tree {} vs heights {}",
                        t.canonical_key(),
                        reference.canonical_key()
                    ));
                }
                first = Some(t);
            }
            Some(f) => {
                if !t.equals(f) && independence.is_ok() {
                    independence = Err(format!("assignments disagree: {} vs {}", t.canonical_key(), f.canonical_key()));
                }
            }
        }
        match reconstruct(&tree.data) {
            Ok(back) if isomorphic(&back, &reduced) => {}
            Ok(_) => round_trip = Err("reconstruction is not isomorphic to the reduced graph".into()),
            Err(e) => round_trip = Err(e.to_string()),
        }
    }
    (route, independence, round_trip)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzFailure {
    pub case: usize,
    pub seed: u64,
    pub failed: Vec<String>,
    /// Smallest failing graph found by shrinking, in the input format.
    pub reproducer: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub count: usize,
    pub size: usize,
    pub oracle_cases: usize,
    pub failures: Vec<FuzzFailure>,
}

/// Checks `count` generated graphs of at most `size` vertices in parallel;
/// results come back in case order.
pub fn run_fuzz(seed: u64, count: usize, size: usize) -> FuzzSummary {
    run_fuzz_with(seed, count, size, run_checks)
}

pub fn run_fuzz_with<F>(seed: u64, count: usize, size: usize, check: F) -> FuzzSummary
where
    F: Fn(&ResolutionGraph, u64) -> CheckReport + Sync,
{
    let seeds = case_seeds(seed, count);
    let results: Vec<(usize, Option<FuzzFailure>)> = seeds
        .par_iter()
        .enumerate()
        .map(|(case, &s)| {
            let g = gen_random_minimal(s, size);
            let report = check(&g, s);
            let failure = (!report.passed()).then(|| {
                let small = minimize(&g, |h| !check(h, s).passed());
                FuzzFailure {
                    case,
                    seed: s,
                    failed: report.failures().map(|o| format!("{}: {}", o.check, o.detail)).collect(),
                    reproducer: small.to_text(),
                }
            });
            (g.vertex_count(), failure)
        })
        .collect();
    FuzzSummary {
        seed,
        count,
        size,
        oracle_cases: results.iter().filter(|(n, _)| *n <= ORACLE_MAX_VERTICES).count(),
        failures: results.into_iter().filter_map(|(_, f)| f).collect(),
    }
}

/// Shrinks `g` by deleting leaves and lowering weights while `fails` holds
/// and the graph stays minimal.
pub fn minimize(g: &ResolutionGraph, fails: impl Fn(&ResolutionGraph) -> bool) -> ResolutionGraph {
    let mut cur = g.clone();
    loop {
        let mut progressed = false;
        for v in cur.vertices() {
            if cur.vertex_count() > 1 && cur.valence(v) <= 1 {
                let keep: BTreeSet<VertexId> = cur.vertices().filter(|&u| u != v).collect();
                let cand = cur.induced(&keep);
                if cand.is_valid_minimal() && fails(&cand) {
                    cur = cand;
                    progressed = true;
                    break;
                }
            }
        }
        if progressed {
            continue;
        }
        for v in cur.vertices() {
            if cur.weight(v) > cur.valence(v).max(2) {
                let mut w = cur.weights().to_vec();
                w[v] -= 1;
                let cand = cur.with_weights(w);
                if fails(&cand) {
                    cur = cand;
                    progressed = true;
                    break;
                }
            }
        }
        if !progressed {
            return cur;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::parse_graph;
    use proptest::prelude::*;

    #[test]
    fn fixtures_pass_every_check() {
        for f in fixtures::all() {
            let r = run_checks(&f.graph, 0);
            assert!(r.passed(), "{}: {:?}", f.name, r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn g32_oracle() {
        let g = fixtures::g32();
        let zo = cycles::z_omega(&g);
        assert_eq!(floor_cycle_by_enumeration(&g, &zo, 4), Some(vec![2, 2]));
        assert_eq!(floor_cycle_by_enumeration(&g, &zo, 1), None);
    }

    #[test]
    fn invalid_graph_reports_only_validation() {
        let g = parse_graph("vertex a 3\nvertex b 3\nvertex c 3\nedge a b\nedge b c\nedge a c").unwrap();
        let r = run_checks(&g, 0);
        assert!(!r.passed());
        assert_eq!(r.outcomes.len(), 1);
    }

    #[test]
    fn small_fuzz_run_is_clean_and_deterministic() {
        let a = run_fuzz(3, 20, 8);
        // the two delta routes are known to disagree on some graphs; nothing else may fail
        for f in &a.failures {
            assert!(f.failed.iter().all(|c| c.starts_with("delta agreement")), "{f:?}");
        }
        assert_eq!(a, run_fuzz(3, 20, 8));
    }

    #[test]
    fn minimization_shrinks_to_a_small_witness() {
        // failure predicate: some vertex has weight at least 4
        let g = fixtures::note();
        let small = minimize(&g, |h| h.weights().iter().any(|&w| w >= 4));
        assert_eq!(small.vertex_count(), 1);
        assert_eq!(small.weights(), [4]);
        let summary = run_fuzz_with(11, 6, 6, |h, _| {
            let mut r = CheckReport { outcomes: Vec::new() };
            r.push("no weight 3", ensure(!h.weights().contains(&3), || "weight 3".into()));
            r
        });
        for f in &summary.failures {
            let rep = parse_graph(&f.reproducer).unwrap();
            assert_eq!(rep.vertex_count(), 1, "{}", f.reproducer);
        }
    }

    #[test]
    fn four_arm_star_separates_the_delta_routes() {
        let g = parse_graph("vertex c 5\nvertex a 2\nvertex b 2\nvertex d 2\nvertex e 2\nedge c a\nedge c b\nedge c d\nedge c e").unwrap();
        assert_eq!(cycles::giraud_delta(&g).unwrap(), 10);
        assert_eq!(crate::scott::scott_delta(&g), 9);
        let r = run_checks(&g, 0);
        let failed: Vec<_> = r.failures().map(|o| o.check).collect();
        assert_eq!(failed, ["delta agreement"]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn random_graphs_satisfy_invariants(seed in any::<u64>()) {
            let g = gen_random_minimal(seed, 9);
            let r = run_checks(&g, seed);
            let other: Vec<_> = r.failures().filter(|o| o.check != "delta agreement").collect();
            prop_assert!(other.is_empty(), "{}\n{:?}", g, other);
            // the Scott sum never exceeds the Giraud value
            prop_assert!(cycles::giraud_delta(&g).unwrap() >= crate::scott::scott_delta(&g));
        }

        #[test]
        fn floor_of_scaled_cycles_matches_oracle(seed in any::<u64>(), num in 0i64..12, den in 1i64..5) {
            let g = gen_random_minimal(seed, 5);
            let d = cycles::z_omega(&g).scale(&BigRational::new(num.into(), den.into()));
            let box_max = 2 * *g.weights().iter().max().unwrap() as i64 * (num / den + 1);
            let inc = cycles::floor_cycle(&g, &d).to_integers().unwrap();
            prop_assert_eq!(Some(inc), floor_cycle_by_enumeration(&g, &d, box_max));
        }
    }
}
