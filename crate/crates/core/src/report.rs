//! The full analysis of one graph as a JSON report.
//!
//! Field order is fixed (see `docs/report.md`); rationals are `"p/q"`
//! strings and there is no floating point anywhere.

use serde_json::{json, Value};
use thiserror::Error;

use crate::cycles;
use crate::error::CrossCheckError;
use crate::graph::{Reduction, ResolutionGraph, Violation};
use crate::limit_tree::{enumerate_assignments, limit_assignments, quotient, ASSIGNMENT_CAP};
use crate::polar::{assemble_from_heights, assemble_from_tree_data, PolarType};
use crate::realize::{realize, verify};
use crate::scott::scott_tree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LimitTrees {
    #[default]
    All,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub realize: bool,
    pub limit_trees: LimitTrees,
    /// Seed for sampling assignments beyond the cap.
    pub seed: u64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            realize: true,
            limit_trees: LimitTrees::All,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyzeError {
    #[error("graph is not minimal: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    CrossCheck(#[from] CrossCheckError),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl AnalyzeError {
    /// Process exit code of the command-line contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            AnalyzeError::Invalid(_) => 3,
            AnalyzeError::CrossCheck(_) => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub json: Value,
    pub polar_type: PolarType,
    /// Descriptions of failed cross-checks; empty for a passing report.
    pub failures: Vec<String>,
}

impl AnalysisReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("plain data");
        s.push('\n');
        s
    }
}

fn names(g: &ResolutionGraph, vs: impl IntoIterator<Item = usize>) -> Vec<&str> {
    vs.into_iter().map(|v| g.name(v)).collect()
}

pub fn graph_json(g: &ResolutionGraph) -> Value {
    json!({
        "vertices": g.vertices().map(|v| json!({"name": g.name(v), "weight": g.weight(v)})).collect::<Vec<_>>(),
        "edges": g.edges().iter().map(|&(a, b)| json!([g.name(a), g.name(b)])).collect::<Vec<_>>(),
    })
}

/// Inverse of [`graph_json`].
pub fn graph_from_json(v: &Value) -> Option<ResolutionGraph> {
    let vertices: Vec<(String, u32)> = v["vertices"]
        .as_array()?
        .iter()
        .map(|x| Some((x["name"].as_str()?.to_string(), u32::try_from(x["weight"].as_u64()?).ok()?)))
        .collect::<Option<_>>()?;
    let edges: Vec<(String, String)> = v["edges"]
        .as_array()?
        .iter()
        .map(|e| Some((e[0].as_str()?.to_string(), e[1].as_str()?.to_string())))
        .collect::<Option<_>>()?;
    ResolutionGraph::new(&vertices, &edges).ok()
}

pub fn analyze(g: &ResolutionGraph, opts: &AnalyzeOptions) -> Result<AnalysisReport, AnalyzeError> {
    let violations = g.validate_minimal();
    if !violations.is_empty() {
        return Err(AnalyzeError::Invalid(violations));
    }
    let mut failures = Vec::new();
    let a = g.analyze();
    let by_name = |f: &dyn Fn(usize) -> Value| -> Value {
        Value::Object(g.vertices().map(|v| (g.name(v).to_string(), f(v))).collect())
    };

    let zk = cycles::canonical_cycle(g);
    cycles::verify_canonical_cycle(g, &zk)?;
    let zo = cycles::z_omega_from(g, &zk);
    let counts = cycles::branch_counts_from(g, &zo)?;
    let floor = cycles::floor_cycle(g, &zo).to_integers().expect("floor cycle is integral");

    let tyurina: Vec<Value> = g
        .tyurina_vertex_sets()
        .into_iter()
        .map(|set| {
            let c = g.induced(&set);
            json!({"vertices": names(g, set), "multiplicity": c.multiplicity()})
        })
        .collect();

    let heights_type = assemble_from_heights(g)?;
    heights_type.check_multiplicity(g.multiplicity())?;

    let (reduction, trees) = match g.reduce() {
        Reduction::Smooth => (json!({"smooth": true, "weights": null}), json!({"total": "0", "sampled": false, "trees": []})),
        Reduction::Reduced(r) => {
            let (assignments, total, sampled) = match opts.limit_trees {
                LimitTrees::All => {
                    let set = enumerate_assignments(&r, ASSIGNMENT_CAP, opts.seed);
                    (set.assignments, set.total, set.sampled)
                }
                LimitTrees::One => {
                    let first = limit_assignments(&r).into_iter().take(1).collect();
                    (first, crate::limit_tree::assignment_count(&r), false)
                }
            };
            let mut listed = Vec::with_capacity(assignments.len());
            for asg in &assignments {
                let t = quotient(&r, asg);
                let pt = assemble_from_tree_data(g, &t.data);
                if !pt.equals(&heights_type) {
                    failures.push(format!(
                        "limit tree route disagrees with the heights route on classes {:?}",
                        t.reps.iter().map(|&v| r.name(v)).collect::<Vec<_>>()
                    ));
                }
                listed.push(t.to_json(&r));
            }
            (
                json!({"smooth": false, "weights": Value::Object(r.vertices().map(|v| (r.name(v).to_string(), json!(r.weight(v)))).collect())}),
                json!({"total": total.to_string(), "sampled": sampled, "trees": listed}),
            )
        }
    };

    let tree = scott_tree(g);
    let scott = tree.delta();
    let giraud = cycles::giraud_delta(g)?;
    if giraud != scott {
        failures.push(format!("delta routes disagree: giraud {giraud}, scott {scott}"));
    }
    let mut canonical = heights_type.canonicalize();
    canonical.delta = Some(scott);

    let realization = if opts.realize {
        match realize(&canonical) {
            Ok(model) => {
                let v = verify(&model, &canonical);
                for m in &v.mismatches {
                    failures.push(format!("realization: {}", m.detail));
                }
                json!({"model": model.to_json(), "verification": v})
            }
            Err(e) => {
                failures.push(format!("realization: {e}"));
                json!({"error": e.to_string()})
            }
        }
    } else {
        Value::Null
    };

    let json = json!({
        "graph": graph_json(g),
        "validation": {"valid": true, "violations": []},
        "heights": by_name(&|v| json!(a.heights[v])),
        "tangent_cone": {
            "vertices": names(g, a.tc_vertices.iter().copied()),
            "cone_degrees": Value::Object(a.tc_vertices.iter().map(|&v| (g.name(v).to_string(), json!(a.cone_degree[v]))).collect()),
            "central_vertices": names(g, a.central_vertices.iter().copied()),
            "central_arcs": a.central_arcs.iter().map(|&(x, y)| json!([g.name(x), g.name(y)])).collect::<Vec<_>>(),
        },
        "multiplicity": g.multiplicity(),
        "embedding_dimension": g.embedding_dimension(),
        "z_k": zk.to_named(g),
        "z_omega": zo.to_named(g),
        "floor_z_omega": by_name(&|v| json!(floor[v])),
        "branch_counts": by_name(&|v| json!(counts[v])),
        "tyurina_components": tyurina,
        "reduction": reduction,
        "limit_trees": trees,
        "polar_type": canonical.to_json(),
        "scott_tree": tree,
        "delta": {"giraud": giraud, "scott": scott, "agree": giraud == scott},
        "realization": realization,
        "verdicts": {"passed": failures.is_empty(), "failures": failures},
    });
    Ok(AnalysisReport {
        json,
        polar_type: canonical,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn veronese_report() {
        let r = analyze(&fixtures::veronese(4), &AnalyzeOptions::default()).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.json["delta"]["scott"], 6);
        assert_eq!(r.json["delta"]["giraud"], 6);
        assert_eq!(r.json["z_omega"]["a"], "3/2");
        // reduces to a smooth point, so there is no limit tree
        assert_eq!(r.json["reduction"]["smooth"], true);
        assert!(r.json["limit_trees"]["trees"].as_array().unwrap().is_empty());
    }

    #[test]
    fn join_report() {
        let r = analyze(&fixtures::join(), &AnalyzeOptions::default()).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.json["delta"]["scott"], 8);
        assert_eq!(r.json["scott_tree"]["degree"], 3);
        assert_eq!(r.polar_type.delta, Some(8));
        assert_eq!(r.polar_type.curves.len(), 2);
    }

    #[test]
    fn field_order_is_fixed() {
        let r = analyze(&fixtures::g32(), &AnalyzeOptions::default()).unwrap();
        let keys: Vec<&str> = r.json.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys[..3], ["graph", "validation", "heights"]);
        assert_eq!(*keys.last().unwrap(), "verdicts");
    }

    #[test]
    fn deterministic_and_flags() {
        let g = fixtures::fig2();
        let all = analyze(&g, &AnalyzeOptions::default()).unwrap();
        assert_eq!(all.to_pretty(), analyze(&g, &AnalyzeOptions::default()).unwrap().to_pretty());
        assert_eq!(all.json["limit_trees"]["trees"].as_array().unwrap().len(), 6);
        let one = analyze(
            &g,
            &AnalyzeOptions {
                realize: false,
                limit_trees: LimitTrees::One,
                seed: 0,
            },
        )
        .unwrap();
        assert_eq!(one.json["limit_trees"]["trees"].as_array().unwrap().len(), 1);
        assert_eq!(one.json["limit_trees"]["total"], "6");
        assert!(one.json["realization"].is_null());
    }

    #[test]
    fn graph_json_round_trip() {
        let g = fixtures::note();
        assert_eq!(graph_from_json(&graph_json(&g)), Some(g));
        assert_eq!(graph_from_json(&json!({"vertices": 3})), None);
    }

    #[test]
    fn invalid_graph() {
        let g = crate::parse_graph("vertex a 1").unwrap();
        let e = analyze(&g, &AnalyzeOptions::default()).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn delta_disagreement_is_reported() {
        let g = crate::parse_graph("vertex c 5\nvertex a 2\nvertex b 2\nvertex d 2\nvertex e 2\nedge c a\nedge c b\nedge c d\nedge c e").unwrap();
        let r = analyze(&g, &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.failures, ["delta routes disagree: giraud 10, scott 9"]);
        assert_eq!(r.json["delta"]["agree"], false);
    }
}
