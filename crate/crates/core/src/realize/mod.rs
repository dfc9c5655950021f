//! Explicit plane-curve models of a polar type, checked by blow-ups.
//!
//! Every component gets a center series `P(x)` with integer coefficients.
//! Components are split level by level along their contact clusters: at
//! level `k` the clusters of contact `>= k + 1` receive pairwise distinct
//! coefficients of `x^k`. An `A_{2q-1}` is `(y - P)^2 - x^{2q}` with sheets
//! `P ± x^q`, an `A_{2q}` is `(y - P)^2 - x^{2q+1}` with the single branch
//! `P + x^{q+1/2}`, and a line is `y - c x`.

pub mod blowup;
pub mod poly;

pub use blowup::{branch_contact_by_blowups, BlowupError, BranchError, PuiseuxBranch};
pub use poly::Poly2;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::polar::{Component, PolarType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComponentKind {
    Line,
    A(u32),
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentKind::Line => f.write_str("line"),
            ComponentKind::A(n) => write!(f, "A{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelComponent {
    /// Index of the component in the polar type.
    pub index: usize,
    pub kind: ComponentKind,
    /// Coefficients of `x^1, x^2, ...` in the center series.
    pub center: Vec<BigRational>,
    pub polynomial: Poly2,
    pub sheets: Vec<PuiseuxBranch>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneCurveModel {
    pub components: Vec<ModelComponent>,
    pub product: Poly2,
    /// Maximum number of blow-ups the verifier simulates.
    pub truncation_bound: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("contact matrix has {found} rows for {expected} components")]
    Shape { expected: usize, found: usize },
    #[error("contacts of components {i}, {j}, {k} are not ultrametric")]
    NotUltrametric { i: usize, j: usize, k: usize },
    #[error("contact {contact} of components {i} and {j} exceeds the bound {bound}")]
    SiteHeight { i: usize, j: usize, contact: u32, bound: u32 },
    #[error("contact of components {i} and {j} is {contact}, below 1")]
    ZeroContact { i: usize, j: usize, contact: u32 },
}

/// `q` of the component: 1 for a line, `⌈n/2⌉` for `A_n`.
fn depth(kind: ComponentKind) -> u32 {
    match kind {
        ComponentKind::Line => 1,
        ComponentKind::A(n) => n.div_ceil(2),
    }
}

fn odd_curve(kind: ComponentKind) -> bool {
    matches!(kind, ComponentKind::A(n) if n % 2 == 1)
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// 1, -1, 2, -2, ...
fn pool() -> impl Iterator<Item = i64> {
    (1..).flat_map(|k| [k, -k])
}

struct Assigner<'a> {
    kinds: &'a [ComponentKind],
    contacts: &'a [Vec<u32>],
    centers: Vec<Vec<i64>>,
}

impl Assigner<'_> {
    fn assign(&mut self, level: u32, members: &[usize]) {
        let active: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&i| depth(self.kinds[i]) >= level)
            .collect();
        if active.is_empty() {
            return;
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &i in &active {
            match classes.iter_mut().find(|c| self.contacts[c[0]][i] > level) {
                Some(c) => c.push(i),
                None => classes.push(vec![i]),
            }
        }
        let mut used: BTreeSet<i64> = BTreeSet::new();
        for class in &classes {
            let split_sheets = |v: i64| -> Vec<i64> {
                if class.len() == 1 && odd_curve(self.kinds[class[0]]) && depth(self.kinds[class[0]]) == level {
                    vec![v - 1, v + 1]
                } else {
                    vec![v]
                }
            };
            let v = if classes.len() == 1 {
                0
            } else {
                pool()
                    .find(|&v| split_sheets(v).iter().all(|x| !used.contains(x)))
                    .expect("pool is infinite")
            };
            used.extend(split_sheets(v));
            for &i in class {
                self.centers[i].push(v);
            }
            self.assign(level + 1, class);
        }
    }
}

fn check_contacts(pt: &PolarType, kinds: &[ComponentKind]) -> Result<(), RealizeError> {
    let n = kinds.len();
    let c = &pt.contacts;
    if c.len() != n || c.iter().any(|r| r.len() != n) {
        return Err(RealizeError::Shape {
            expected: n,
            found: c.len(),
        });
    }
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let bound = depth(kinds[i]).min(depth(kinds[j]));
            if c[i][j] < 1 {
                return Err(RealizeError::ZeroContact { i, j, contact: c[i][j] });
            }
            if c[i][j] > bound {
                return Err(RealizeError::SiteHeight { i, j, contact: c[i][j], bound });
            }
            for k in (0..n).filter(|&k| k != i && k != j) {
                if c[i][k] < c[i][j].min(c[j][k]) {
                    return Err(RealizeError::NotUltrametric { i, j, k });
                }
            }
        }
    }
    Ok(())
}

/// Truncation bound for the blow-up simulator: `2·(max site height) + 3`.
pub fn truncation_bound(pt: &PolarType) -> u32 {
    2 * pt.curves.iter().map(|c| c.site_height).max().unwrap_or(1).max(1) + 3
}

pub fn realize(pt: &PolarType) -> Result<PlaneCurveModel, RealizeError> {
    let kinds: Vec<ComponentKind> = (0..pt.component_count())
        .map(|i| match pt.component(i) {
            Component::Line(_) => ComponentKind::Line,
            Component::Curve(c) => ComponentKind::A(c.n),
        })
        .collect();
    check_contacts(pt, &kinds)?;
    let mut a = Assigner {
        kinds: &kinds,
        contacts: &pt.contacts,
        centers: vec![Vec::new(); kinds.len()],
    };
    a.assign(1, &(0..kinds.len()).collect::<Vec<_>>());

    let components: Vec<ModelComponent> = kinds
        .iter()
        .zip(a.centers)
        .enumerate()
        .map(|(index, (&kind, center))| {
            let center: Vec<BigRational> = center.into_iter().map(int).collect();
            build_component(index, kind, center)
        })
        .collect();
    let product = components
        .iter()
        .fold(Poly2::one(), |acc, c| &acc * &c.polynomial);
    Ok(PlaneCurveModel {
        components,
        product,
        truncation_bound: truncation_bound(pt),
    })
}

fn build_component(index: usize, kind: ComponentKind, center: Vec<BigRational>) -> ModelComponent {
    let shifted = &Poly2::y() - &Poly2::in_x(&center);
    let (polynomial, sheets) = match kind {
        ComponentKind::Line => (shifted, vec![PuiseuxBranch::from_integer_coeffs(&center)]),
        ComponentKind::A(n) => {
            let q = n.div_ceil(2);
            let mut c = center.clone();
            c.resize(q as usize, BigRational::zero());
            if n % 2 == 1 {
                let sheet = |s: i64| {
                    let mut c = c.clone();
                    c[q as usize - 1] += int(s);
                    PuiseuxBranch::from_integer_coeffs(&c)
                };
                (
                    &shifted.pow(2) - &Poly2::x().pow(2 * q),
                    vec![sheet(1), sheet(-1)],
                )
            } else {
                let mut terms: Vec<(BigRational, BigRational)> = c
                    .iter()
                    .enumerate()
                    .map(|(k, v)| (int(k as i64 + 1), v.clone()))
                    .collect();
                terms.push((BigRational::new(BigInt::from(2 * q + 1), BigInt::from(2)), BigRational::one()));
                (
                    &shifted.pow(2) - &Poly2::x().pow(2 * q + 1),
                    vec![PuiseuxBranch::new(terms).expect("half-integer term last")],
                )
            }
        }
    };
    ModelComponent {
        index,
        kind,
        center,
        polynomial,
        sheets,
    }
}

impl ModelComponent {
    /// `(y - 3*x)`, `(y^2 - x^6)`, `((y - x^2)^2 - x^5)`.
    pub fn factored(&self) -> String {
        let shifted = &Poly2::y() - &Poly2::in_x(&self.center);
        match self.kind {
            ComponentKind::Line => format!("({shifted})"),
            ComponentKind::A(n) => {
                let e = n + 1;
                if self.center.iter().all(Zero::is_zero) {
                    format!("(y^2 - x^{e})")
                } else {
                    format!("(({shifted})^2 - x^{e})")
                }
            }
        }
    }
}

impl PlaneCurveModel {
    pub fn factored(&self) -> String {
        self.components
            .iter()
            .map(ModelComponent::factored)
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn sheet_count(&self) -> usize {
        self.components.iter().map(|c| c.sheets.len()).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Comp {
            index: usize,
            kind: String,
            polynomial: String,
            branches: Vec<String>,
        }
        #[derive(Serialize)]
        struct Json {
            factored: String,
            expanded: Vec<(u32, u32, String)>,
            components: Vec<Comp>,
        }
        serde_json::to_value(Json {
            factored: self.factored(),
            expanded: self
                .product
                .terms()
                .map(|(i, j, c)| (i, j, c.to_string()))
                .collect(),
            components: self
                .components
                .iter()
                .map(|c| Comp {
                    index: c.index,
                    kind: c.kind.to_string(),
                    polynomial: c.factored(),
                    branches: c.sheets.iter().map(ToString::to_string).collect(),
                })
                .collect(),
        })
        .expect("plain data")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    SheetCount,
    InnerContact,
    CrossContact,
    LineContact,
    ProductFactors,
    ProductDegree,
    ProductOrder,
    TruncationBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub check: CheckKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

struct PairCheck {
    check: CheckKind,
    a: (usize, usize),
    b: (usize, usize),
    expected: u32,
}

/// Checks every contact claim of `pt` on the sheets of `model` with the
/// blow-up simulator, plus sheet counts and the product's degree and order.
pub fn verify(model: &PlaneCurveModel, pt: &PolarType) -> VerificationReport {
    let mut mismatches = Vec::new();
    let mut checks = 0;
    let mut report = |ok: bool, check: CheckKind, detail: String| {
        checks += 1;
        if !ok {
            mismatches.push(Mismatch { check, detail });
        }
    };

    let n = pt.component_count();
    report(
        model.components.len() == n,
        CheckKind::SheetCount,
        format!("model has {} components, type has {n}", model.components.len()),
    );
    let comps = &model.components;
    let mut pairs = Vec::new();
    for (ci, c) in comps.iter().enumerate() {
        let want = match c.kind {
            ComponentKind::Line => 1,
            ComponentKind::A(n) if n % 2 == 1 => 2,
            ComponentKind::A(_) => 1,
        };
        report(
            c.sheets.len() == want,
            CheckKind::SheetCount,
            format!("component {ci} ({}) has {} sheets, expected {want}", c.kind, c.sheets.len()),
        );
        if let ComponentKind::A(n) = c.kind {
            if n % 2 == 1 && c.sheets.len() == 2 {
                pairs.push(PairCheck {
                    check: CheckKind::InnerContact,
                    a: (ci, 0),
                    b: (ci, 1),
                    expected: n.div_ceil(2),
                });
            }
        }
    }
    for (ci, c) in comps.iter().enumerate() {
        for (cj, d) in comps.iter().enumerate().skip(ci + 1) {
            if ci >= n || cj >= n {
                continue;
            }
            let check = if c.kind == ComponentKind::Line && d.kind == ComponentKind::Line {
                CheckKind::LineContact
            } else {
                CheckKind::CrossContact
            };
            for si in 0..c.sheets.len() {
                for sj in 0..d.sheets.len() {
                    pairs.push(PairCheck {
                        check,
                        a: (ci, si),
                        b: (cj, sj),
                        expected: pt.contact(ci, cj),
                    });
                }
            }
        }
    }
    let bound = model.truncation_bound;
    for p in &pairs {
        report(
            p.expected <= bound,
            CheckKind::TruncationBound,
            format!("expected contact {} exceeds the truncation bound {bound}", p.expected),
        );
    }
    let measured: Vec<Result<u32, BlowupError>> = pairs
        .par_iter()
        .map(|p| {
            branch_contact_by_blowups(&comps[p.a.0].sheets[p.a.1], &comps[p.b.0].sheets[p.b.1], bound)
        })
        .collect();
    for (p, m) in pairs.iter().zip(measured) {
        let found = match &m {
            Ok(k) => k.to_string(),
            Err(e) => e.to_string(),
        };
        report(
            m == Ok(p.expected),
            p.check,
            format!(
                "sheets {:?} and {:?}: expected contact {}, found {found}",
                p.a, p.b, p.expected
            ),
        );
    }

    let recomputed = comps.iter().fold(Poly2::one(), |acc, c| &acc * &c.polynomial);
    report(
        recomputed == model.product,
        CheckKind::ProductFactors,
        "product differs from the product of component polynomials".to_string(),
    );
    let pm = pt.polar_multiplicity() as u32;
    report(
        model.product.degree_y() == Some(pm),
        CheckKind::ProductDegree,
        format!("y-degree {:?}, expected {pm}", model.product.degree_y()),
    );
    report(
        model.product.order() == Some(pm),
        CheckKind::ProductOrder,
        format!("order at the origin {:?}, expected {pm}", model.product.order()),
    );
    VerificationReport { checks, mismatches }
}
