//! Exact rational cycles on the exceptional divisor.
//!
//! A cycle is a vector of rational coefficients indexed like the vertices of
//! its graph. The pairing is the intersection form: `L_x . L_x = -w(x)`,
//! `L_x . L_y = 1` on edges.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::CrossCheckError;
use crate::graph::{ResolutionGraph, VertexId};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalCycle {
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl RationalCycle {
    pub fn zero(len: usize) -> Self {
        RationalCycle {
            coeffs: vec![BigRational::zero(); len],
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        RationalCycle { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        RationalCycle {
            coeffs: coeffs.iter().map(|&c| rat(c)).collect(),
        }
    }

    /// The reduced exceptional divisor `Σ L_x`.
    pub fn ones(len: usize) -> Self {
        Self::from_integers(&vec![1; len])
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, v: VertexId) -> &BigRational {
        &self.coeffs[v]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        RationalCycle {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Integer coefficients; `None` if some coefficient is fractional or huge.
    pub fn to_integers(&self) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }

    /// Coefficients keyed by vertex name, rendered as reduced `p/q` strings.
    pub fn to_named(&self, g: &ResolutionGraph) -> BTreeMap<String, String> {
        g.vertices()
            .map(|v| (g.name(v).to_string(), self.coeffs[v].to_string()))
            .collect()
    }
}

impl Add for &RationalCycle {
    type Output = RationalCycle;
    fn add(self, rhs: &RationalCycle) -> RationalCycle {
        assert_eq!(self.len(), rhs.len());
        RationalCycle {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RationalCycle {
    type Output = RationalCycle;
    fn sub(self, rhs: &RationalCycle) -> RationalCycle {
        assert_eq!(self.len(), rhs.len());
        RationalCycle {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &RationalCycle {
    type Output = RationalCycle;
    fn neg(self) -> RationalCycle {
        RationalCycle {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// The fundamental cycle `Z = Σ L_x` of a minimal singularity.
pub fn fundamental_cycle(g: &ResolutionGraph) -> RationalCycle {
    RationalCycle::ones(g.vertex_count())
}

/// `A . L_v`.
pub fn dot_vertex(g: &ResolutionGraph, a: &RationalCycle, v: VertexId) -> BigRational {
    let mut acc = a.coeff(v) * rat(-(g.weight(v) as i64));
    for &u in g.neighbors(v) {
        acc += a.coeff(u);
    }
    acc
}

/// `A . B`.
pub fn intersect(g: &ResolutionGraph, a: &RationalCycle, b: &RationalCycle) -> BigRational {
    g.vertices().map(|v| a.coeff(v) * dot_vertex(g, b, v)).sum()
}

/// The numerically canonical cycle: `Z_K . L_x = w(x) - 2` for every `x`.
pub fn canonical_cycle(g: &ResolutionGraph) -> RationalCycle {
    let m: Vec<Vec<BigInt>> = g
        .intersection_matrix()
        .into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect();
    let rhs: Vec<BigInt> = g.weights().iter().map(|&w| BigInt::from(w as i64 - 2)).collect();
    let x = linalg::solve(&m, &rhs).expect("intersection form of a valid graph is nondegenerate");
    RationalCycle::from_coeffs(x)
}

/// Checks `Z_K . L_x = w(x) - 2` for all `x`.
pub fn verify_canonical_cycle(g: &ResolutionGraph, zk: &RationalCycle) -> Result<(), CrossCheckError> {
    if g
        .vertices()
        .all(|v| dot_vertex(g, zk, v) == rat(g.weight(v) as i64 - 2))
    {
        Ok(())
    } else {
        Err(CrossCheckError::CanonicalCycle)
    }
}

/// `Z_Ω = Σ s_x L_x - Z_K`.
pub fn z_omega(g: &ResolutionGraph) -> RationalCycle {
    z_omega_from(g, &canonical_cycle(g))
}

pub fn z_omega_from(g: &ResolutionGraph, zk: &RationalCycle) -> RationalCycle {
    let heights: Vec<i64> = g.heights().into_iter().map(i64::from).collect();
    &RationalCycle::from_integers(&heights) - zk
}

/// `-Z_Ω . L_x` for every vertex: the number of generic polar branches whose
/// strict transform meets `L_x`.
pub fn branch_counts(g: &ResolutionGraph) -> Result<Vec<u64>, CrossCheckError> {
    branch_counts_from(g, &z_omega(g))
}

pub fn branch_counts_from(g: &ResolutionGraph, zo: &RationalCycle) -> Result<Vec<u64>, CrossCheckError> {
    g.vertices()
        .map(|v| {
            let c = -dot_vertex(g, zo, v);
            if c.is_integer() && !c.is_negative() {
                c.to_integer().to_u64().ok_or_else(|| CrossCheckError::BranchCount {
                    vertex: g.name(v).to_string(),
                    value: c.to_string(),
                })
            } else {
                Err(CrossCheckError::BranchCount {
                    vertex: g.name(v).to_string(),
                    value: c.to_string(),
                })
            }
        })
        .collect()
}

/// The minimal integer cycle `V` with `V . L_x <= D . L_x` for all `x`.
pub fn floor_cycle(g: &ResolutionGraph, d: &RationalCycle) -> RationalCycle {
    let (v, _) = floor_cycle_trace(g, d);
    RationalCycle::from_integers(&v)
}

/// Incremental computation of the floor cycle, returning every intermediate
/// cycle.
///
/// Starts at `min(0, ⌈D⌉)` and adds `L_x` for the lexicographically first
/// violated vertex until no vertex is violated. Every admissible `V` satisfies
/// `V >= D`, so the start lies below the minimum and each step stays below it.
pub fn floor_cycle_trace(g: &ResolutionGraph, d: &RationalCycle) -> (Vec<i64>, Vec<Vec<i64>>) {
    let bounds: Vec<i64> = g
        .vertices()
        .map(|v| {
            dot_vertex(g, d, v)
                .floor()
                .to_integer()
                .to_i64()
                .expect("bound fits in i64")
        })
        .collect();
    let mut v: Vec<i64> = d
        .coeffs()
        .iter()
        .map(|c| c.ceil().to_integer().to_i64().expect("coefficient fits in i64").min(0))
        .collect();
    let mut trace = vec![v.clone()];
    let dot = |v: &[i64], x: VertexId| -> i64 {
        -(g.weight(x) as i64) * v[x] + g.neighbors(x).iter().map(|&u| v[u]).sum::<i64>()
    };
    while let Some(x) = g.vertices().find(|&x| dot(&v, x) > bounds[x]) {
        v[x] += 1;
        trace.push(v.clone());
    }
    (v, trace)
}

/// δ of the generic polar curve from the minimal resolution:
/// `δ = -½ Z_C.(Z_C + Z_K) + ½ D_C.(D_C + Z_K)` with `Z_C = -Z_Ω` and
/// `D_C = Z_C + ⌊-Z_C⌋`.
pub fn giraud_delta(g: &ResolutionGraph) -> Result<u64, CrossCheckError> {
    let zk = canonical_cycle(g);
    let zo = z_omega_from(g, &zk);
    let zc = -&zo;
    let dc = &zc + &floor_cycle(g, &zo);
    let half = BigRational::new(1.into(), 2.into());
    let delta = -(intersect(g, &zc, &(&zc + &zk)) * &half) + intersect(g, &dc, &(&dc + &zk)) * &half;
    if delta.is_integer() && !delta.is_negative() {
        delta
            .to_integer()
            .to_u64()
            .ok_or_else(|| CrossCheckError::Delta(delta.to_string()))
    } else {
        Err(CrossCheckError::Delta(delta.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn pairing() {
        let g = fixtures::veronese(4);
        let e = RationalCycle::ones(1);
        assert_eq!(intersect(&g, &e, &e), rat(-4));
        let g = fixtures::g32();
        let z = RationalCycle::ones(2);
        assert_eq!(intersect(&g, &z, &z), rat(-3));
        assert_eq!(intersect(&g, &z, &RationalCycle::zero(2)), rat(0));
        let g = fixtures::fig2();
        let z = fundamental_cycle(&g);
        assert_eq!(-intersect(&g, &z, &z), rat(4));
    }

    #[test]
    fn canonical_cycles() {
        for n in 2..=9 {
            let g = fixtures::veronese(n);
            let zk = canonical_cycle(&g);
            assert_eq!(zk.coeff(0), &q(-(n as i64 - 2), n as i64));
            verify_canonical_cycle(&g, &zk).unwrap();
        }
        let g = fixtures::g32();
        assert_eq!(canonical_cycle(&g).coeffs(), [q(-2, 5), q(-1, 5)]);
        assert!(canonical_cycle(&fixtures::a_chain(1)).coeffs()[0].is_zero());
    }

    #[test]
    fn z_omega_values() {
        for n in 2..=9 {
            let g = fixtures::veronese(n);
            assert_eq!(z_omega(&g).coeff(0), &q(2 * n as i64 - 2, n as i64));
        }
        assert_eq!(z_omega(&fixtures::g32()).coeffs(), [q(7, 5), q(6, 5)]);
        assert_eq!(z_omega(&fixtures::a_chain(1)).coeffs(), [rat(1)]);
    }

    #[test]
    fn branch_count_values() {
        for n in 2..=9 {
            assert_eq!(branch_counts(&fixtures::veronese(n)).unwrap(), [2 * n as u64 - 2]);
        }
        assert_eq!(branch_counts(&fixtures::g32()).unwrap(), [3, 1]);

        let g = fixtures::fig2();
        let counts = branch_counts(&g).unwrap();
        for v in g.vertices() {
            let expected = match g.name(v) {
                "b" => 4,
                "d" => 2,
                _ => 0,
            };
            assert_eq!(counts[v], expected, "{}", g.name(v));
        }
    }

    #[test]
    fn floor_cycles() {
        for n in 3..=9 {
            let g = fixtures::veronese(n);
            assert_eq!(floor_cycle(&g, &z_omega(&g)).to_integers().unwrap(), [2]);
        }
        let g = fixtures::g32();
        let (v, trace) = floor_cycle_trace(&g, &z_omega(&g));
        assert_eq!(v, [2, 2]);
        assert_eq!(trace, vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 1], vec![2, 2]]);
        let g = fixtures::fig2();
        assert_eq!(
            floor_cycle(&g, &RationalCycle::zero(g.vertex_count())),
            RationalCycle::zero(g.vertex_count())
        );
    }

    #[test]
    fn floor_of_non_antinef_cycle_may_be_negative() {
        // D = -E on a (-4)-curve: V = -E satisfies 4 <= 4, and 0 does too but is larger.
        let g = fixtures::veronese(4);
        let d = RationalCycle::from_integers(&[-1]);
        assert_eq!(floor_cycle(&g, &d).to_integers().unwrap(), [-1]);
    }

    #[test]
    fn giraud_values() {
        for n in 3..=12 {
            assert_eq!(giraud_delta(&fixtures::veronese(n)).unwrap(), 3 * n as u64 - 6);
        }
        assert_eq!(giraud_delta(&fixtures::g32()).unwrap(), 3);
        assert_eq!(giraud_delta(&fixtures::a_chain(1)).unwrap(), 1);
        assert_eq!(giraud_delta(&fixtures::fig2()).unwrap(), 13);
        assert_eq!(giraud_delta(&fixtures::join()).unwrap(), 8);
    }
}
