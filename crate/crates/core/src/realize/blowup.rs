//! Puiseux branches and a point blow-up simulator measuring contact.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// `y = Σ c·x^e` with exponents of denominator 1 or 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuiseuxBranch {
    terms: Vec<(BigRational, BigRational)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BranchError {
    #[error("exponent {0} is not a positive multiple of 1/2")]
    Exponent(String),
    #[error("exponents must increase strictly")]
    Order,
    #[error("a half-integer exponent may only occur as the last term")]
    HalfNotLast,
}

impl PuiseuxBranch {
    /// Zero coefficients are dropped.
    pub fn new(terms: Vec<(BigRational, BigRational)>) -> Result<Self, BranchError> {
        let terms: Vec<_> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let two = BigInt::from(2);
        for (e, _) in &terms {
            if !e.is_positive() || !(e.denom().is_one() || *e.denom() == two) {
                return Err(BranchError::Exponent(e.to_string()));
            }
        }
        if terms.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(BranchError::Order);
        }
        if terms.iter().rev().skip(1).any(|(e, _)| !e.is_integer()) {
            return Err(BranchError::HalfNotLast);
        }
        Ok(PuiseuxBranch { terms })
    }

    /// Integer-exponent branch from coefficients of `x^1, x^2, ...`.
    pub fn from_integer_coeffs(coeffs: &[BigRational]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (BigRational::from_integer(BigInt::from(k + 1)), c.clone()))
            .collect();
        Self::new(terms).expect("integer exponents in order")
    }

    pub fn terms(&self) -> &[(BigRational, BigRational)] {
        &self.terms
    }

    /// 2 when a half-integer exponent occurs, else 1.
    pub fn ramification(&self) -> usize {
        if self.terms.iter().any(|(e, _)| !e.is_integer()) {
            2
        } else {
            1
        }
    }

    /// `(x(t), y(t)) = (t^e, y(t^e))` known up to `t^{prec-1}`.
    fn parametrize(&self, prec: usize) -> (Series, Series) {
        let e = self.ramification();
        let mut x = vec![BigRational::zero(); prec];
        if e < prec {
            x[e] = BigRational::one();
        }
        let mut y = vec![BigRational::zero(); prec];
        for (exp, c) in &self.terms {
            let k = (exp * BigRational::from_integer(BigInt::from(e)))
                .to_integer()
                .to_usize()
                .expect("small exponent");
            if k < prec {
                y[k] = c.clone();
            }
        }
        (Series { c: x }, Series { c: y })
    }
}

impl fmt::Display for PuiseuxBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("y = 0");
        }
        f.write_str("y = ")?;
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            if e.is_one() {
                f.write_str("x")?;
            } else if e.is_integer() {
                write!(f, "x^{e}")?;
            } else {
                write!(f, "x^({e})")?;
            }
        }
        Ok(())
    }
}

/// Power series in `t` whose coefficients are known below `t^{c.len()}`.
#[derive(Debug, Clone, PartialEq)]
struct Series {
    c: Vec<BigRational>,
}

impl Series {
    fn prec(&self) -> usize {
        self.c.len()
    }

    fn lead(&self) -> Option<(usize, &BigRational)> {
        self.c.iter().enumerate().find(|(_, x)| !x.is_zero())
    }

    fn order(&self) -> Option<usize> {
        self.lead().map(|(k, _)| k)
    }

    fn shift_down(&self, k: usize) -> Series {
        Series { c: self.c[k.min(self.c.len())..].to_vec() }
    }

    fn mul(&self, o: &Series) -> Series {
        let (oa, ob) = (self.order().unwrap_or(self.prec()), o.order().unwrap_or(o.prec()));
        let prec = (self.prec() + ob).min(o.prec() + oa);
        let mut c = vec![BigRational::zero(); prec];
        for (i, a) in self.c.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in o.c.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                if i + j < prec {
                    c[i + j] += a * b;
                }
            }
        }
        Series { c }
    }

    /// Inverse of a series with nonzero constant term.
    fn inverse(&self) -> Series {
        let n = self.prec();
        let a0 = self.c[0].clone();
        assert!(!a0.is_zero(), "inverting a non-unit");
        let mut inv = vec![BigRational::zero(); n];
        inv[0] = a0.recip();
        for k in 1..n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                acc += &self.c[j] * &inv[k - j];
            }
            inv[k] = -acc / &a0;
        }
        Series { c: inv }
    }

    /// `self / o` where `o` has known order `β` and `self` has order `>= β`.
    fn div(&self, o: &Series) -> Series {
        let b = o.order().expect("divisor is nonzero");
        self.shift_down(b).mul(&o.shift_down(b).inverse())
    }

    fn sub_const(&self, k: &BigRational) -> Series {
        let mut c = self.c.clone();
        if let Some(x) = c.first_mut() {
            *x -= k;
        }
        Series { c }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Direction {
    Finite(BigRational),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("branches not separated within {0} blow-ups at the chosen truncation")]
    TruncationInsufficient(u32),
}

/// Tangent direction at the origin of a branch through it.
fn direction(u: &Series, v: &Series) -> Option<Direction> {
    match (u.lead(), v.lead()) {
        (Some((a, cu)), Some((b, cv))) => Some(if a < b {
            Direction::Finite(BigRational::zero())
        } else if a == b {
            Direction::Finite(cv / cu)
        } else {
            Direction::Infinite
        }),
        (Some((a, _)), None) if a < v.prec() => Some(Direction::Finite(BigRational::zero())),
        (None, Some((b, _))) if b < u.prec() => Some(Direction::Infinite),
        _ => None,
    }
}

fn chart(u: &Series, v: &Series, d: &Direction) -> (Series, Series) {
    match d {
        Direction::Finite(l) => (u.clone(), v.div(u).sub_const(l)),
        Direction::Infinite => (u.div(v), v.clone()),
    }
}

/// Number of point blow-ups after which the strict transforms of the two
/// branches pass through different points. `bound` caps the number of steps;
/// the series are truncated at `e·(bound + 2)` in the uniformizing parameter.
pub fn branch_contact_by_blowups(
    b1: &PuiseuxBranch,
    b2: &PuiseuxBranch,
    bound: u32,
) -> Result<u32, BlowupError> {
    let prec = |b: &PuiseuxBranch| b.ramification() * (bound as usize + 2);
    let (mut u1, mut v1) = b1.parametrize(prec(b1));
    let (mut u2, mut v2) = b2.parametrize(prec(b2));
    for step in 1..=bound {
        let d1 = direction(&u1, &v1).ok_or(BlowupError::TruncationInsufficient(bound))?;
        let d2 = direction(&u2, &v2).ok_or(BlowupError::TruncationInsufficient(bound))?;
        if d1 != d2 {
            return Ok(step);
        }
        (u1, v1) = chart(&u1, &v1, &d1);
        (u2, v2) = chart(&u2, &v2, &d2);
    }
    Err(BlowupError::TruncationInsufficient(bound))
}
