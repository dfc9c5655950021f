//! Fraction-free (Bareiss) elimination over the integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Determinant by Bareiss elimination with row pivoting.
pub fn determinant(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.to_vec();
    let mut prev = BigInt::one();
    let mut sign = 1;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    &m[n - 1][n - 1] * sign
}

/// All leading principal minors `det(a[..k][..k])` for `k = 1..=n`.
///
/// Without pivoting the Bareiss pivots are exactly these minors; a zero pivot
/// falls back to direct evaluation of the remaining ones.
pub fn leading_minors(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut m = a.to_vec();
    let mut prev = BigInt::one();
    let mut minors = Vec::with_capacity(n);
    for k in 0..n {
        if m[k][k].is_zero() {
            for size in k + 1..=n {
                let sub: Vec<Vec<BigInt>> = a[..size].iter().map(|r| r[..size].to_vec()).collect();
                minors.push(determinant(&sub));
            }
            return minors;
        }
        minors.push(m[k][k].clone());
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    minors
}

/// Solves `a x = b` exactly; `None` when `a` is singular.
pub fn solve(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let i = (k + 1..n).find(|&i| !m[i][k].is_zero())?;
            m.swap(i, k);
        }
        for i in k + 1..n {
            for j in k + 1..=n {
                m[i][j] = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let mut x = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        let mut acc = BigRational::from_integer(m[k][n].clone());
        for j in k + 1..n {
            acc -= BigRational::from_integer(m[k][j].clone()) * &x[j];
        }
        x[k] = acc / BigRational::from_integer(m[k][k].clone());
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn two_by_two_solve() {
        let a = mat(&[&[-3, 1], &[1, -2]]);
        let x = solve(&a, &[BigInt::from(1), BigInt::from(0)]).unwrap();
        assert_eq!(x, vec![q(-2, 5), q(-1, 5)]);
    }

    #[test]
    fn needs_pivoting() {
        let a = mat(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(determinant(&a), BigInt::from(-2));
        let b: Vec<BigInt> = [1, 2, 3].iter().map(|&x| BigInt::from(x)).collect();
        let x = solve(&a, &b).unwrap();
        for (row, rhs) in a.iter().zip(&b) {
            let lhs: BigRational = row
                .iter()
                .zip(&x)
                .map(|(c, xi)| BigRational::from_integer(c.clone()) * xi)
                .sum();
            assert_eq!(lhs, BigRational::from_integer(rhs.clone()));
        }
    }

    #[test]
    fn singular() {
        let a = mat(&[&[1, 2], &[2, 4]]);
        assert!(solve(&a, &[BigInt::from(1), BigInt::from(1)]).is_none());
        assert!(determinant(&a).is_zero());
    }

    #[test]
    fn minors() {
        let a = mat(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        let m: Vec<i64> = leading_minors(&a).iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(m, [2, 3, 4]);
        let a = mat(&[&[0, 1], &[1, 0]]);
        let m: Vec<i64> = leading_minors(&a).iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(m, [0, -1]);
    }
}
