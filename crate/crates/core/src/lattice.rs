//! Integer row reduction: Hermite normal form and integer kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{KhlError, Result};

/// Row-style Hermite normal form of an integer matrix: pivots positive,
/// entries above a pivot reduced into `[0, pivot)`, zero rows removed.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        // gcd-eliminate column c below row r
        loop {
            let mut piv: Option<usize> = None;
            for i in r..a.len() {
                if !a[i][c].is_zero() && piv.is_none_or(|p| a[i][c].abs() < a[p][c].abs()) {
                    piv = Some(i);
                }
            }
            let p = match piv {
                Some(p) => p,
                None => break,
            };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a.retain(|row| row.iter().any(|x| !x.is_zero()));
    a
}

/// A ℤ-basis of {u ∈ ℤ^n : A u = 0}, in Hermite normal form.
pub fn integer_kernel(a: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = match a.first() {
        Some(r) => r.len(),
        None => return Err(KhlError::DimensionMismatch("empty matrix".into())),
    };
    if a.iter().any(|r| r.len() != n) {
        return Err(KhlError::DimensionMismatch("ragged matrix".into()));
    }
    let m = a.len();
    // [A^T | I]
    let aug: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigInt> = (0..m).map(|i| BigInt::from(a[i][j])).collect();
            row.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let h = hermite_normal_form(&aug);
    let kernel: Vec<Vec<BigInt>> = h
        .into_iter()
        .filter(|row| row[..m].iter().all(|x| x.is_zero()))
        .map(|row| row[m..].to_vec())
        .collect();
    let kernel = hermite_normal_form(&kernel);
    kernel
        .into_iter()
        .map(|row| {
            row.iter()
                .map(|x| x.to_i64().ok_or_else(|| KhlError::Invalid("kernel entry overflows i64".into())))
                .collect()
        })
        .collect()
}

/// Rank over ℚ.
pub fn rank(a: &[Vec<i64>]) -> usize {
    let rows: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    hermite_normal_form(&rows).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &[Vec<i64>], u: &[i64]) -> Vec<i64> {
        a.iter().map(|r| r.iter().zip(u).map(|(x, y)| x * y).sum()).collect()
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let a = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert!(integer_kernel(&a).unwrap().is_empty());
    }

    #[test]
    fn all_ones_row() {
        let k = integer_kernel(&[vec![1, 1, 1]]).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(mul(&[vec![1, 1, 1]], v), vec![0]);
        }
        // (1,-1,0) is in the span: HNF basis is (1,0,-1),(0,1,-1)
        assert_eq!(k, vec![vec![1, 0, -1], vec![0, 1, -1]]);
    }

    #[test]
    fn twisted_cubic() {
        let a = vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]];
        let k = integer_kernel(&a).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(mul(&a, v), vec![0, 0]);
        }
        assert_eq!(rank(&a), 2);
    }
}
