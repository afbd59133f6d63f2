//! Exact rational linear algebra on small square matrices.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Q = Ratio<i64>;

/// Fractional part in `[0, 1)`.
pub fn frac(x: Q) -> Q {
    x - x.floor()
}

pub fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Q>) -> i64 {
    xs.into_iter().fold(1i64, |acc, x| acc.lcm(x.denom()))
}

/// Determinant of an integer matrix via fraction-free Bareiss elimination.
pub fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

/// Inverse of an integer matrix over the rationals, or `None` when singular.
pub fn inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Q> = row.iter().map(|&x| Q::from_integer(x)).collect();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(pivot, col);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col];
                for j in 0..2 * n {
                    let v = a[col][j];
                    a[i][j] -= f * v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(m: &[Vec<i64>], v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(&a, &b)| b * a).sum())
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = m.len();
    if n == 0 {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| (0..n).map(|i| m[i][j].clone()).collect())
        .collect()
}

pub fn abs_det(m: &[Vec<i64>]) -> u64 {
    det(m).unsigned_abs()
}
