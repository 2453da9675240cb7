//! Small dense linear algebra: Gaussian elimination and the Perron root of
//! nonnegative irreducible matrices.

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot is zero (exactly, for exact scalars) or
/// below `singular_tol` in magnitude.
pub fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>, singular_tol: T) -> Option<Vec<T>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("comparable"))?;
        if a[pivot][col].abs() <= singular_tol {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == T::zero() {
                continue;
            }
            for k in col..n {
                let d = f * a[col][k];
                a[row][k] = a[row][k] - d;
            }
            let d = f * b[col];
            b[row] = b[row] - d;
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let s = (row + 1..n).fold(b[row], |acc, k| acc - a[row][k] * x[k]);
        x[row] = s / a[row][row];
    }
    Some(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerronPair<T> {
    /// Spectral radius.
    pub root: T,
    /// Positive eigenvector, normalized to sum one.
    pub vector: Vec<T>,
    pub iterations: usize,
}

/// Right Perron pair of a nonnegative irreducible matrix by shifted power
/// iteration. The shift by the mean row sum makes the iteration matrix
/// primitive, so periodic matrices converge too. Stops when the
/// Collatz–Wielandt bounds `min_i (Mx)_i/x_i <= ρ <= max_i (Mx)_i/x_i` agree
/// to `rel_tol`.
pub fn perron_right<T: Real>(m: &[Vec<T>], start: Option<&[T]>, rel_tol: T, max_iter: usize) -> Result<PerronPair<T>> {
    let n = m.len();
    if n == 0 {
        return Err(Error::Empty("matrix"));
    }
    let rel_tol = rel_tol.max(T::epsilon() * T::of_count(8));
    let shift = m.iter().map(|r| r.iter().fold(T::zero(), |a, &b| a + b)).fold(T::zero(), |a, b| a + b) / T::of_count(n);
    let mut x: Vec<T> = match start {
        Some(s) if s.len() == n && s.iter().all(|&v| v > T::zero()) => s.to_vec(),
        _ => vec![T::one() / T::of_count(n); n],
    };
    let mut gap = T::infinity();
    for it in 0..max_iter {
        let mx: Vec<T> = m.iter().map(|row| row.iter().zip(&x).fold(T::zero(), |a, (&mij, &xj)| a + mij * xj)).collect();
        let (mut lo, mut hi) = (T::infinity(), T::zero());
        for (&y, &xi) in mx.iter().zip(&x) {
            let r = y / xi;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        gap = (hi - lo) / hi;
        let sum = mx.iter().zip(&x).fold(T::zero(), |a, (&y, &xi)| a + y + shift * xi);
        let next: Vec<T> = mx.iter().zip(&x).map(|(&y, &xi)| (y + shift * xi) / sum).collect();
        if gap <= rel_tol {
            let two = T::one() + T::one();
            return Ok(PerronPair { root: (lo + hi) / two, vector: next, iterations: it + 1 });
        }
        if next.iter().any(|v| !(*v > T::zero())) {
            return Err(Error::NonConvergence { what: "power iteration", iterations: it + 1, residual: f64::NAN });
        }
        x = next;
    }
    Err(Error::NonConvergence { what: "power iteration", iterations: max_iter, residual: gap.as_f64() })
}

pub fn transpose<T: Copy>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = m.len();
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| (0..n).map(|i| m[i][j]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn solves_exactly_on_rationals() {
        let r = |n| Rational64::from_integer(n);
        let a = vec![vec![r(2), r(1)], vec![r(1), r(3)]];
        let x = solve(a, vec![r(3), r(5)], r(0)).unwrap();
        assert_eq!(x, vec![Rational64::new(4, 5), Rational64::new(7, 5)]);
        assert!(solve(vec![vec![r(1), r(2)], vec![r(2), r(4)]], vec![r(1), r(2)], r(0)).is_none());
    }

    #[test]
    fn perron_of_small_matrices() {
        let p = perron_right(&[vec![1.0, 1.0], vec![1.0, 1.0]], None, 1e-12, 1000).unwrap();
        assert!((p.root - 2f64).abs() < 1e-12);
        let p = perron_right(&[vec![3.0, 3.0], vec![1.0, 1.0]], None, 1e-12, 1000).unwrap();
        assert!((p.root - 4f64).abs() < 1e-11);
        // periodic: plain power iteration would oscillate
        let p = perron_right(&[vec![0.0, 2.0], vec![8.0, 0.0]], None, 1e-12, 1000).unwrap();
        assert!((p.root - 4f64).abs() < 1e-11);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let p = perron_right(&[vec![1.0, 1.0], vec![1.0, 0.0]], None, 1e-12, 1000).unwrap();
        assert!((p.root - golden).abs() < 1e-12);
        assert!((p.vector[0] / p.vector[1] - golden).abs() < 1e-10);
    }
}
