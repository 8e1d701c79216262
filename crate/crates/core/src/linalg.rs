//! The exact matrix kernel: reduced row echelon form, rank, linear solve,
//! null space, inverse, and row-space membership.
//!
//! RREF is the canonical form used everywhere in this crate: subspaces are
//! compared by comparing the RREF of stacked basis vectors, so two bases
//! span the same subspace iff their canonical forms are equal.

use alloc::vec::Vec;

use thiserror::Error;

use crate::field::Scalar;
use crate::matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("system is inconsistent")]
    Inconsistent,
    #[error("matrix is not invertible")]
    NotInvertible,
}

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduced row echelon form by Gauss-Jordan elimination with exact pivots.
pub fn rref(m: &Matrix) -> Rref {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut pivot_row = 0usize;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(src) = (pivot_row..rows).find(|&r| !a.at(r, col).is_zero()) else {
            continue;
        };
        if src != pivot_row {
            for c in 0..cols {
                let tmp = a.at(src, c).clone();
                *a.at_mut(src, c) = a.at(pivot_row, c).clone();
                *a.at_mut(pivot_row, c) = tmp;
            }
        }
        let inv = a.at(pivot_row, col).inverse().expect("pivot is nonzero");
        for c in col..cols {
            let v = a.at(pivot_row, c) * &inv;
            *a.at_mut(pivot_row, c) = v;
        }
        for r in 0..rows {
            if r == pivot_row || a.at(r, col).is_zero() {
                continue;
            }
            let factor = a.at(r, col).clone();
            for c in col..cols {
                let v = a.at(r, c) - &(&factor * a.at(pivot_row, c));
                *a.at_mut(r, c) = v;
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    Rref { matrix: a, pivots }
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).rank()
}

/// One exact solution of `A x = b`, with free variables set to zero.
pub fn solve(a: &Matrix, b: &[Scalar]) -> Result<Vec<Scalar>, SolveError> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let field = a.field();
    let rhs = Matrix::from_fn(a.rows(), 1, field, |r, _| b[r].clone());
    let aug = a.hstack(&rhs);
    let red = rref(&aug);
    if red.pivots.last() == Some(&a.cols()) {
        return Err(SolveError::Inconsistent);
    }
    let mut x = alloc::vec![field.zero(); a.cols()];
    for (row, &col) in red.pivots.iter().enumerate() {
        x[col] = red.matrix.at(row, a.cols()).clone();
    }
    Ok(x)
}

/// Basis of the null space `{v : M v = 0}`, one vector per row, emitted in
/// RREF form so the output is canonical.
pub fn kernel(m: &Matrix) -> Matrix {
    let field = m.field();
    let cols = m.cols();
    let red = rref(m);
    let pivot_set: Vec<bool> = {
        let mut s = alloc::vec![false; cols];
        for &p in &red.pivots {
            s[p] = true;
        }
        s
    };
    let mut basis: Vec<Vec<Scalar>> = Vec::new();
    for free in 0..cols {
        if pivot_set[free] {
            continue;
        }
        let mut v = alloc::vec![field.zero(); cols];
        v[free] = field.one();
        for (row, &p) in red.pivots.iter().enumerate() {
            v[p] = -red.matrix.at(row, free);
        }
        basis.push(v);
    }
    let stacked = Matrix::from_rows(field, basis, cols);
    rref(&stacked).matrix
}

/// Inverse by Gauss-Jordan on `[M | I]`.
pub fn inverse(m: &Matrix) -> Result<Matrix, SolveError> {
    assert!(m.is_square(), "inverse of a non-square matrix");
    let n = m.rows();
    let aug = m.hstack(&Matrix::identity(n, m.field()));
    let red = rref(&aug);
    if red.pivots.len() < n || red.pivots[n - 1] != n - 1 {
        return Err(SolveError::NotInvertible);
    }
    Ok(red.matrix.select_cols(&(n..2 * n).collect::<Vec<_>>()))
}

/// Nonzero rows of the RREF: a canonical basis of the row space.
pub fn row_space_basis(m: &Matrix) -> Matrix {
    let red = rref(m);
    let keep: Vec<usize> = (0..red.rank()).collect();
    red.matrix.select_rows(&keep)
}

/// Whether `v` lies in the row space described by a reduced basis
/// (`basis` must already be in RREF with the given pivot columns).
pub fn in_row_space(basis: &Matrix, pivots: &[usize], v: &[Scalar]) -> bool {
    assert_eq!(basis.cols(), v.len());
    let mut v = v.to_vec();
    for (row, &p) in pivots.iter().enumerate() {
        if v[p].is_zero() {
            continue;
        }
        let coef = v[p].clone();
        for c in 0..basis.cols() {
            let nv = &v[c] - &(&coef * basis.at(row, c));
            v[c] = nv;
        }
    }
    v.iter().all(Scalar::is_zero)
}

/// Coordinates of `v` in a reduced basis, or `None` if `v` is outside the
/// row space. Coordinates are read off the pivot columns.
pub fn coordinates_in_row_space(
    basis: &Matrix,
    pivots: &[usize],
    v: &[Scalar],
) -> Option<Vec<Scalar>> {
    assert_eq!(basis.cols(), v.len());
    let coords: Vec<Scalar> = pivots.iter().map(|&p| v[p].clone()).collect();
    let mut rest = v.to_vec();
    for (row, coef) in coords.iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        for c in 0..basis.cols() {
            let nv = &rest[c] - &(coef * basis.at(row, c));
            rest[c] = nv;
        }
    }
    if rest.iter().all(Scalar::is_zero) {
        Some(coords)
    } else {
        None
    }
}
