//! Exact eigenvalues, eigenspaces, and simultaneous diagonalization of
//! commuting families.
//!
//! Over the rationals, eigenvalues are the rational roots of the
//! characteristic polynomial of the integer-cleared matrix; over `F_p` every
//! residue is tested. Either way an eigenspace is the kernel of `M - lambda I`,
//! so everything stays exact.

use alloc::vec::Vec;

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};
use crate::linalg::{coordinates_in_row_space, kernel, rref};
use crate::matrix::Matrix;
use crate::poly::rational_eigenvalues;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagonalizeError {
    #[error("family members must be square matrices of equal size over one field")]
    ShapeMismatch,
    #[error("matrices do not pairwise commute")]
    NotCommuting,
    #[error("spectrum does not split over the base field")]
    NotDiagonalizableOverField,
}

/// Eigenvalues (pairwise distinct, ascending) with their eigenspaces
/// (rows of each matrix form an RREF basis).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<Scalar>,
    pub eigenspaces: Vec<Matrix>,
}

impl EigenDecomposition {
    /// Sum of eigenspace dimensions; equals `n` iff the matrix is
    /// diagonalizable over its field.
    pub fn total_dimension(&self) -> usize {
        self.eigenspaces.iter().map(Matrix::rows).sum()
    }
}

/// All eigenvalues in the base field, with exact eigenspaces.
pub fn eigen(m: &Matrix) -> EigenDecomposition {
    assert!(m.is_square(), "eigen of a non-square matrix");
    let field = m.field();
    let candidates: Vec<Scalar> = match field {
        FieldSpec::Rationals => rational_eigenvalues(m),
        FieldSpec::PrimeField(p) => (0..p).map(|v| field.from_i64(v as i64)).collect(),
    };
    let mut eigenvalues = Vec::new();
    let mut eigenspaces = Vec::new();
    for lambda in candidates {
        let shifted = m.sub(&Matrix::identity(m.rows(), field).scale(&lambda));
        let space = kernel(&shifted);
        if space.rows() > 0 {
            eigenvalues.push(lambda);
            eigenspaces.push(space);
        }
    }
    EigenDecomposition {
        eigenvalues,
        eigenspaces,
    }
}

/// Restriction of `a` to the row-space of `p` (which must be `a`-invariant
/// and in RREF): returns `r` with `a p_i^T = sum_j r[j][i] p_j^T`.
fn restriction(a: &Matrix, p: &Matrix, pivots: &[usize]) -> Matrix {
    let k = p.rows();
    let field = p.field();
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(k);
    for i in 0..k {
        let image = a.mul_vec(p.row(i));
        let coords = coordinates_in_row_space(p, pivots, &image)
            .expect("invariant subspace of a commuting family");
        cols.push(coords);
    }
    Matrix::from_fn(k, k, field, |r, c| cols[c][r].clone())
}

/// Simultaneously diagonalize a pairwise-commuting family: returns an
/// invertible `g` with `g A g^{-1}` diagonal for every `A` in the family.
///
/// The rows of `g` are the concatenated bases of the common eigenspaces,
/// refined one family member at a time; a family that is already diagonal
/// gets `g = I`. Fails with [`DiagonalizeError::NotDiagonalizableOverField`]
/// when some restriction's eigenspaces do not fill the subspace (over `Q`
/// this includes irrational spectra).
pub fn simultaneous_diagonalize(family: &[Matrix]) -> Result<Matrix, DiagonalizeError> {
    let first = family.first().expect("family must be nonempty");
    let n = first.rows();
    let field = first.field();
    for m in family {
        if !m.is_square() || m.rows() != n || m.field() != field {
            return Err(DiagonalizeError::ShapeMismatch);
        }
    }
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            if a.mul(b) != b.mul(a) {
                return Err(DiagonalizeError::NotCommuting);
            }
        }
    }
    if family.iter().all(Matrix::is_diagonal) {
        return Ok(Matrix::identity(n, field));
    }

    // Refine common *left* eigenspaces (right eigenspaces of the transposes)
    // so that stacking basis rows directly yields the conjugating matrix.
    let mut subspaces: Vec<(Matrix, Vec<usize>)> = alloc::vec![(
        Matrix::identity(n, field),
        (0..n).collect::<Vec<usize>>()
    )];
    for a in family {
        let at = a.transpose();
        let mut next = Vec::new();
        for (basis, pivots) in &subspaces {
            let r = restriction(&at, basis, pivots);
            let ed = eigen(&r);
            if ed.total_dimension() < basis.rows() {
                return Err(DiagonalizeError::NotDiagonalizableOverField);
            }
            for space in &ed.eigenspaces {
                let rows = rref(&space.mul(basis));
                next.push((rows.matrix, rows.pivots));
            }
        }
        subspaces = next;
    }
    subspaces.sort_by(|(ma, pa), (mb, pb)| {
        pa.cmp(pb).then_with(|| {
            for (x, y) in ma.entries().iter().zip(mb.entries()) {
                let ord = x.sort_cmp(y);
                if ord != core::cmp::Ordering::Equal {
                    return ord;
                }
            }
            core::cmp::Ordering::Equal
        })
    });
    let mut g = subspaces[0].0.clone();
    for (basis, _) in &subspaces[1..] {
        g = g.vstack(basis);
    }
    debug_assert_eq!(g.rows(), n);
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inverse;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn is_diagonal_conjugate(g: &Matrix, m: &Matrix) -> bool {
        let gi = inverse(g).unwrap();
        g.mul(m).mul(&gi).is_diagonal()
    }

    #[test]
    fn eigen_diagonal() {
        let m = Matrix::from_i64(3, 3, q(), &[1, 0, 0, 0, 2, 0, 0, 0, 2]);
        let ed = eigen(&m);
        assert_eq!(ed.eigenvalues, alloc::vec![q().from_i64(1), q().from_i64(2)]);
        assert_eq!(ed.eigenspaces[0].rows(), 1);
        assert_eq!(ed.eigenspaces[1].rows(), 2);
        assert_eq!(ed.total_dimension(), 3);
    }

    #[test]
    fn eigen_nilpotent_block() {
        let m = Matrix::from_i64(2, 2, q(), &[0, 1, 0, 0]);
        let ed = eigen(&m);
        assert_eq!(ed.eigenvalues, alloc::vec![q().zero()]);
        assert_eq!(ed.total_dimension(), 1); // not diagonalizable
    }

    #[test]
    fn eigen_upper_triangular() {
        // Solving (M - I)v = 0 by hand gives (1,0); (M - 2I)v = 0 gives (1,1).
        let m = Matrix::from_i64(2, 2, q(), &[1, 1, 0, 2]);
        let ed = eigen(&m);
        assert_eq!(ed.eigenvalues, alloc::vec![q().from_i64(1), q().from_i64(2)]);
        assert_eq!(ed.eigenspaces[0], Matrix::from_i64(1, 2, q(), &[1, 0]));
        assert_eq!(ed.eigenspaces[1], Matrix::from_i64(1, 2, q(), &[1, 1]));
    }

    #[test]
    fn eigen_over_f5() {
        let f5 = FieldSpec::prime_field(5).unwrap();
        let m = Matrix::from_i64(2, 2, f5, &[0, 1, 1, 0]);
        let ed = eigen(&m);
        // eigenvalues 1 and -1 = 4 over F_5
        assert_eq!(ed.eigenvalues, alloc::vec![f5.from_i64(1), f5.from_i64(4)]);
        assert_eq!(ed.total_dimension(), 2);
    }

    #[test]
    fn already_diagonal_family_gets_identity() {
        let a = Matrix::from_i64(3, 3, q(), &[5, 0, 0, 0, 7, 0, 0, 0, 5]);
        let b = Matrix::from_i64(3, 3, q(), &[1, 0, 0, 0, 1, 0, 0, 0, 2]);
        let g = simultaneous_diagonalize(&[a, b]).unwrap();
        assert_eq!(g, Matrix::identity(3, q()));
    }

    #[test]
    fn single_upper_triangular() {
        let m = Matrix::from_i64(2, 2, q(), &[1, 1, 0, 2]);
        let g = simultaneous_diagonalize(core::slice::from_ref(&m)).unwrap();
        assert!(is_diagonal_conjugate(&g, &m));
    }

    #[test]
    fn swap_matrix_over_q() {
        let m = Matrix::from_i64(2, 2, q(), &[0, 1, 1, 0]);
        let g = simultaneous_diagonalize(core::slice::from_ref(&m)).unwrap();
        assert!(is_diagonal_conjugate(&g, &m));
        let gi = inverse(&g).unwrap();
        let d = g.mul(&m).mul(&gi).diagonal();
        let mut d = d;
        d.sort_by(|a, b| a.sort_cmp(b));
        assert_eq!(d, alloc::vec![q().from_i64(-1), q().from_i64(1)]);
    }

    #[test]
    fn commuting_family_rejections() {
        let e = Matrix::from_i64(2, 2, q(), &[0, 1, 0, 0]);
        let f = Matrix::from_i64(2, 2, q(), &[0, 0, 1, 0]);
        assert_eq!(
            simultaneous_diagonalize(&[e.clone(), f]),
            Err(DiagonalizeError::NotCommuting)
        );
        assert_eq!(
            simultaneous_diagonalize(core::slice::from_ref(&e)),
            Err(DiagonalizeError::NotDiagonalizableOverField)
        );
        // x^2 + 1: irrational (complex) spectrum over Q
        let rot = Matrix::from_i64(2, 2, q(), &[0, -1, 1, 0]);
        assert_eq!(
            simultaneous_diagonalize(core::slice::from_ref(&rot)),
            Err(DiagonalizeError::NotDiagonalizableOverField)
        );
    }

    #[test]
    fn commuting_pair_diagonalized_together() {
        // Conjugate two diagonal matrices by the same invertible matrix.
        let s = Matrix::from_i64(3, 3, q(), &[1, 1, 0, 0, 1, 1, 1, 0, 1]);
        let si = inverse(&s).unwrap();
        let d1 = Matrix::from_i64(3, 3, q(), &[1, 0, 0, 0, 2, 0, 0, 0, 2]);
        let d2 = Matrix::from_i64(3, 3, q(), &[3, 0, 0, 0, 3, 0, 0, 0, 5]);
        let a = s.mul(&d1).mul(&si);
        let b = s.mul(&d2).mul(&si);
        let g = simultaneous_diagonalize(&[a.clone(), b.clone()]).unwrap();
        assert!(is_diagonal_conjugate(&g, &a));
        assert!(is_diagonal_conjugate(&g, &b));
    }
}
