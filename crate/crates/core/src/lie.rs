//! Matrix Lie algebras as spanned subspaces of `n x n` matrices: brackets,
//! closure, structure constants, adjoint matrices, derived and lower central
//! series, and the solvable/nilpotent/abelian predicates.
//!
//! An algebra's basis is canonicalized as the RREF of the stacked
//! `n^2`-vectors, so two algebras are equal as subspaces iff their canonical
//! bases are equal. [`MatrixLieAlgebra::with_basis`] keeps a caller-chosen
//! ordered basis instead, for when structure constants in a particular
//! presentation are wanted.

use alloc::vec::Vec;

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};
use crate::linalg::{in_row_space, inverse, rref, Rref};
use crate::matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("matrices must share one square shape and one field")]
    ShapeMismatch,
    #[error("basis is linearly dependent")]
    DependentBasis,
    #[error("algebra is not closed under the bracket")]
    NotClosed,
    #[error("conjugating matrix is not invertible")]
    NotInvertible,
}

/// The commutator `[A, B] = AB - BA`.
pub fn bracket(a: &Matrix, b: &Matrix) -> Result<Matrix, LieError> {
    if !a.is_square() || a.rows() != b.rows() || !b.is_square() || a.field() != b.field() {
        return Err(LieError::ShapeMismatch);
    }
    Ok(a.mul(b).sub(&b.mul(a)))
}

/// A subspace of `n x n` matrices, stored through a linearly independent
/// basis plus the RREF canonical form of the stacked basis vectors.
#[derive(Debug, Clone)]
pub struct MatrixLieAlgebra {
    n: usize,
    field: FieldSpec,
    basis: Vec<Matrix>,
    canonical: Rref,
}

impl PartialEq for MatrixLieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.field == other.field
            && self.canonical.matrix == other.canonical.matrix
    }
}
impl Eq for MatrixLieAlgebra {}

fn stack_flat(n: usize, field: FieldSpec, mats: &[Matrix]) -> Matrix {
    let rows: Vec<Vec<Scalar>> = mats.iter().map(Matrix::flatten).collect();
    Matrix::from_rows(field, rows, n * n)
}

impl MatrixLieAlgebra {
    /// The span of the given matrices, with the canonical RREF basis.
    /// Inputs may be dependent; the zero span is allowed.
    pub fn span(n: usize, field: FieldSpec, mats: &[Matrix]) -> Result<Self, LieError> {
        for m in mats {
            if !m.is_square() || m.rows() != n || m.field() != field {
                return Err(LieError::ShapeMismatch);
            }
        }
        let red = rref(&stack_flat(n, field, mats));
        let rank = red.rank();
        let canon = Rref {
            matrix: red.matrix.select_rows(&(0..rank).collect::<Vec<_>>()),
            pivots: red.pivots,
        };
        let basis = (0..rank)
            .map(|r| Matrix::unflatten(n, field, canon.matrix.row_vec(r)))
            .collect();
        Ok(MatrixLieAlgebra {
            n,
            field,
            basis,
            canonical: canon,
        })
    }

    /// Keep the caller's ordered basis (must be linearly independent).
    pub fn with_basis(n: usize, field: FieldSpec, mats: Vec<Matrix>) -> Result<Self, LieError> {
        let by_span = Self::span(n, field, &mats)?;
        if by_span.dim() != mats.len() {
            return Err(LieError::DependentBasis);
        }
        Ok(MatrixLieAlgebra {
            basis: mats,
            ..by_span
        })
    }

    pub fn zero(n: usize, field: FieldSpec) -> Self {
        Self::span(n, field, &[]).expect("zero span")
    }

    pub fn ambient_size(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    /// Canonical RREF basis of the stacked `n^2`-vectors.
    pub fn canonical_rows(&self) -> &Matrix {
        &self.canonical.matrix
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        m.is_square()
            && m.rows() == self.n
            && m.field() == self.field
            && in_row_space(&self.canonical.matrix, &self.canonical.pivots, &m.flatten())
    }

    pub fn subspace_eq(&self, other: &Self) -> bool {
        self == other
    }

    /// Closure under the bracket, decided by exact membership of every
    /// pairwise basis bracket.
    pub fn is_closed(&self) -> bool {
        for (i, a) in self.basis.iter().enumerate() {
            for b in &self.basis[i + 1..] {
                let br = bracket(a, b).expect("basis shares shape");
                if !self.contains(&br) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_abelian(&self) -> bool {
        for (i, a) in self.basis.iter().enumerate() {
            for b in &self.basis[i + 1..] {
                if !bracket(a, b).expect("basis shares shape").is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// The conjugated algebra `g L g^{-1}` (with the canonical basis).
    pub fn conjugate(&self, g: &Matrix) -> Result<Self, LieError> {
        let gi = inverse(g).map_err(|_| LieError::NotInvertible)?;
        let mats: Vec<Matrix> = self.basis.iter().map(|b| g.mul(b).mul(&gi)).collect();
        Self::span(self.n, self.field, &mats)
    }

    /// Structure constants of the stored basis: `c[i][j]` are the exact
    /// coordinates of `[b_i, b_j]` in that basis.
    pub fn structure_constants(&self) -> Result<StructureConstants, LieError> {
        let d = self.dim();
        let mut c = alloc::vec![alloc::vec![alloc::vec![self.field.zero(); d]; d]; d];
        let stacked_t = stack_flat(self.n, self.field, &self.basis).transpose();
        for i in 0..d {
            for j in i + 1..d {
                let br = bracket(&self.basis[i], &self.basis[j])?;
                let coords = crate::linalg::solve(&stacked_t, &br.flatten())
                    .map_err(|_| LieError::NotClosed)?;
                for (k, v) in coords.into_iter().enumerate() {
                    c[i][j][k] = v.clone();
                    c[j][i][k] = -&v;
                }
            }
        }
        Ok(StructureConstants {
            dim: d,
            field: self.field,
            c,
        })
    }

    fn commutator_with(&self, other: &Self) -> Self {
        let mut brackets = Vec::new();
        for a in &self.basis {
            for b in &other.basis {
                brackets.push(bracket(a, b).expect("shapes agree"));
            }
        }
        Self::span(self.n, self.field, &brackets).expect("shapes agree")
    }

    /// `L^(0) = L`, `L^(i+1) = [L^(i), L^(i)]`, until the dimension
    /// stabilizes.
    pub fn derived_series(&self) -> Vec<Self> {
        let mut series = alloc::vec![self.clone()];
        loop {
            let last = series.last().unwrap();
            let next = last.commutator_with(last);
            if next.dim() == last.dim() {
                break;
            }
            series.push(next);
        }
        series
    }

    /// `L_0 = L`, `L_{i+1} = [L, L_i]`, until the dimension stabilizes.
    pub fn lower_central_series(&self) -> Vec<Self> {
        let mut series = alloc::vec![self.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self.commutator_with(last);
            if next.dim() == last.dim() {
                break;
            }
            series.push(next);
        }
        series
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().dim() == 0
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().unwrap().dim() == 0
    }
}

/// The tensor `c[i][j][k]` with `[b_i, b_j] = sum_k c[i][j][k] b_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    pub dim: usize,
    pub field: FieldSpec,
    pub c: Vec<Vec<Vec<Scalar>>>,
}

impl StructureConstants {
    pub fn satisfies_skew_symmetry(&self) -> bool {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if self.c[i][j][k] != -&self.c[j][i][k] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn satisfies_jacobi(&self) -> bool {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut acc = self.field.zero();
                        for m in 0..d {
                            // [v_i,[v_j,v_k]] + [v_k,[v_i,v_j]] + [v_j,[v_k,v_i]]
                            acc = &acc + &(&self.c[j][k][m] * &self.c[i][m][l]);
                            acc = &acc + &(&self.c[i][j][m] * &self.c[k][m][l]);
                            acc = &acc + &(&self.c[k][i][m] * &self.c[j][m][l]);
                        }
                        if !acc.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Matrices of the adjoint maps `ad_{b_i}(u) = [b_i, u]` in the stored
/// basis: entry `(k, j)` of the `i`-th matrix is `c[i][j][k]`.
pub fn adjoint_rep(sc: &StructureConstants) -> Vec<Matrix> {
    (0..sc.dim)
        .map(|i| Matrix::from_fn(sc.dim, sc.dim, sc.field, |k, j| sc.c[i][j][k].clone()))
        .collect()
}

/// Smallest bracket-closed algebra containing the span of the generators:
/// iterate bracket-and-extend until the dimension stabilizes.
pub fn lie_closure(
    n: usize,
    field: FieldSpec,
    gens: &[Matrix],
) -> Result<MatrixLieAlgebra, LieError> {
    let mut current = MatrixLieAlgebra::span(n, field, gens)?;
    loop {
        let mut mats: Vec<Matrix> = current.basis.to_vec();
        let before = current.dim();
        for i in 0..before {
            for j in i + 1..before {
                mats.push(bracket(&current.basis[i], &current.basis[j])?);
            }
        }
        let next = MatrixLieAlgebra::span(n, field, &mats)?;
        if next.dim() == before {
            return Ok(next);
        }
        current = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn e() -> Matrix {
        Matrix::from_i64(2, 2, q(), &[0, 1, 0, 0])
    }
    fn f() -> Matrix {
        Matrix::from_i64(2, 2, q(), &[0, 0, 1, 0])
    }
    fn h() -> Matrix {
        Matrix::from_i64(2, 2, q(), &[1, 0, 0, -1])
    }

    fn diagonal_algebra(n: usize) -> MatrixLieAlgebra {
        let mats: Vec<Matrix> = (0..n)
            .map(|i| {
                Matrix::from_fn(n, n, q(), |r, c| {
                    if r == c && r == i {
                        q().one()
                    } else {
                        q().zero()
                    }
                })
            })
            .collect();
        MatrixLieAlgebra::span(n, q(), &mats).unwrap()
    }

    #[test]
    fn bracket_basic_identities() {
        let a = Matrix::from_i64(2, 2, q(), &[1, 2, 3, 4]);
        assert!(bracket(&a, &a).unwrap().is_zero());
        assert!(bracket(&Matrix::identity(2, q()), &a).unwrap().is_zero());
        assert_eq!(bracket(&e(), &f()).unwrap(), h());
        let b = Matrix::from_i64(3, 3, q(), &[0; 9]);
        assert_eq!(bracket(&a, &b), Err(LieError::ShapeMismatch));
    }

    #[test]
    fn closure_checks() {
        assert!(diagonal_algebra(3).is_closed());
        let nilp = MatrixLieAlgebra::span(2, q(), &[e()]).unwrap();
        assert!(nilp.is_closed());
        let ef = MatrixLieAlgebra::span(2, q(), &[e(), f()]).unwrap();
        assert!(!ef.is_closed());
    }

    #[test]
    fn closure_of_sl2_generators() {
        let sl2 = lie_closure(2, q(), &[e(), f()]).unwrap();
        assert_eq!(sl2.dim(), 3);
        assert!(sl2.is_closed());
        assert!(sl2.contains(&h()));
        // closure of a single matrix is itself
        let single = lie_closure(2, q(), &[e()]).unwrap();
        assert_eq!(single.dim(), 1);
        // closure of the diagonal algebra is unchanged
        let diag = diagonal_algebra(3);
        let closed = lie_closure(3, q(), diag.basis()).unwrap();
        assert_eq!(closed, diag);
    }

    #[test]
    fn abelian_checks() {
        assert!(diagonal_algebra(3).is_abelian());
        let sl2 = lie_closure(2, q(), &[e(), f()]).unwrap();
        assert!(!sl2.is_abelian());
        assert!(MatrixLieAlgebra::zero(2, q()).is_abelian());
    }

    #[test]
    fn sl2_structure_constants() {
        let sl2 = MatrixLieAlgebra::with_basis(2, q(), alloc::vec![e(), f(), h()]).unwrap();
        let sc = sl2.structure_constants().unwrap();
        // [e,f] = h, [h,e] = 2e, [h,f] = -2f
        let coord = |i: usize, j: usize| -> Vec<i64> {
            sc.c[i][j]
                .iter()
                .map(|s| {
                    let r = s.as_rational();
                    assert!(r.is_integer());
                    i64::try_from(r.to_integer()).unwrap()
                })
                .collect()
        };
        assert_eq!(coord(0, 1), alloc::vec![0, 0, 1]);
        assert_eq!(coord(2, 0), alloc::vec![2, 0, 0]);
        assert_eq!(coord(2, 1), alloc::vec![0, -2, 0]);
        assert!(sc.satisfies_skew_symmetry());
        assert!(sc.satisfies_jacobi());

        // ad_h = diag(2, -2, 0) in the (e, f, h) basis
        let ads = adjoint_rep(&sc);
        assert_eq!(
            ads[2],
            Matrix::from_i64(3, 3, q(), &[2, 0, 0, 0, -2, 0, 0, 0, 0])
        );
    }

    #[test]
    fn abelian_structure_constants_vanish() {
        let diag = diagonal_algebra(2);
        let sc = diag.structure_constants().unwrap();
        assert!(sc.c.iter().flatten().flatten().all(Scalar::is_zero));
        let ads = adjoint_rep(&sc);
        assert_eq!(ads.len(), 2);
        assert!(ads.iter().all(Matrix::is_zero));

        let single = MatrixLieAlgebra::span(2, q(), &[e()]).unwrap();
        let sc = single.structure_constants().unwrap();
        assert_eq!(sc.dim, 1);
        assert!(sc.c[0][0][0].is_zero());
    }

    #[test]
    fn structure_constants_require_closure() {
        let ef = MatrixLieAlgebra::span(2, q(), &[e(), f()]).unwrap();
        assert_eq!(ef.structure_constants(), Err(LieError::NotClosed));
    }

    #[test]
    fn series_and_predicates() {
        // strictly upper triangular 2x2: nilpotent and solvable
        let strict = MatrixLieAlgebra::span(2, q(), &[e()]).unwrap();
        assert!(strict.is_nilpotent());
        assert!(strict.is_solvable());

        // upper triangular 2x2 (3-dim): solvable but not nilpotent
        let upper = MatrixLieAlgebra::span(
            2,
            q(),
            &[
                Matrix::from_i64(2, 2, q(), &[1, 0, 0, 0]),
                Matrix::from_i64(2, 2, q(), &[0, 0, 0, 1]),
                e(),
            ],
        )
        .unwrap();
        let ds = upper.derived_series();
        assert_eq!(
            ds.iter().map(MatrixLieAlgebra::dim).collect::<Vec<_>>(),
            alloc::vec![3, 1, 0]
        );
        assert!(upper.is_solvable());
        assert!(!upper.is_nilpotent());
        let lc = upper.lower_central_series();
        assert_eq!(lc.last().unwrap().dim(), 1);

        // sl2: derived series is constant, not solvable
        let sl2 = lie_closure(2, q(), &[e(), f()]).unwrap();
        assert_eq!(sl2.derived_series().len(), 1);
        assert!(!sl2.is_solvable());
        assert!(!sl2.is_nilpotent());
    }

    #[test]
    fn derived_series_inside_lower_central() {
        let upper = MatrixLieAlgebra::span(
            2,
            q(),
            &[Matrix::from_i64(2, 2, q(), &[1, 0, 0, 0]), e()],
        )
        .unwrap();
        let ds = upper.derived_series();
        let lc = upper.lower_central_series();
        for (d, l) in ds.iter().zip(&lc) {
            for b in d.basis() {
                assert!(l.contains(b));
            }
        }
    }

    #[test]
    fn conjugation_preserves_structure_constants() {
        let g = Matrix::from_i64(2, 2, q(), &[1, 1, 0, 1]);
        let gi = inverse(&g).unwrap();
        let basis = alloc::vec![e(), f(), h()];
        let conj_basis: Vec<Matrix> = basis.iter().map(|b| g.mul(b).mul(&gi)).collect();
        let sl2 = MatrixLieAlgebra::with_basis(2, q(), basis).unwrap();
        let conj = MatrixLieAlgebra::with_basis(2, q(), conj_basis).unwrap();
        assert_eq!(
            sl2.structure_constants().unwrap(),
            conj.structure_constants().unwrap()
        );
    }
}
