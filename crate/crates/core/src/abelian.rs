//! Conjugacy of abelian diagonalizable matrix Lie algebras, end to end:
//! simultaneously diagonalize, read off the weights, reduce to permutation
//! code equivalence on the weight rows, and assemble a verified conjugating
//! matrix.
//!
//! The key fact: two diagonal algebras are conjugate iff they are conjugate
//! by a permutation matrix, and flattening diagonals into row vectors turns
//! that into code equivalence. The returned witness composes the two
//! diagonalizers with the permutation matrix, so it is generally not itself
//! a permutation matrix, but it always satisfies `g L1 g^{-1} = L2` exactly.

use alloc::vec::Vec;

use thiserror::Error;

use crate::code::{code_equivalent, Code, CodeEquivStats, ResidualStrategy};
use crate::eigen::{simultaneous_diagonalize, DiagonalizeError};
use crate::field::Scalar;
use crate::lie::{LieError, MatrixLieAlgebra};
use crate::linalg::inverse;
use crate::matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelianError {
    #[error("algebra is not abelian")]
    NotAbelian,
    #[error("algebras must share the ambient size and field")]
    InputMismatch,
    #[error(transparent)]
    Diagonalize(#[from] DiagonalizeError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Simultaneous eigenvalue data of an abelian diagonalizable algebra:
/// row `i` holds the weight vector of coordinate `i` (one entry per basis
/// element), and `weight_spaces` groups equal rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTable {
    pub dim: usize,
    pub ambient: usize,
    /// `ambient x dim`; entry `(i, k)` is the `i`-th diagonal entry of the
    /// `k`-th diagonalized basis element.
    pub weights: Matrix,
    /// Cells of equal weight rows, in order of first occurrence.
    pub weight_spaces: Vec<Vec<usize>>,
}

impl WeightTable {
    /// Multiset of weight-space dimensions (sorted); a conjugacy invariant.
    pub fn space_dimensions(&self) -> Vec<usize> {
        let mut dims: Vec<usize> = self.weight_spaces.iter().map(Vec::len).collect();
        dims.sort_unstable();
        dims
    }
}

/// Diagonalize the basis and tabulate weights. Errors if the algebra is not
/// abelian or the spectrum does not split over the field.
pub fn weight_table(l: &MatrixLieAlgebra) -> Result<(Matrix, WeightTable), AbelianError> {
    if !l.is_abelian() {
        return Err(AbelianError::NotAbelian);
    }
    let n = l.ambient_size();
    let field = l.field();
    let d = l.dim();
    let g = if d == 0 {
        Matrix::identity(n, field)
    } else {
        simultaneous_diagonalize(l.basis())?
    };
    let gi = inverse(&g).expect("diagonalizer is invertible");
    let diagonals: Vec<Vec<Scalar>> = l
        .basis()
        .iter()
        .map(|b| g.mul(b).mul(&gi).diagonal())
        .collect();
    let weights = Matrix::from_fn(n, d, field, |i, k| diagonals[k][i].clone());
    let mut weight_spaces: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let row = weights.row(i);
        match weight_spaces
            .iter_mut()
            .find(|cell| weights.row(cell[0]) == row)
        {
            Some(cell) => cell.push(i),
            None => weight_spaces.push(alloc::vec![i]),
        }
    }
    Ok((
        g,
        WeightTable {
            dim: d,
            ambient: n,
            weights,
            weight_spaces,
        },
    ))
}

/// An invertible matrix with `g L1 g^{-1} = L2`, already verified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyWitness {
    pub g: Matrix,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AbelianStats {
    pub code_stats: CodeEquivStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianOutcome {
    pub witness: Option<ConjugacyWitness>,
    pub stats: AbelianStats,
}

/// Exact check that `g L1 g^{-1} = L2` as subspaces.
pub fn verify_conjugacy(
    l1: &MatrixLieAlgebra,
    l2: &MatrixLieAlgebra,
    g: &Matrix,
) -> Result<bool, LieError> {
    Ok(l1.conjugate(g)? == *l2)
}

/// Decide conjugacy of two abelian diagonalizable algebras.
pub fn abelian_conjugate(
    l1: &MatrixLieAlgebra,
    l2: &MatrixLieAlgebra,
) -> Result<AbelianOutcome, AbelianError> {
    if l1.ambient_size() != l2.ambient_size() || l1.field() != l2.field() {
        return Err(AbelianError::InputMismatch);
    }
    let mut stats = AbelianStats::default();
    if l1.dim() != l2.dim() {
        return Ok(AbelianOutcome {
            witness: None,
            stats,
        });
    }
    let n = l1.ambient_size();
    let field = l1.field();
    if l1.dim() == 0 {
        return Ok(AbelianOutcome {
            witness: Some(ConjugacyWitness {
                g: Matrix::identity(n, field),
            }),
            stats,
        });
    }
    let (g1, w1) = weight_table(l1)?;
    let (g2, w2) = weight_table(l2)?;
    // Fast fail: the multiset of weight-space dimensions is invariant.
    if w1.space_dimensions() != w2.space_dimensions() {
        return Ok(AbelianOutcome {
            witness: None,
            stats,
        });
    }
    let c1 = Code::new(&w1.weights.transpose());
    let c2 = Code::new(&w2.weights.transpose());
    let out = code_equivalent(&c1, &c2, ResidualStrategy::Enumerate)
        .expect("same field by construction");
    stats.code_stats = out.stats;
    let Some(cw) = out.witness else {
        return Ok(AbelianOutcome {
            witness: None,
            stats,
        });
    };
    // pi . C1 = C2, so P L1' P^{-1} = L2' on the diagonalized algebras;
    // undo the two diagonalizations around it.
    let p = Matrix::permutation(&cw.permutation, field);
    let g2_inv = inverse(&g2).expect("diagonalizer is invertible");
    let g = g2_inv.mul(&p).mul(&g1);
    if !verify_conjugacy(l1, l2, &g)? {
        // The permutation moves weight rows onto weight rows, so this
        // cannot happen; fail closed rather than hand out a bad witness.
        return Ok(AbelianOutcome {
            witness: None,
            stats,
        });
    }
    Ok(AbelianOutcome {
        witness: Some(ConjugacyWitness { g }),
        stats,
    })
}
