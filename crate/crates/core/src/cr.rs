//! The combined solver for completely reducible instances: an abelian weight
//! matrix and block-structured label data sharing one row set.
//!
//! The abelian part carries a GL(a) basis-change freedom on weight columns.
//! It is eliminated by pivot normalization: fix the lexicographically first
//! set of `a` independent weight rows of the first instance and normalize
//! them to the identity; for the second instance, try every ordered `a`-tuple
//! of rows with an invertible block (at most `C(r, a) * a!` candidates), and
//! after normalizing, each row's weight vector becomes an opaque row color
//! on the label data. What remains is a row-colored instance of the
//! block-structured matrix equivalence problem.

use alloc::vec::Vec;

use thiserror::Error;

use crate::field::Scalar;
use crate::linalg::{inverse, rank, rref};
use crate::matrix::Matrix;
use crate::perms::{factorial, BlockPermutations, Permutations, Subsets};
use crate::problema::{
    solve_boundedrows, solve_bruteforce, verify_witness, Budget, ProblemAError, ProblemAInstance,
    ProblemAWitness,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrError {
    #[error("weight matrices must share the shape and field")]
    InputMismatch,
    #[error(transparent)]
    ProblemA(#[from] ProblemAError),
}

/// Pre-decomposed completely reducible data: weight rows (one per
/// irreducible constituent) plus the label matrix with its blocks/groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CRInstance {
    pub weights: Matrix,
    pub pa: ProblemAInstance,
}

impl CRInstance {
    pub fn new(weights: Matrix, pa: ProblemAInstance) -> Result<Self, CrError> {
        if weights.rows() != pa.rows() {
            return Err(CrError::InputMismatch);
        }
        Ok(CRInstance { weights, pa })
    }

    pub fn rows(&self) -> usize {
        self.weights.rows()
    }

    pub fn abelian_dim(&self) -> usize {
        self.weights.cols()
    }

    /// The equivalent instance under `(pi, sigma, g, U)`: weights satisfy
    /// `self.weights = P_pi W2 U` and the label data is transformed
    /// accordingly, so the tuple is a valid witness between `self` and the
    /// result. `u` must be invertible `a x a`.
    pub fn transformed(
        &self,
        row_perm: &[usize],
        col_perm: &[usize],
        col_elements: &[usize],
        u: &Matrix,
    ) -> Result<Self, CrError> {
        let a = self.abelian_dim();
        if u.rows() != a || u.cols() != a || u.field() != self.weights.field() {
            return Err(CrError::InputMismatch);
        }
        let u_inv = inverse(u).map_err(|_| CrError::InputMismatch)?;
        let moved = self.weights.mul(&u_inv);
        let mut w2 = Matrix::zero(self.rows(), a, self.weights.field());
        for i in 0..self.rows() {
            for c in 0..a {
                *w2.at_mut(row_perm[i], c) = moved.at(i, c).clone();
            }
        }
        let pa2 = self.pa.transformed(row_perm, col_perm, col_elements)?;
        CRInstance::new(w2, pa2)
    }
}

/// Witness mapping instance 2 onto instance 1: the label-data witness plus
/// the invertible change of abelian coordinates, satisfying
/// `W1 = P_pi W2 U` (on the rank-reduced weights when the inputs were
/// column-rank deficient).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CRWitness {
    pub pa_witness: ProblemAWitness,
    pub abelian_change: Matrix,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CrStats {
    /// Ordered pivot-row tuples of the second instance that were examined;
    /// bounded by `C(r, a) * a!`.
    pub candidates: u64,
    /// Total label-solver combinations across all candidates.
    pub pa_combinations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrOutcome {
    pub witness: Option<CRWitness>,
    pub stats: CrStats,
}

fn not_equivalent(stats: CrStats) -> CrOutcome {
    CrOutcome {
        witness: None,
        stats,
    }
}

/// Replace the weight matrix by a column basis of itself (RREF of the
/// transpose, transposed back), dropping dependent abelian directions.
fn column_reduce(w: &Matrix) -> Matrix {
    let red = rref(&w.transpose());
    let rows: Vec<usize> = (0..red.rank()).collect();
    red.matrix.select_rows(&rows).transpose()
}

fn cmp_key(a: &(Option<u32>, Vec<Scalar>), b: &(Option<u32>, Vec<Scalar>)) -> core::cmp::Ordering {
    a.0.cmp(&b.0).then_with(|| {
        for (x, y) in a.1.iter().zip(&b.1) {
            let ord = x.sort_cmp(y);
            if ord != core::cmp::Ordering::Equal {
                return ord;
            }
        }
        core::cmp::Ordering::Equal
    })
}

/// Attach `(existing color, normalized weight row)` keys as fresh row
/// colors, with one shared dictionary across both instances.
fn with_weight_colors(
    pa1: &ProblemAInstance,
    w1: &Matrix,
    pa2: &ProblemAInstance,
    w2: &Matrix,
) -> (ProblemAInstance, ProblemAInstance) {
    let key = |pa: &ProblemAInstance, w: &Matrix, i: usize| -> (Option<u32>, Vec<Scalar>) {
        (pa.row_colors().map(|c| c[i]), w.row_vec(i))
    };
    let mut dict: Vec<(Option<u32>, Vec<Scalar>)> = Vec::new();
    for i in 0..pa1.rows() {
        dict.push(key(pa1, w1, i));
        dict.push(key(pa2, w2, i));
    }
    dict.sort_by(cmp_key);
    dict.dedup();
    let color_of = |k: &(Option<u32>, Vec<Scalar>)| -> u32 {
        dict.binary_search_by(|probe| cmp_key(probe, k)).unwrap() as u32
    };
    let colors1: Vec<u32> = (0..pa1.rows()).map(|i| color_of(&key(pa1, w1, i))).collect();
    let colors2: Vec<u32> = (0..pa2.rows()).map(|i| color_of(&key(pa2, w2, i))).collect();
    (
        pa1.with_row_colors(Some(colors1)).expect("same row count"),
        pa2.with_row_colors(Some(colors2)).expect("same row count"),
    )
}

/// Solve a row-colored label instance with whichever enumeration is
/// cheaper; both must respect the budget.
fn solve_colored(
    i1: &ProblemAInstance,
    i2: &ProblemAInstance,
    budget: Budget,
) -> Result<crate::problema::ProblemAOutcome, ProblemAError> {
    let s = i1.cols();
    let twist: u128 = (0..s)
        .map(|j| i1.group_of_col(j).order() as u128)
        .product();
    let cost_bruteforce = BlockPermutations::count(i1.block_sizes()).saturating_mul(twist);
    let cost_boundedrows = factorial(i1.rows()).saturating_mul(twist);
    if cost_boundedrows < cost_bruteforce {
        match solve_boundedrows(i1, i2, budget) {
            Err(ProblemAError::BudgetExceeded) => solve_bruteforce(i1, i2, budget),
            other => other,
        }
    } else {
        match solve_bruteforce(i1, i2, budget) {
            Err(ProblemAError::BudgetExceeded) => solve_boundedrows(i1, i2, budget),
            other => other,
        }
    }
}

/// Check a full witness against the two instances (weights rank-reduced
/// exactly as the solver does).
pub fn verify_cr_witness(i1: &CRInstance, i2: &CRInstance, w: &CRWitness) -> bool {
    if !verify_witness(&i1.pa, &i2.pa, &w.pa_witness) {
        return false;
    }
    let (w1, w2) = reduced_weights(i1, i2);
    let (Some(w1), Some(w2)) = (w1, w2) else {
        return false;
    };
    let u = &w.abelian_change;
    if u.rows() != w1.cols() || u.cols() != w1.cols() || inverse(u).is_err() {
        return false;
    }
    let permuted = w2.select_rows(&w.pa_witness.row_perm);
    permuted.mul(u) == w1
}

/// The weight matrices both instances are solved over: rank-reduced when
/// both are column-rank deficient, `None` when the ranks differ.
fn reduced_weights(i1: &CRInstance, i2: &CRInstance) -> (Option<Matrix>, Option<Matrix>) {
    let r1 = rank(&i1.weights);
    let r2 = rank(&i2.weights);
    if r1 != r2 {
        return (None, None);
    }
    if r1 == i1.abelian_dim() {
        (Some(i1.weights.clone()), Some(i2.weights.clone()))
    } else {
        (
            Some(column_reduce(&i1.weights)),
            Some(column_reduce(&i2.weights)),
        )
    }
}

/// Decide equivalence of two completely reducible instances.
pub fn cr_equivalent(
    i1: &CRInstance,
    i2: &CRInstance,
    budget: Budget,
) -> Result<CrOutcome, CrError> {
    let mut stats = CrStats::default();
    if i1.weights.field() != i2.weights.field() || i1.abelian_dim() != i2.abelian_dim() {
        return Err(CrError::InputMismatch);
    }
    if !i1.pa.compatible(&i2.pa) {
        return Ok(not_equivalent(stats));
    }
    let (w1, w2) = reduced_weights(i1, i2);
    let (Some(w1), Some(w2)) = (w1, w2) else {
        return Ok(not_equivalent(stats));
    };
    let r = i1.rows();
    let a = w1.cols();
    let field = w1.field();

    if a == 0 {
        stats.candidates = 1;
        let out = solve_colored(&i1.pa, &i2.pa, budget).map_err(CrError::ProblemA)?;
        stats.pa_combinations += out.stats.combinations_tried;
        let witness = out.witness.map(|pa_witness| CRWitness {
            pa_witness,
            abelian_change: Matrix::zero(0, 0, field),
        });
        return Ok(CrOutcome { witness, stats });
    }

    // Lexicographically first set of `a` independent weight rows of the
    // first instance; its block normalizes to the identity.
    let s1 = Subsets::new(r, a)
        .map(|rows| (w1.select_rows(&rows), rows))
        .find_map(|(block, rows)| inverse(&block).ok().map(|inv| (rows, inv)))
        .expect("rank(a) weight matrix has an invertible row block");
    let (_, b1_inv) = s1;
    let w1_norm = w1.mul(&b1_inv);

    for subset in Subsets::new(r, a) {
        for order in Permutations::new(a) {
            stats.candidates += 1;
            let tuple: Vec<usize> = order.iter().map(|&t| subset[t]).collect();
            let block = w2.select_rows(&tuple);
            let Ok(b2_inv) = inverse(&block) else {
                continue;
            };
            let w2_norm = w2.mul(&b2_inv);
            let (pa1, pa2) = with_weight_colors(&i1.pa, &w1_norm, &i2.pa, &w2_norm);
            let out = solve_colored(&pa1, &pa2, budget).map_err(CrError::ProblemA)?;
            stats.pa_combinations += out.stats.combinations_tried;
            let Some(pa_witness) = out.witness else {
                continue;
            };
            // W1 b1_inv = P_pi W2 b2_inv, so U = b2_inv * (b1_inv)^{-1}.
            let b1 = inverse(&b1_inv).expect("inverse of an inverse");
            let abelian_change = b2_inv.mul(&b1);
            let witness = CRWitness {
                pa_witness,
                abelian_change,
            };
            if verify_cr_witness(i1, i2, &witness) {
                return Ok(CrOutcome {
                    witness: Some(witness),
                    stats,
                });
            }
        }
    }
    Ok(not_equivalent(stats))
}
