//! Dense multivariate polynomials and the Lie algebra of the symmetry group
//! of a polynomial.
//!
//! A matrix `A` is an infinitesimal symmetry of `f` when the derivation
//! `sum_i (A x)_i d f / d x_i` vanishes identically; the set of all such
//! `A` is computed as the kernel of one exact linear system and is always
//! closed under the commutator.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};
use crate::lie::{LieError, MatrixLieAlgebra};
use crate::linalg::kernel;
use crate::matrix::Matrix;
use crate::perms::Permutations;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymPolyError {
    #[error("matrix size must match the variable count")]
    ShapeMismatch,
    #[error("exponent vector has the wrong length")]
    BadExponent,
    #[error("coefficient from a different field")]
    FieldMismatch,
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// A polynomial stored as a map from exponent vectors to nonzero
/// coefficients; terms are kept in lexicographic exponent order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePolynomial {
    num_vars: usize,
    field: FieldSpec,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl DensePolynomial {
    pub fn zero(num_vars: usize, field: FieldSpec) -> Self {
        DensePolynomial {
            num_vars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn new(
        num_vars: usize,
        field: FieldSpec,
        terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>,
    ) -> Result<Self, SymPolyError> {
        let mut p = DensePolynomial::zero(num_vars, field);
        for (exp, coef) in terms {
            if exp.len() != num_vars {
                return Err(SymPolyError::BadExponent);
            }
            if coef.field() != field {
                return Err(SymPolyError::FieldMismatch);
            }
            p.add_term(exp, coef);
        }
        Ok(p)
    }

    pub fn constant(num_vars: usize, c: Scalar) -> Self {
        let field = c.field();
        let mut p = DensePolynomial::zero(num_vars, field);
        p.add_term(alloc::vec![0; num_vars], c);
        p
    }

    pub fn monomial(num_vars: usize, exp: Vec<u32>, c: Scalar) -> Result<Self, SymPolyError> {
        DensePolynomial::new(num_vars, c.field(), [(exp, c)])
    }

    fn add_term(&mut self, exp: Vec<u32>, coef: Scalar) {
        if coef.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(existing) => {
                let sum = &*existing + &coef;
                if sum.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(exp, coef);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &[u32]) -> Scalar {
        self.terms
            .get(exp)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Maximum total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        assert_eq!(self.field, other.field);
        let mut out = self.clone();
        for (exp, coef) in &other.terms {
            out.add_term(exp.clone(), coef.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = DensePolynomial::zero(self.num_vars, self.field);
        for (exp, coef) in &self.terms {
            out.add_term(exp.clone(), coef * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        assert_eq!(self.field, other.field);
        let mut out = DensePolynomial::zero(self.num_vars, self.field);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exp: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(exp, c1 * c2);
            }
        }
        out
    }
}

fn permutation_sign(p: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn matrix_fn_poly(n: usize, field: FieldSpec, signed: bool) -> DensePolynomial {
    let mut p = DensePolynomial::zero(n * n, field);
    for perm in Permutations::new(n) {
        let mut exp = alloc::vec![0u32; n * n];
        for (i, &j) in perm.iter().enumerate() {
            exp[i * n + j] = 1;
        }
        let coef = if signed {
            field.from_i64(permutation_sign(&perm))
        } else {
            field.one()
        };
        p.add_term(exp, coef);
    }
    p
}

/// Determinant of an `n x n` matrix of `n^2` distinct variables, variables
/// numbered row-major.
pub fn det_poly(n: usize, field: FieldSpec) -> DensePolynomial {
    assert!(n >= 1);
    matrix_fn_poly(n, field, true)
}

/// Permanent of an `n x n` matrix of variables.
pub fn perm_poly(n: usize, field: FieldSpec) -> DensePolynomial {
    assert!(n >= 1);
    matrix_fn_poly(n, field, false)
}

/// The derivation action `(A . f) = sum_{i,j} A_{ij} x_j df/dx_i`.
pub fn apply_derivation(a: &Matrix, f: &DensePolynomial) -> Result<DensePolynomial, SymPolyError> {
    let m = f.num_vars();
    if !a.is_square() || a.rows() != m || a.field() != f.field() {
        return Err(SymPolyError::ShapeMismatch);
    }
    let field = f.field();
    let mut out = DensePolynomial::zero(m, field);
    for (exp, coef) in f.terms() {
        for i in 0..m {
            if exp[i] == 0 {
                continue;
            }
            let scaled = coef * &field.from_i64(exp[i] as i64);
            for j in 0..m {
                let aij = a.at(i, j);
                if aij.is_zero() {
                    continue;
                }
                let mut e = exp.clone();
                e[i] -= 1;
                e[j] += 1;
                out.add_term(e, &scaled * aij);
            }
        }
    }
    Ok(out)
}

/// The Lie algebra of the symmetry group of `f`: all `A` with vanishing
/// derivation action, computed as the kernel of the linear map from the
/// `m^2` entries of `A` to the coefficients of `A . f`.
///
/// Over `F_p` the caller must keep `p` above `deg f`, otherwise derivatives
/// lose terms and the answer is about a different polynomial.
pub fn symmetry_lie_algebra(f: &DensePolynomial) -> Result<MatrixLieAlgebra, SymPolyError> {
    let m = f.num_vars();
    let field = f.field();
    // One row per monomial that can appear in a derivation image, one
    // column per unknown entry of A.
    let mut row_of: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut contributions: Vec<(usize, usize, Scalar)> = Vec::new();
    for (exp, coef) in f.terms() {
        for i in 0..m {
            if exp[i] == 0 {
                continue;
            }
            let scaled = coef * &field.from_i64(exp[i] as i64);
            for j in 0..m {
                let mut e = exp.clone();
                e[i] -= 1;
                e[j] += 1;
                let next = row_of.len();
                let row = *row_of.entry(e).or_insert(next);
                contributions.push((row, i * m + j, scaled.clone()));
            }
        }
    }
    let mut system = Matrix::zero(row_of.len(), m * m, field);
    for (row, col, value) in contributions {
        let cur = system.at(row, col) + &value;
        *system.at_mut(row, col) = cur;
    }
    let null = kernel(&system);
    let mats: Vec<Matrix> = (0..null.rows())
        .map(|r| Matrix::unflatten(m, field, null.row_vec(r)))
        .collect();
    let algebra = MatrixLieAlgebra::span(m, field, &mats)?;
    debug_assert!(algebra.is_closed(), "derivation kernels are bracket-closed");
    Ok(algebra)
}

/// Substitute `x -> g x`: the polynomial `f(g x)`, expanded exactly.
pub fn substitute_linear(f: &DensePolynomial, g: &Matrix) -> Result<DensePolynomial, SymPolyError> {
    let m = f.num_vars();
    if !g.is_square() || g.rows() != m || g.field() != f.field() {
        return Err(SymPolyError::ShapeMismatch);
    }
    let field = f.field();
    // Linear forms (g x)_i as polynomials.
    let forms: Vec<DensePolynomial> = (0..m)
        .map(|i| {
            let mut form = DensePolynomial::zero(m, field);
            for j in 0..m {
                let mut exp = alloc::vec![0u32; m];
                exp[j] = 1;
                form.add_term(exp, g.at(i, j).clone());
            }
            form
        })
        .collect();
    let mut out = DensePolynomial::zero(m, field);
    for (exp, coef) in f.terms() {
        let mut term = DensePolynomial::constant(m, coef.clone());
        for i in 0..m {
            for _ in 0..exp[i] {
                term = term.mul(&forms[i]);
            }
        }
        out = out.add(&term);
    }
    Ok(out)
}
