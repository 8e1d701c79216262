//! Dense matrices over an exact field, stored row-major.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{FieldSpec, Scalar};

/// A `rows x cols` matrix of exact scalars, all from the same field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, field: FieldSpec, entries: Vec<Scalar>) -> Matrix {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        assert!(
            entries.iter().all(|e| e.field() == field),
            "entry from a different field"
        );
        Matrix {
            rows,
            cols,
            field,
            entries,
        }
    }

    pub fn zero(rows: usize, cols: usize, field: FieldSpec) -> Matrix {
        Matrix {
            rows,
            cols,
            field,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Matrix {
        let mut m = Matrix::zero(n, n, field);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        field: FieldSpec,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Matrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Matrix::new(rows, cols, field, entries)
    }

    /// Convenience constructor from integer literals.
    pub fn from_i64(rows: usize, cols: usize, field: FieldSpec, data: &[i64]) -> Matrix {
        assert_eq!(data.len(), rows * cols);
        Matrix::from_fn(rows, cols, field, |r, c| field.from_i64(data[r * cols + c]))
    }

    /// Stack row vectors into a matrix. All rows must have equal length.
    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>, cols: usize) -> Matrix {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            entries.extend(row);
        }
        Matrix::new(n, cols, field, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Scalar {
        &mut self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<Scalar> {
        self.row(r).to_vec()
    }

    pub fn col_vec(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|r| (0..self.cols).all(|c| r == c || self.at(r, c).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<Scalar> {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.at(i, i).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, self.field, |r, c| {
            self.at(c, r).clone()
        })
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.assert_same_shape(other);
        Matrix::from_fn(self.rows, self.cols, self.field, |r, c| {
            self.at(r, c) + other.at(r, c)
        })
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.assert_same_shape(other);
        Matrix::from_fn(self.rows, self.cols, self.field, |r, c| {
            self.at(r, c) - other.at(r, c)
        })
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, self.field, |r, c| -self.at(r, c))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        assert_eq!(s.field(), self.field);
        Matrix::from_fn(self.rows, self.cols, self.field, |r, c| self.at(r, c) * s)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        assert_eq!(self.field, other.field, "field mismatch in matrix product");
        let mut out = Matrix::zero(self.rows, other.cols, self.field);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(r, c) + &(a * b);
                    *out.at_mut(r, c) = cur;
                }
            }
        }
        out
    }

    /// Matrix-vector product `self * v` with `v` a column vector.
    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for c in 0..self.cols {
                    if !v[c].is_zero() && !self.at(r, c).is_zero() {
                        acc = &acc + &(self.at(r, c) * &v[c]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Flatten to a single row vector, row-major.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.entries.clone()
    }

    /// Rebuild an `n x n` matrix from a row-major flat vector.
    pub fn unflatten(n: usize, field: FieldSpec, data: Vec<Scalar>) -> Matrix {
        Matrix::new(n, n, field, data)
    }

    /// Keep the selected rows, in the order given.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(idx.len(), self.cols, self.field, |r, c| {
            self.at(idx[r], c).clone()
        })
    }

    /// Keep the selected columns, in the order given.
    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, idx.len(), self.field, |r, c| {
            self.at(r, idx[c]).clone()
        })
    }

    /// Stack `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.field, other.field);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Matrix::new(self.rows + other.rows, self.cols, self.field, entries)
    }

    /// Glue `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.field, other.field);
        Matrix::from_fn(self.rows, self.cols + other.cols, self.field, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                other.at(r, c - self.cols).clone()
            }
        })
    }

    /// The permutation matrix `P` with `P M P^{-1} = diag(m[perm[0]], ...)`
    /// for diagonal `M`; row `i` of `P` is the unit vector `e_{perm[i]}`.
    pub fn permutation(perm: &[usize], field: FieldSpec) -> Matrix {
        let n = perm.len();
        let mut m = Matrix::zero(n, n, field);
        for (i, &j) in perm.iter().enumerate() {
            *m.at_mut(i, j) = field.one();
        }
        m
    }

    fn assert_same_shape(&self, other: &Matrix) {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        assert_eq!(self.cols, other.cols, "column count mismatch");
        assert_eq!(self.field, other.field, "field mismatch");
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn product_and_transpose() {
        let a = Matrix::from_i64(2, 2, q(), &[1, 2, 3, 4]);
        let b = Matrix::from_i64(2, 2, q(), &[0, 1, 1, 0]);
        let ab = a.mul(&b);
        assert_eq!(ab, Matrix::from_i64(2, 2, q(), &[2, 1, 4, 3]));
        assert_eq!(a.transpose(), Matrix::from_i64(2, 2, q(), &[1, 3, 2, 4]));
    }

    #[test]
    fn permutation_conjugates_diagonal() {
        let d = Matrix::from_i64(3, 3, q(), &[5, 0, 0, 0, 7, 0, 0, 0, 9]);
        let p = Matrix::permutation(&[2, 0, 1], q());
        let conj = p.mul(&d).mul(&p.transpose());
        assert_eq!(
            conj,
            Matrix::from_i64(3, 3, q(), &[9, 0, 0, 0, 5, 0, 0, 0, 7])
        );
    }

    #[test]
    fn stacking() {
        let a = Matrix::from_i64(1, 2, q(), &[1, 2]);
        let b = Matrix::from_i64(1, 2, q(), &[3, 4]);
        assert_eq!(a.vstack(&b), Matrix::from_i64(2, 2, q(), &[1, 2, 3, 4]));
        assert_eq!(a.hstack(&b), Matrix::from_i64(1, 4, q(), &[1, 2, 3, 4]));
    }
}
