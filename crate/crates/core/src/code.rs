//! Linear codes over exact fields, permutation code equivalence via
//! information-set enumeration, and the reduction from graph isomorphism to
//! code equivalence.
//!
//! Equivalence means a coordinate permutation mapping one row space onto the
//! other; the search fixes the lexicographically-first information set of the
//! first code and tries every candidate information set of the second, so
//! the cost is about `C(n, d) * min(d!, (n-d)!)` residual checks. Witnesses
//! are always re-verified against the row spaces before being returned.

use alloc::vec::Vec;

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};
use crate::graph::{self, ColoredGraph};
use crate::linalg::{inverse, rref};
use crate::matrix::Matrix;
use crate::perms::{Permutations, Subsets};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("codes live over different fields")]
    FieldMismatch,
    #[error("graph must be simple and undirected")]
    NotSimpleUndirected,
}

/// The row space of a generator matrix, stored canonically in RREF with
/// zero rows dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    generator: Matrix,
    pivots: Vec<usize>,
}

impl Code {
    pub fn new(generator: &Matrix) -> Code {
        let red = rref(generator);
        let rank = red.rank();
        Code {
            generator: red.matrix.select_rows(&(0..rank).collect::<Vec<_>>()),
            pivots: red.pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.generator.rows()
    }

    pub fn len(&self) -> usize {
        self.generator.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    pub fn field(&self) -> FieldSpec {
        self.generator.field()
    }

    /// Canonical RREF generator.
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// Pivot columns of the canonical generator: the lexicographically
    /// first information set.
    pub fn information_set(&self) -> &[usize] {
        &self.pivots
    }

    /// The code with coordinates permuted: `(pi . v)[i] = v[pi[i]]`.
    pub fn permuted(&self, pi: &[usize]) -> Code {
        Code::new(&self.generator.select_cols(pi))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeEquivalenceWitness {
    pub permutation: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodeEquivStats {
    /// Candidate column subsets of the second code that were examined.
    pub subsets_tried: u64,
    /// Row/column permutations tried across all residual matchings.
    pub residual_checks: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeEquivOutcome {
    pub witness: Option<CodeEquivalenceWitness>,
    pub stats: CodeEquivStats,
}

/// How the `d x (n-d)` residual matrices are matched per information set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResidualStrategy {
    /// Brute force over the smaller side with canonical sorting of the other.
    #[default]
    Enumerate,
    /// Route each residual matching through the graph-isomorphism solver
    /// (entries become edge colors); for cross-validation.
    ViaGraphIso,
}

/// Multiset fingerprints that any residual match must preserve: the sorted
/// list of per-column sorted entries (row-permutation invariant) and the
/// sorted list of per-row sorted entries (column-permutation invariant).
fn residual_fingerprints(r: &Matrix) -> (Vec<Vec<Scalar>>, Vec<Vec<Scalar>>) {
    let mut cols: Vec<Vec<Scalar>> = (0..r.cols())
        .map(|c| {
            let mut col = r.col_vec(c);
            col.sort_by(|a, b| a.sort_cmp(b));
            col
        })
        .collect();
    cols.sort_by(|a, b| cmp_scalar_vec(a, b));
    let mut rows: Vec<Vec<Scalar>> = (0..r.rows())
        .map(|i| {
            let mut row = r.row_vec(i);
            row.sort_by(|a, b| a.sort_cmp(b));
            row
        })
        .collect();
    rows.sort_by(|a, b| cmp_scalar_vec(a, b));
    (cols, rows)
}

fn cmp_scalar_vec(a: &[Scalar], b: &[Scalar]) -> core::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = x.sort_cmp(y);
        if ord != core::cmp::Ordering::Equal {
            return ord;
        }
    }
    a.len().cmp(&b.len())
}

/// Match columns one-to-one by content, pairing equal columns in ascending
/// index order; `out[j]` is the column of `b` assigned to column `j` of `a`.
fn match_columns(a: &Matrix, b: &Matrix) -> Option<Vec<usize>> {
    let k = a.cols();
    if k != b.cols() {
        return None;
    }
    let mut tagged_a: Vec<(Vec<Scalar>, usize)> =
        (0..k).map(|c| (a.col_vec(c), c)).collect();
    let mut tagged_b: Vec<(Vec<Scalar>, usize)> =
        (0..k).map(|c| (b.col_vec(c), c)).collect();
    tagged_a.sort_by(|(x, i), (y, j)| cmp_scalar_vec(x, y).then(i.cmp(j)));
    tagged_b.sort_by(|(x, i), (y, j)| cmp_scalar_vec(x, y).then(i.cmp(j)));
    let mut out = alloc::vec![0usize; k];
    for (ta, tb) in tagged_a.iter().zip(&tagged_b) {
        if ta.0 != tb.0 {
            return None;
        }
        out[ta.1] = tb.1;
    }
    Some(out)
}

/// Find `(tau, mu)` with `r1[k][j] = r2[tau[k]][mu[j]]`, brute-forcing the
/// smaller side; `checks` counts attempted permutations.
fn match_residuals(r1: &Matrix, r2: &Matrix, checks: &mut u64) -> Option<(Vec<usize>, Vec<usize>)> {
    let d = r1.rows();
    let w = r1.cols();
    if d <= w {
        for tau in Permutations::new(d) {
            *checks += 1;
            let permuted = r2.select_rows(&tau);
            if let Some(mu) = match_columns(r1, &permuted) {
                return Some((tau, mu));
            }
        }
    } else {
        for mu in Permutations::new(w) {
            *checks += 1;
            // permuted[.][j] = r2[.][mu[j]]; rows must now match one-to-one,
            // and the row matching is exactly tau.
            let permuted = r2.select_cols(&mu);
            if let Some(tau) = match_columns(&r1.transpose(), &permuted.transpose()) {
                return Some((tau, mu));
            }
        }
    }
    None
}

/// Residual matching through the graph-isomorphism solver: rows and columns
/// become the two vertex classes of a bipartite graph and entries become
/// edge colors.
fn match_residuals_via_gi(r1: &Matrix, r2: &Matrix) -> Option<(Vec<usize>, Vec<usize>)> {
    let d = r1.rows();
    let w = r1.cols();
    let mut palette: Vec<Scalar> = r1.entries().iter().chain(r2.entries()).cloned().collect();
    palette.sort_by(|a, b| a.sort_cmp(b));
    palette.dedup();
    let color_of = |s: &Scalar| -> u32 {
        palette
            .binary_search_by(|probe| probe.sort_cmp(s))
            .expect("entry in palette") as u32
    };
    let build = |r: &Matrix| -> ColoredGraph {
        let mut vcolors = alloc::vec![0u32; d];
        vcolors.extend(alloc::vec![1u32; w]);
        let mut edges = Vec::with_capacity(d * w);
        for i in 0..d {
            for j in 0..w {
                edges.push((i, d + j, color_of(r.at(i, j))));
            }
        }
        ColoredGraph::new(false, vcolors, &edges).expect("valid bipartite graph")
    };
    let h1 = build(r1);
    let h2 = build(r2);
    let iso = graph::find_isomorphism(&h1, &h2)?;
    let tau: Vec<usize> = (0..d).map(|k| iso.mapping[k]).collect();
    let mu: Vec<usize> = (0..w).map(|j| iso.mapping[d + j] - d).collect();
    Some((tau, mu))
}

/// Decide permutation equivalence. Codes of different length or dimension
/// are simply not equivalent; only a field mismatch is an error.
pub fn code_equivalent(
    c1: &Code,
    c2: &Code,
    strategy: ResidualStrategy,
) -> Result<CodeEquivOutcome, CodeError> {
    let mut stats = CodeEquivStats::default();
    if c1.field() != c2.field() {
        return Err(CodeError::FieldMismatch);
    }
    if c1.len() != c2.len() || c1.dim() != c2.dim() {
        return Ok(CodeEquivOutcome {
            witness: None,
            stats,
        });
    }
    let n = c1.len();
    let d = c1.dim();
    if d == 0 {
        return Ok(CodeEquivOutcome {
            witness: Some(CodeEquivalenceWitness {
                permutation: crate::perms::identity(n),
            }),
            stats,
        });
    }

    let g1 = c1.generator();
    let s1 = c1.information_set().to_vec();
    let nonpiv1: Vec<usize> = (0..n).filter(|i| !s1.contains(i)).collect();
    let r1 = g1.select_cols(&nonpiv1);
    let (cols1, rows1) = residual_fingerprints(&r1);

    let g2 = c2.generator();
    for s2 in Subsets::new(n, d) {
        stats.subsets_tried += 1;
        let block = g2.select_cols(&s2);
        let Ok(block_inv) = inverse(&block) else {
            continue;
        };
        let sys2 = block_inv.mul(g2);
        let nonpiv2: Vec<usize> = (0..n).filter(|i| !s2.contains(i)).collect();
        let r2 = sys2.select_cols(&nonpiv2);
        let (cols2, rows2) = residual_fingerprints(&r2);
        if cols1 != cols2 || rows1 != rows2 {
            continue;
        }
        let matched = match strategy {
            ResidualStrategy::Enumerate => match_residuals(&r1, &r2, &mut stats.residual_checks),
            ResidualStrategy::ViaGraphIso => {
                stats.residual_checks += 1;
                match_residuals_via_gi(&r1, &r2)
            }
        };
        let Some((tau, mu)) = matched else {
            continue;
        };
        // Assemble the coordinate permutation: position s2[tau[k]] of the
        // second code carries pivot s1[k], and non-pivot nonpiv2[mu[j]]
        // carries nonpiv1[j].
        let mut pi = alloc::vec![0usize; n];
        for k in 0..d {
            pi[s2[tau[k]]] = s1[k];
        }
        for j in 0..n - d {
            pi[nonpiv2[mu[j]]] = nonpiv1[j];
        }
        debug_assert!(crate::perms::is_permutation(&pi));
        // Full verification: the permuted first code must equal the second.
        if &c1.permuted(&pi) == c2 {
            return Ok(CodeEquivOutcome {
                witness: Some(CodeEquivalenceWitness { permutation: pi }),
                stats,
            });
        }
    }
    Ok(CodeEquivOutcome {
        witness: None,
        stats,
    })
}

/// Check a claimed witness: does `pi . C1 = C2` hold exactly?
pub fn verify_code_witness(c1: &Code, c2: &Code, pi: &[usize]) -> bool {
    pi.len() == c1.len() && crate::perms::is_permutation(pi) && &c1.permuted(pi) == c2
}

/// Generator matrix `[ I | I | I | D ]` of the code associated to a simple
/// undirected graph: one row per edge (lexicographic edge order), three
/// identity blocks, then the edge-vertex incidence matrix.
pub fn gi_generator_matrix(g: &ColoredGraph, field: FieldSpec) -> Result<Matrix, CodeError> {
    if g.directed() {
        return Err(CodeError::NotSimpleUndirected);
    }
    let plain = g.plain_edges();
    {
        let mut dedup = plain.clone();
        dedup.dedup();
        if dedup.len() != plain.len() {
            return Err(CodeError::NotSimpleUndirected);
        }
    }
    let m = plain.len();
    let nv = g.vertex_count();
    let mut out = Matrix::zero(m, 3 * m + nv, field);
    for (i, &(u, v)) in plain.iter().enumerate() {
        for block in 0..3 {
            *out.at_mut(i, block * m + i) = field.one();
        }
        *out.at_mut(i, 3 * m + u) = field.one();
        *out.at_mut(i, 3 * m + v) = field.one();
    }
    Ok(out)
}

/// The code generated by [`gi_generator_matrix`]; two simple graphs are
/// isomorphic iff their codes are permutation equivalent, over any field.
pub fn gi_to_code(g: &ColoredGraph, field: FieldSpec) -> Result<Code, CodeError> {
    Ok(Code::new(&gi_generator_matrix(g, field)?))
}

pub fn hamming_weight(v: &[Scalar]) -> usize {
    v.iter().filter(|s| !s.is_zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perms::identity;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }
    fn f2() -> FieldSpec {
        FieldSpec::prime_field(2).unwrap()
    }

    /// Brute-force oracle over all n! coordinate permutations.
    fn brute_force_equivalent(c1: &Code, c2: &Code) -> bool {
        c1.len() == c2.len()
            && c1.dim() == c2.dim()
            && Permutations::new(c1.len()).any(|pi| &c1.permuted(&pi) == c2)
    }

    #[test]
    fn identity_on_self() {
        let c = Code::new(&Matrix::from_i64(2, 4, q(), &[1, 0, 1, 2, 0, 1, 3, 4]));
        let out = code_equivalent(&c, &c, ResidualStrategy::Enumerate).unwrap();
        let w = out.witness.unwrap();
        assert!(verify_code_witness(&c, &c, &w.permutation));
    }

    #[test]
    fn single_weight_one_vectors() {
        let c1 = Code::new(&Matrix::from_i64(1, 3, q(), &[1, 0, 0]));
        let c2 = Code::new(&Matrix::from_i64(1, 3, q(), &[0, 0, 1]));
        let out = code_equivalent(&c1, &c2, ResidualStrategy::Enumerate).unwrap();
        let w = out.witness.unwrap();
        assert!(verify_code_witness(&c1, &c2, &w.permutation));
        // the coordinate swap 0 <-> 2 also works
        assert!(verify_code_witness(&c1, &c2, &[2, 1, 0]));
    }

    #[test]
    fn weight_mismatch_over_f2() {
        let c1 = Code::new(&Matrix::from_i64(1, 3, f2(), &[1, 0, 0]));
        let c2 = Code::new(&Matrix::from_i64(1, 3, f2(), &[1, 1, 0]));
        let out = code_equivalent(&c1, &c2, ResidualStrategy::Enumerate).unwrap();
        assert!(out.witness.is_none());
        assert!(!brute_force_equivalent(&c1, &c2));
    }

    #[test]
    fn dimension_mismatch_is_not_equivalent() {
        let c1 = Code::new(&Matrix::from_i64(1, 3, q(), &[1, 0, 0]));
        let c2 = Code::new(&Matrix::from_i64(2, 3, q(), &[1, 0, 0, 0, 1, 0]));
        assert!(code_equivalent(&c1, &c2, ResidualStrategy::Enumerate)
            .unwrap()
            .witness
            .is_none());
        let c3 = Code::new(&Matrix::from_i64(1, 4, q(), &[1, 0, 0, 0]));
        assert!(code_equivalent(&c1, &c3, ResidualStrategy::Enumerate)
            .unwrap()
            .witness
            .is_none());
    }

    #[test]
    fn zero_codes() {
        let c1 = Code::new(&Matrix::zero(0, 3, q()));
        let c2 = Code::new(&Matrix::zero(2, 3, q()).scale(&q().zero()));
        let out = code_equivalent(&c1, &c2, ResidualStrategy::Enumerate).unwrap();
        assert_eq!(out.witness.unwrap().permutation, identity(3));
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let c1 = Code::new(&Matrix::from_i64(1, 3, q(), &[1, 0, 0]));
        let c2 = Code::new(&Matrix::from_i64(1, 3, f2(), &[1, 0, 0]));
        assert_eq!(
            code_equivalent(&c1, &c2, ResidualStrategy::Enumerate),
            Err(CodeError::FieldMismatch)
        );
    }

    #[test]
    fn agrees_with_brute_force_on_small_codes() {
        // A deterministic batch of small generator matrices over F_2 and Q.
        let fields = [f2(), q()];
        for field in fields {
            let mut codes = Vec::new();
            for seed in 0..18u32 {
                let data: Vec<i64> = (0..10)
                    .map(|i| (((seed * 37 + i * 13 + 5) % 7) % 3) as i64)
                    .collect();
                codes.push(Code::new(&Matrix::from_fn(2, 5, field, |r, c| {
                    field.from_i64(data[r * 5 + c])
                })));
            }
            for a in &codes {
                for b in &codes {
                    let fast = code_equivalent(a, b, ResidualStrategy::Enumerate).unwrap();
                    assert_eq!(fast.witness.is_some(), brute_force_equivalent(a, b));
                    if let Some(w) = fast.witness {
                        assert!(verify_code_witness(a, b, &w.permutation));
                    }
                }
            }
        }
    }

    #[test]
    fn gi_route_matches_enumeration() {
        let g1 = ColoredGraph::simple_undirected(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let g2 = ColoredGraph::simple_undirected(4, &[(3, 2), (2, 0), (0, 1)]).unwrap();
        let c1 = gi_to_code(&g1, f2()).unwrap();
        let c2 = gi_to_code(&g2, f2()).unwrap();
        let a = code_equivalent(&c1, &c2, ResidualStrategy::Enumerate).unwrap();
        let b = code_equivalent(&c1, &c2, ResidualStrategy::ViaGraphIso).unwrap();
        assert!(a.witness.is_some());
        assert!(b.witness.is_some());
        assert!(verify_code_witness(&c1, &c2, &a.witness.unwrap().permutation));
        assert!(verify_code_witness(&c1, &c2, &b.witness.unwrap().permutation));
    }

    #[test]
    fn pr_matrix_shape_and_weights() {
        // Triangle: 3 edges on 3 vertices -> 3 x 12 generator, row weight 5.
        let t = ColoredGraph::simple_undirected(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let m = gi_generator_matrix(&t, f2()).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 12));
        for r in 0..m.rows() {
            assert_eq!(hamming_weight(m.row(r)), 5);
        }
        // Single edge on 2 vertices: all-ones 1 x 5 row.
        let e = ColoredGraph::simple_undirected(2, &[(0, 1)]).unwrap();
        let m = gi_generator_matrix(&e, f2()).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 5));
        assert_eq!(hamming_weight(m.row(0)), 5);
    }

    #[test]
    fn pr_nondegenerate_combinations_are_heavy() {
        let t = ColoredGraph::simple_undirected(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        for field in [f2(), FieldSpec::prime_field(3).unwrap()] {
            let m = gi_generator_matrix(&t, field).unwrap();
            let nonzero: Vec<Scalar> = (1..match field {
                FieldSpec::PrimeField(p) => p as i64,
                _ => unreachable!(),
            })
                .map(|v| field.from_i64(v))
                .collect();
            for i in 0..m.rows() {
                for j in i + 1..m.rows() {
                    for a in &nonzero {
                        for b in &nonzero {
                            let mut combo = alloc::vec![field.zero(); m.cols()];
                            for c in 0..m.cols() {
                                combo[c] = &(a * m.at(i, c)) + &(b * m.at(j, c));
                            }
                            assert!(hamming_weight(&combo) >= 6);
                        }
                    }
                }
            }
        }
    }
}
