//! Seeded instance generators: planted-equivalent pairs (apply a random
//! allowed transformation) and perturbed pairs (flip one datum). All
//! randomness flows from an explicit 64-bit seed, so runs are reproducible.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use lieconj_core::code::Code;
use lieconj_core::cr::CRInstance;
use lieconj_core::field::FieldSpec;
use lieconj_core::graph::ColoredGraph;
use lieconj_core::lie::MatrixLieAlgebra;
use lieconj_core::linalg::{inverse, rank};
use lieconj_core::matrix::Matrix;
use lieconj_core::problema::{
    s3_compose, BlockGroup, BlockGroupKind, ProblemAInstance, SLOT_PERMS,
};

pub struct Gen {
    rng: ChaCha12Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn matrix(&mut self, rows: usize, cols: usize, field: FieldSpec) -> Matrix {
        let range = match field {
            FieldSpec::Rationals => 3,
            FieldSpec::PrimeField(p) => (p as i64 - 1).min(4),
        };
        Matrix::from_fn(rows, cols, field, |_, _| {
            field.from_i64(self.int(-range, range))
        })
    }

    pub fn invertible(&mut self, n: usize, field: FieldSpec) -> Matrix {
        loop {
            let m = self.matrix(n, n, field);
            if inverse(&m).is_ok() {
                return m;
            }
        }
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.index(i + 1);
            p.swap(i, j);
        }
        p
    }

    /// Permutation preserving consecutive blocks of the given sizes.
    pub fn block_permutation(&mut self, block_sizes: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        let mut offset = 0usize;
        for &k in block_sizes {
            let inner = self.permutation(k);
            out.extend(inner.into_iter().map(|v| v + offset));
            offset += k;
        }
        out
    }

    // -- abelian diagonalizable algebras --------------------------------

    /// Span of `d` independent random diagonal matrices.
    pub fn diagonal_algebra(&mut self, n: usize, d: usize, field: FieldSpec) -> MatrixLieAlgebra {
        loop {
            let mats: Vec<Matrix> = (0..d)
                .map(|_| {
                    let entries: Vec<i64> = (0..n).map(|_| self.int(-3, 3)).collect();
                    Matrix::from_fn(n, n, field, |r, c| {
                        if r == c {
                            field.from_i64(entries[r])
                        } else {
                            field.zero()
                        }
                    })
                })
                .collect();
            let alg = MatrixLieAlgebra::span(n, field, &mats).unwrap();
            if alg.dim() == d {
                return alg;
            }
        }
    }

    /// Planted conjugate pair: a diagonal algebra plus a conjugate of it
    /// under a random invertible matrix (and a random basis mix).
    pub fn abelian_pair(
        &mut self,
        n: usize,
        d: usize,
        field: FieldSpec,
    ) -> (MatrixLieAlgebra, MatrixLieAlgebra) {
        let l1 = self.diagonal_algebra(n, d, field);
        let g0 = self.invertible(n, field);
        let g0i = inverse(&g0).unwrap();
        let mix = self.invertible(d, field);
        let mixed: Vec<Matrix> = (0..d)
            .map(|k| {
                let mut acc = Matrix::zero(n, n, field);
                for (l, b) in l1.basis().iter().enumerate() {
                    acc = acc.add(&b.scale(mix.at(k, l)));
                }
                g0.mul(&acc).mul(&g0i)
            })
            .collect();
        let l2 = MatrixLieAlgebra::span(n, field, &mixed).unwrap();
        (l1, l2)
    }

    /// A pair built like [`Gen::abelian_pair`] but with one diagonal entry
    /// bumped before conjugating; usually (not always) inequivalent, so
    /// callers pair it with an oracle.
    pub fn abelian_perturbed_pair(
        &mut self,
        n: usize,
        d: usize,
        field: FieldSpec,
    ) -> (MatrixLieAlgebra, MatrixLieAlgebra) {
        let l1 = self.diagonal_algebra(n, d, field);
        let mut mats = l1.basis().to_vec();
        let which = self.index(mats.len());
        let pos = self.index(n);
        let bump = field.from_i64(self.int(1, 2));
        let cur = mats[which].at(pos, pos) + &bump;
        *mats[which].at_mut(pos, pos) = cur;
        let wobble = MatrixLieAlgebra::span(n, field, &mats).unwrap();
        let g0 = self.invertible(n, field);
        let g0i = inverse(&g0).unwrap();
        let conj: Vec<Matrix> = wobble.basis().iter().map(|b| g0.mul(b).mul(&g0i)).collect();
        let l2 = MatrixLieAlgebra::span(n, field, &conj).unwrap();
        (l1, l2)
    }

    // -- codes ------------------------------------------------------------

    pub fn code(&mut self, n: usize, d: usize, field: FieldSpec) -> Code {
        loop {
            let c = Code::new(&self.matrix(d, n, field));
            if c.dim() == d {
                return c;
            }
        }
    }

    pub fn code_pair(&mut self, n: usize, d: usize, field: FieldSpec) -> (Code, Code) {
        let c1 = self.code(n, d, field);
        let pi = self.permutation(n);
        let c2 = c1.permuted(&pi);
        (c1, c2)
    }

    // -- graphs -----------------------------------------------------------

    /// Simple undirected graph with `m` distinct edges.
    pub fn graph(&mut self, n: usize, m: usize) -> ColoredGraph {
        let mut all: Vec<(usize, usize)> = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                all.push((u, v));
            }
        }
        let m = m.min(all.len());
        for i in 0..m {
            let j = i + self.index(all.len() - i);
            all.swap(i, j);
        }
        ColoredGraph::simple_undirected(n, &all[..m]).unwrap()
    }

    pub fn relabeled(&mut self, g: &ColoredGraph) -> ColoredGraph {
        let n = g.vertex_count();
        let pi = self.permutation(n);
        let edges: Vec<(usize, usize)> = g
            .plain_edges()
            .iter()
            .map(|&(u, v)| (pi[u], pi[v]))
            .collect();
        ColoredGraph::simple_undirected(n, &edges).unwrap()
    }

    // -- block-structured instances ----------------------------------------

    /// A random group of the given kind over a small alphabet (at most
    /// `max_symbols` values, at least the minimum the kind needs).
    pub fn block_group(&mut self, kind: BlockGroupKind, max_symbols: usize) -> BlockGroup {
        match kind {
            BlockGroupKind::Trivial => {
                let k = 1 + self.index(max_symbols);
                trivial_group_on(0..k as u32)
            }
            BlockGroupKind::S2 => {
                // one swapped pair plus optional fixed values
                let extra = self.index(max_symbols.saturating_sub(2) + 1);
                let fixed: Vec<u32> = (0..extra as u32).collect();
                let base = extra as u32;
                s2_group_from_orbits(&fixed, &[(base, base + 1)])
            }
            BlockGroupKind::S3 => {
                // one natural 3-orbit plus optional fixed values
                let extra = self.index(max_symbols.saturating_sub(3) + 1);
                let fixed: Vec<u32> = (0..extra as u32).collect();
                let base = extra as u32;
                s3_group_from_orbits(&fixed, &[], &[[base, base + 1, base + 2]], &[])
            }
        }
    }

    pub fn problem_a_instance(
        &mut self,
        rows: usize,
        block_sizes: &[usize],
        groups: &[BlockGroup],
    ) -> ProblemAInstance {
        let cols: usize = block_sizes.iter().sum();
        let mut block_of = Vec::new();
        for (b, &k) in block_sizes.iter().enumerate() {
            block_of.extend(std::iter::repeat(b).take(k));
        }
        let matrix: Vec<Vec<u32>> = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|j| {
                        let alphabet = groups[block_of[j]].alphabet();
                        alphabet[self.index(alphabet.len())]
                    })
                    .collect()
            })
            .collect();
        ProblemAInstance::new(matrix, block_sizes.to_vec(), groups.to_vec(), None).unwrap()
    }

    /// A random instance with random blocks/groups drawn from the kinds.
    pub fn random_problem_a(&mut self, rows: usize, cols: usize) -> ProblemAInstance {
        let mut block_sizes = Vec::new();
        let mut remaining = cols;
        while remaining > 0 {
            let k = 1 + self.index(remaining.min(3));
            block_sizes.push(k);
            remaining -= k;
        }
        let kinds = [BlockGroupKind::Trivial, BlockGroupKind::S2, BlockGroupKind::S3];
        let groups: Vec<BlockGroup> = block_sizes
            .iter()
            .map(|_| {
                let kind = kinds[self.index(3)];
                self.block_group(kind, 4)
            })
            .collect();
        self.problem_a_instance(rows, &block_sizes, &groups)
    }

    /// Apply a uniformly random allowed transformation.
    pub fn transform_problem_a(&mut self, i1: &ProblemAInstance) -> ProblemAInstance {
        let row_perm = self.permutation(i1.rows());
        let col_perm = self.block_permutation(i1.block_sizes());
        let col_elements: Vec<usize> = (0..i1.cols())
            .map(|j| self.index(i1.group_of_col(j).order()))
            .collect();
        i1.transformed(&row_perm, &col_perm, &col_elements).unwrap()
    }

    /// Change one entry to a different alphabet value (when possible).
    pub fn perturb_problem_a(&mut self, i: &ProblemAInstance) -> ProblemAInstance {
        let mut m = i.matrix().to_vec();
        for _ in 0..64 {
            let r = self.index(i.rows());
            let c = self.index(i.cols());
            let alphabet = i.group_of_col(c).alphabet();
            if alphabet.len() < 2 {
                continue;
            }
            let new = alphabet[self.index(alphabet.len())];
            if new != m[r][c] {
                m[r][c] = new;
                break;
            }
        }
        ProblemAInstance::new(m, i.block_sizes().to_vec(), i.groups().to_vec(), None).unwrap()
    }

    // -- completely reducible instances -------------------------------------

    pub fn cr_instance(
        &mut self,
        rows: usize,
        abelian_dim: usize,
        cols: usize,
        field: FieldSpec,
    ) -> CRInstance {
        let weights = loop {
            let w = self.matrix(rows, abelian_dim, field);
            if rank(&w) == abelian_dim.min(rows) {
                break w;
            }
        };
        let pa = self.random_problem_a(rows, cols);
        CRInstance::new(weights, pa).unwrap()
    }

    pub fn transform_cr(&mut self, i1: &CRInstance) -> CRInstance {
        let row_perm = self.permutation(i1.rows());
        let col_perm = self.block_permutation(i1.pa.block_sizes());
        let col_elements: Vec<usize> = (0..i1.pa.cols())
            .map(|j| self.index(i1.pa.group_of_col(j).order()))
            .collect();
        let u = self.invertible(i1.abelian_dim(), i1.weights.field());
        i1.transformed(&row_perm, &col_perm, &col_elements, &u)
            .unwrap()
    }
}

/// The trivial group on the given values.
pub fn trivial_group_on(values: impl IntoIterator<Item = u32>) -> BlockGroup {
    let mut alphabet: Vec<u32> = values.into_iter().collect();
    alphabet.sort_unstable();
    alphabet.dedup();
    BlockGroup::trivial(alphabet).unwrap()
}

/// S2 acting by swapping each pair, fixing the rest.
pub fn s2_group_from_orbits(fixed: &[u32], pairs: &[(u32, u32)]) -> BlockGroup {
    let mut alphabet: Vec<u32> = fixed.to_vec();
    for &(a, b) in pairs {
        alphabet.push(a);
        alphabet.push(b);
    }
    alphabet.sort_unstable();
    let k = alphabet.len();
    let identity: Vec<usize> = (0..k).collect();
    let mut swap = identity.clone();
    for &(a, b) in pairs {
        let ia = alphabet.binary_search(&a).unwrap();
        let ib = alphabet.binary_search(&b).unwrap();
        swap.swap(ia, ib);
    }
    BlockGroup::new(BlockGroupKind::S2, alphabet, vec![identity, swap]).unwrap()
}

/// S3 assembled from orbit data: fixed points, sign pairs, natural triples,
/// and regular sextets (indexed in [`SLOT_PERMS`] order). At least one
/// triple or sextet is required for the action to be faithful.
pub fn s3_group_from_orbits(
    fixed: &[u32],
    pairs: &[(u32, u32)],
    triples: &[[u32; 3]],
    sextets: &[[u32; 6]],
) -> BlockGroup {
    let mut alphabet: Vec<u32> = fixed.to_vec();
    for &(a, b) in pairs {
        alphabet.extend([a, b]);
    }
    for t in triples {
        alphabet.extend(t);
    }
    for s in sextets {
        alphabet.extend(s);
    }
    alphabet.sort_unstable();
    let idx = |v: u32| alphabet.binary_search(&v).unwrap();
    let elements: Vec<Vec<usize>> = SLOT_PERMS
        .iter()
        .map(|&w| {
            let mut table: Vec<usize> = (0..alphabet.len()).collect();
            let odd = !matches!(w, [0, 1, 2] | [1, 2, 0] | [2, 0, 1]);
            for &(a, b) in pairs {
                if odd {
                    table[idx(a)] = idx(b);
                    table[idx(b)] = idx(a);
                }
            }
            for t in triples {
                for p in 0..3 {
                    table[idx(t[p])] = idx(t[w[p]]);
                }
            }
            for s in sextets {
                for (u_idx, &u) in SLOT_PERMS.iter().enumerate() {
                    let target = SLOT_PERMS
                        .iter()
                        .position(|&q| q == s3_compose(w, u))
                        .unwrap();
                    table[idx(s[u_idx])] = idx(s[target]);
                }
            }
            table
        })
        .collect();
    BlockGroup::new(BlockGroupKind::S3, alphabet, elements).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinism() {
        let mut a = Gen::new(42);
        let mut b = Gen::new(42);
        assert_eq!(a.permutation(8), b.permutation(8));
        let f = FieldSpec::Rationals;
        assert_eq!(a.matrix(3, 3, f), b.matrix(3, 3, f));
    }

    #[test]
    fn s3_orbit_builder_round_trips() {
        let g = s3_group_from_orbits(&[0], &[(7, 8)], &[[1, 2, 3]], &[[10, 11, 12, 13, 14, 15]]);
        assert_eq!(g.order(), 6);
        assert_eq!(g.alphabet().len(), 12);
        // 0 is fixed by everything; the triple is a full natural orbit.
        for e in 0..6 {
            assert_eq!(g.apply(e, 0), 0);
        }
        let orbit_sizes: Vec<usize> = g.orbits().iter().map(Vec::len).collect();
        assert!(orbit_sizes.contains(&3) && orbit_sizes.contains(&6) && orbit_sizes.contains(&2));
    }

    #[test]
    fn natural_triple_action_is_natural() {
        let g = s3_group_from_orbits(&[], &[], &[[1, 2, 3]], &[]);
        // Each permutation of {1,2,3} appears exactly once.
        let mut images: Vec<Vec<u32>> = (0..6)
            .map(|e| (1..=3).map(|v| g.apply(e, v)).collect())
            .collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 6);
    }

    #[test]
    fn planted_transforms_verify() {
        let mut gen = Gen::new(7);
        let i1 = gen.random_problem_a(3, 4);
        let i2 = gen.transform_problem_a(&i1);
        let out = lieconj_core::problema::solve_bruteforce(
            &i1,
            &i2,
            lieconj_core::problema::Budget::default(),
        )
        .unwrap();
        assert!(out.witness.is_some());
    }
}
