//! Randomized invariants across the exact kernels: everything here must
//! hold identically (no tolerances), so a single counterexample is a bug.

use proptest::prelude::*;

use lieconj_core::abelian::{abelian_conjugate, verify_conjugacy, weight_table};
use lieconj_core::code::{code_equivalent, verify_code_witness, Code, ResidualStrategy};
use lieconj_core::eigen::simultaneous_diagonalize;
use lieconj_core::field::{FieldSpec, Scalar};
use lieconj_core::graph::{self, ColoredGraph};
use lieconj_core::lie::{adjoint_rep, bracket, lie_closure, MatrixLieAlgebra};
use lieconj_core::linalg::{inverse, kernel, rref, solve};
use lieconj_core::matrix::Matrix;
use lieconj_core::problema::{
    solve_bruteforce, verify_witness, BlockGroup, Budget, ProblemAInstance,
};
use lieconj_core::sympoly::{substitute_linear, symmetry_lie_algebra, DensePolynomial};

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

fn fields() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rationals),
        Just(FieldSpec::prime_field(2).unwrap()),
        Just(FieldSpec::prime_field(3).unwrap()),
        Just(FieldSpec::prime_field(5).unwrap()),
    ]
}

fn matrix(rows: usize, cols: usize, field: FieldSpec) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-4i64..5, rows * cols)
        .prop_map(move |data| Matrix::from_i64(rows, cols, field, &data))
}

fn small_matrix() -> impl Strategy<Value = Matrix> {
    (2usize..=4, 2usize..=4, fields())
        .prop_flat_map(|(r, c, f)| matrix(r, c, f))
}

fn invertible(n: usize, field: FieldSpec) -> impl Strategy<Value = Matrix> {
    matrix(n, n, field).prop_filter_map("must be invertible", |m| inverse(&m).ok().map(|_| m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rref_is_idempotent(m in small_matrix()) {
        let once = rref(&m);
        let twice = rref(&once.matrix);
        prop_assert_eq!(&once.matrix, &twice.matrix);
        prop_assert_eq!(&once.pivots, &twice.pivots);
        prop_assert!(once.pivots.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn solve_solves_consistent_systems(
        m in small_matrix(),
        coeffs in proptest::collection::vec(-3i64..4, 4),
    ) {
        // Build a consistent right-hand side from a known solution.
        let field = m.field();
        let x: Vec<Scalar> = (0..m.cols()).map(|i| field.from_i64(coeffs[i % coeffs.len()])).collect();
        let b = m.mul_vec(&x);
        let solved = solve(&m, &b).expect("consistent by construction");
        prop_assert_eq!(m.mul_vec(&solved), b);
    }

    #[test]
    fn kernel_rows_annihilate(m in small_matrix()) {
        let k = kernel(&m);
        prop_assert_eq!(k.rows(), m.cols() - rref(&m).rank());
        for r in 0..k.rows() {
            prop_assert!(m.mul_vec(k.row(r)).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn scalar_field_axioms(a in -9i64..10, b in -9i64..10, c in -9i64..10, f in fields()) {
        let (x, y, z) = (f.from_i64(a), f.from_i64(b), f.from_i64(c));
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        if !x.is_zero() {
            let inv = x.inverse().unwrap();
            prop_assert!((&x * &inv).is_one());
        }
    }

    #[test]
    fn simultaneous_diagonalization_is_sound(
        diag_entries in proptest::collection::vec(-3i64..4, 6),
        g0 in invertible(3, FieldSpec::Rationals),
    ) {
        // Conjugate two commuting diagonal matrices by the same g0.
        let d1 = Matrix::from_i64(3, 3, q(), &[diag_entries[0], 0, 0, 0, diag_entries[1], 0, 0, 0, diag_entries[2]]);
        let d2 = Matrix::from_i64(3, 3, q(), &[diag_entries[3], 0, 0, 0, diag_entries[4], 0, 0, 0, diag_entries[5]]);
        let g0i = inverse(&g0).unwrap();
        let family = [g0.mul(&d1).mul(&g0i), g0.mul(&d2).mul(&g0i)];
        let g = simultaneous_diagonalize(&family).expect("commuting and diagonalizable");
        let gi = inverse(&g).unwrap();
        for a in &family {
            prop_assert!(g.mul(a).mul(&gi).is_diagonal());
        }
    }

    #[test]
    fn lie_closure_is_closed(
        m1 in matrix(3, 3, FieldSpec::Rationals),
        m2 in matrix(3, 3, FieldSpec::Rationals),
    ) {
        let closed = lie_closure(3, q(), &[m1, m2]).unwrap();
        prop_assert!(closed.is_closed());
        // and closing again changes nothing
        let again = lie_closure(3, q(), closed.basis()).unwrap();
        prop_assert_eq!(&closed, &again);
    }

    #[test]
    fn structure_constants_satisfy_axioms(
        m1 in matrix(3, 3, FieldSpec::Rationals),
        m2 in matrix(3, 3, FieldSpec::Rationals),
    ) {
        let alg = lie_closure(3, q(), &[m1, m2]).unwrap();
        let sc = alg.structure_constants().unwrap();
        prop_assert!(sc.satisfies_skew_symmetry());
        prop_assert!(sc.satisfies_jacobi());
    }

    #[test]
    fn adjoint_is_a_homomorphism(
        m1 in matrix(2, 2, FieldSpec::Rationals),
        m2 in matrix(2, 2, FieldSpec::Rationals),
    ) {
        let alg = lie_closure(2, q(), &[m1, m2]).unwrap();
        let sc = alg.structure_constants().unwrap();
        let ads = adjoint_rep(&sc);
        let d = sc.dim;
        for u in 0..d {
            for v in 0..d {
                // ad_{[b_u, b_v]} = sum_k c[u][v][k] ad_{b_k}
                let mut expected = Matrix::zero(d, d, q());
                for k in 0..d {
                    expected = expected.add(&ads[k].scale(&sc.c[u][v][k]));
                }
                let lhs = bracket(&ads[u], &ads[v]).unwrap();
                prop_assert_eq!(lhs, expected);
            }
        }
    }

    #[test]
    fn structure_constants_are_conjugation_invariant(
        m1 in matrix(3, 3, FieldSpec::Rationals),
        m2 in matrix(3, 3, FieldSpec::Rationals),
        g in invertible(3, FieldSpec::Rationals),
    ) {
        let alg = lie_closure(3, q(), &[m1, m2]).unwrap();
        let gi = inverse(&g).unwrap();
        let conj_basis: Vec<Matrix> = alg.basis().iter().map(|b| g.mul(b).mul(&gi)).collect();
        let alg_fixed = MatrixLieAlgebra::with_basis(3, q(), alg.basis().to_vec()).unwrap();
        let conj = MatrixLieAlgebra::with_basis(3, q(), conj_basis).unwrap();
        prop_assert_eq!(
            alg_fixed.structure_constants().unwrap(),
            conj.structure_constants().unwrap()
        );
    }

    #[test]
    fn derived_series_sits_inside_lower_central(
        m1 in matrix(3, 3, FieldSpec::Rationals),
        m2 in matrix(3, 3, FieldSpec::Rationals),
    ) {
        let alg = lie_closure(3, q(), &[m1, m2]).unwrap();
        let ds = alg.derived_series();
        let lc = alg.lower_central_series();
        for (i, d) in ds.iter().enumerate() {
            let l = lc.get(i.min(lc.len() - 1)).unwrap();
            for b in d.basis() {
                prop_assert!(l.contains(b));
            }
        }
    }

    #[test]
    fn refinement_is_isomorphism_invariant(
        n in 3usize..7,
        edge_bits in proptest::collection::vec(any::<bool>(), 21),
        seed in any::<u64>(),
    ) {
        let mut edges = Vec::new();
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if edge_bits[bit % edge_bits.len()] {
                    edges.push((u, v));
                }
                bit += 1;
            }
        }
        let g1 = ColoredGraph::simple_undirected(n, &edges).unwrap();
        // relabel by a permutation derived from the seed
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (i + 1);
            perm.swap(i, j);
        }
        let relabeled: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        let g2 = ColoredGraph::simple_undirected(n, &relabeled).unwrap();
        let mut c1 = graph::refine(&g1);
        let mut c2 = graph::refine(&g2);
        c1.sort_unstable();
        c2.sort_unstable();
        prop_assert_eq!(c1, c2);
        // and the solver finds a verified witness
        let w = graph::find_isomorphism(&g1, &g2).expect("planted isomorphism");
        prop_assert!(graph::is_isomorphism(&g1, &g2, &w.mapping));
    }

    #[test]
    fn code_witnesses_are_sound(
        data in proptest::collection::vec(-2i64..3, 8),
        pi_seed in any::<u64>(),
        f in fields(),
    ) {
        let g = Matrix::from_i64(2, 4, f, &data);
        let c1 = Code::new(&g);
        let mut pi: Vec<usize> = (0..4).collect();
        let mut state = pi_seed;
        for i in (1..4).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let j = (state >> 33) as usize % (i + 1);
            pi.swap(i, j);
        }
        let c2 = c1.permuted(&pi);
        let out = code_equivalent(&c1, &c2, ResidualStrategy::Enumerate).unwrap();
        let w = out.witness.expect("planted equivalence");
        prop_assert!(verify_code_witness(&c1, &c2, &w.permutation));
    }

    #[test]
    fn problem_a_equivalence_is_symmetric(
        entries in proptest::collection::vec(0u32..3, 6),
        other in proptest::collection::vec(0u32..3, 6),
    ) {
        let g = BlockGroup::trivial(vec![0, 1, 2]).unwrap();
        let mk = |data: &[u32]| ProblemAInstance::new(
            vec![data[0..3].to_vec(), data[3..6].to_vec()],
            vec![3],
            vec![g.clone()],
            None,
        ).unwrap();
        let i1 = mk(&entries);
        let i2 = mk(&other);
        let fwd = solve_bruteforce(&i1, &i2, Budget::default()).unwrap();
        let bwd = solve_bruteforce(&i2, &i1, Budget::default()).unwrap();
        prop_assert_eq!(fwd.witness.is_some(), bwd.witness.is_some());
        if let Some(w) = fwd.witness {
            prop_assert!(verify_witness(&i1, &i2, &w));
        }
    }

    #[test]
    fn abelian_planted_pairs_are_found(
        d1 in proptest::collection::vec(-2i64..3, 4),
        d2 in proptest::collection::vec(-2i64..3, 4),
        g0 in invertible(4, FieldSpec::Rationals),
    ) {
        let diag = |v: &[i64]| Matrix::from_fn(4, 4, q(), |r, c| {
            if r == c { q().from_i64(v[r]) } else { q().zero() }
        });
        let l1 = MatrixLieAlgebra::span(4, q(), &[diag(&d1), diag(&d2)]).unwrap();
        let g0i = inverse(&g0).unwrap();
        let conj: Vec<Matrix> = l1.basis().iter().map(|b| g0.mul(b).mul(&g0i)).collect();
        let l2 = MatrixLieAlgebra::span(4, q(), &conj).unwrap();
        let out = abelian_conjugate(&l1, &l2).unwrap();
        let w = out.witness.expect("planted conjugacy");
        prop_assert!(verify_conjugacy(&l1, &l2, &w.g).unwrap());
        // weight-space dimension multisets agree (conjugacy invariant)
        let (_, w1) = weight_table(&l1).unwrap();
        let (_, w2) = weight_table(&l2).unwrap();
        prop_assert_eq!(w1.space_dimensions(), w2.space_dimensions());
    }

    #[test]
    fn symmetry_algebras_are_closed_and_covariant(
        exps in proptest::collection::vec((0u32..3, 0u32..3), 3),
        coefs in proptest::collection::vec(1i64..4, 3),
        g in invertible(2, FieldSpec::Rationals),
    ) {
        let terms: Vec<(Vec<u32>, Scalar)> = exps
            .iter()
            .zip(&coefs)
            .map(|(&(a, b), &c)| (vec![a, b], q().from_i64(c)))
            .collect();
        let f = DensePolynomial::new(2, q(), terms).unwrap();
        let alg = symmetry_lie_algebra(&f).unwrap();
        prop_assert!(alg.is_closed());
        // covariance: S(f o g) = g^{-1} S(f) g
        let gi = inverse(&g).unwrap();
        let lhs = symmetry_lie_algebra(&substitute_linear(&f, &g).unwrap()).unwrap();
        let rhs_mats: Vec<Matrix> = alg.basis().iter().map(|b| gi.mul(b).mul(&g)).collect();
        let rhs = MatrixLieAlgebra::span(2, q(), &rhs_mats).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
