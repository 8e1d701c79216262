//! Exact-arithmetic kernels for deciding conjugacy of matrix Lie algebras.
//!
//! Everything here computes over exact fields (arbitrary-precision rationals
//! or prime fields), so every answer is a theorem about the inputs rather
//! than a numerical estimate. The crate is `no_std` (it only needs `alloc`);
//! IO, JSON schemas and the command-line front end live in the companion
//! `lieconj` crate.
//!
//! The main entry points are:
//!
//! * [`abelian::abelian_conjugate`]: conjugacy of abelian diagonalizable
//!   matrix Lie algebras, via weights and permutation code equivalence;
//! * [`code::code_equivalent`]: permutation equivalence of linear codes by
//!   information-set enumeration;
//! * [`graph::find_isomorphism`]: colored (di)graph isomorphism by color
//!   refinement plus individualization backtracking;
//! * [`problema`]: equivalence of block-structured integer matrices under
//!   row/column permutations and per-column alphabet twists, with solvers in
//!   both directions of the graph-isomorphism reduction;
//! * [`cr::cr_equivalent`]: the combined solver for completely reducible
//!   instances (abelian weight matrix plus block-structured label data);
//! * [`sympoly::symmetry_lie_algebra`]: the Lie algebra of the symmetry
//!   group of a dense polynomial, from one exact linear system.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod abelian;
pub mod code;
pub mod cr;
pub mod eigen;
pub mod field;
pub mod graph;
pub mod lie;
pub mod linalg;
pub mod matrix;
pub mod perms;
pub mod poly;
pub mod problema;
pub mod sympoly;

pub use field::{FieldSpec, Scalar};
pub use matrix::Matrix;
