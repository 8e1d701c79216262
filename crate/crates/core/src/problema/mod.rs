//! Equivalence of block-structured integer matrices: decide whether a row
//! permutation, a block-preserving column permutation, and one alphabet
//! permutation per column (drawn from a fixed group of type 1, S2, or S3
//! attached to each block) map one matrix onto another.
//!
//! This is the combinatorial core behind semisimple conjugacy testing: rows
//! play the role of irreducible constituents, columns the simple summands,
//! entries the representation labels, and the per-block groups the outer
//! twists. Three independent solvers are provided: plain brute force over
//! column data ([`solve::solve_bruteforce`]), row-permutation enumeration for
//! instances with few rows ([`solve::solve_boundedrows`]), and a reduction to
//! colored graph isomorphism through palette gadgets ([`gadget`]), and they
//! are cross-checked against each other in the test suites.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use thiserror::Error;

use crate::graph::ColoredGraph;
use crate::perms::is_permutation;

pub mod gadget;
pub mod solve;

pub use gadget::{
    problem_a_to_gi, s3_color_gadget, s3_compose, s3_is_even, solve_via_gi, GadgetEncoding,
    GadgetOutcome, S3GadgetLabels, S3Perm, SLOT_PERMS,
};
pub use solve::{solve_boundedrows, solve_bruteforce, Budget, ProblemAOutcome, ProblemAStats};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemAError {
    #[error("invalid instance: {0}")]
    InvalidInstance(&'static str),
    #[error("invalid block group: {0}")]
    InvalidGroup(&'static str),
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error("group kind not supported by the gadget construction")]
    UnsupportedGroup,
    #[error("gadget decoding produced an invalid witness")]
    GadgetDecode,
    #[error("graph must be simple and undirected")]
    NotSimpleUndirected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BlockGroupKind {
    Trivial,
    S2,
    S3,
}

impl BlockGroupKind {
    pub fn order(self) -> usize {
        match self {
            BlockGroupKind::Trivial => 1,
            BlockGroupKind::S2 => 2,
            BlockGroupKind::S3 => 6,
        }
    }
}

/// A permutation group on a sorted alphabet of non-negative integers,
/// abstractly isomorphic to 1, S2, or S3, with every element stored as an
/// explicit table. If 0 is in the alphabet it is fixed by every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockGroup {
    kind: BlockGroupKind,
    alphabet: Vec<u32>,
    /// Index permutations of the alphabet, sorted lexicographically (the
    /// identity always comes first).
    elements: Vec<Vec<usize>>,
}

impl BlockGroup {
    pub fn new(
        kind: BlockGroupKind,
        alphabet: Vec<u32>,
        mut elements: Vec<Vec<usize>>,
    ) -> Result<Self, ProblemAError> {
        let k = alphabet.len();
        if alphabet.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ProblemAError::InvalidGroup(
                "alphabet must be sorted and duplicate-free",
            ));
        }
        if elements.len() != kind.order() {
            return Err(ProblemAError::InvalidGroup(
                "element count does not match the group kind",
            ));
        }
        for e in &elements {
            if e.len() != k || !is_permutation(e) {
                return Err(ProblemAError::InvalidGroup(
                    "element is not a permutation of the alphabet",
                ));
            }
        }
        elements.sort();
        elements.dedup();
        if elements.len() != kind.order() {
            return Err(ProblemAError::InvalidGroup("elements are not distinct"));
        }
        // 0, if present, sits at index 0 of the sorted alphabet.
        if alphabet.first() == Some(&0) && elements.iter().any(|e| e[0] != 0) {
            return Err(ProblemAError::InvalidGroup("0 must be fixed by every element"));
        }
        let group = BlockGroup {
            kind,
            alphabet,
            elements,
        };
        // Closure, identity and inverses.
        if !group.elements.contains(&(0..k).collect::<Vec<_>>()) {
            return Err(ProblemAError::InvalidGroup("missing identity element"));
        }
        for a in 0..group.elements.len() {
            if group.inverse_index(a).is_none() {
                return Err(ProblemAError::InvalidGroup("missing inverse"));
            }
            for b in 0..group.elements.len() {
                if group.compose_index(a, b).is_none() {
                    return Err(ProblemAError::InvalidGroup("not closed under composition"));
                }
            }
        }
        if kind == BlockGroupKind::S3 {
            // Order 6 plus non-abelian pins down S3 (the cyclic group of
            // order 6 is the only other candidate).
            let abelian = (0..6).all(|a| {
                (0..6).all(|b| group.compose_index(a, b) == group.compose_index(b, a))
            });
            if abelian {
                return Err(ProblemAError::InvalidGroup(
                    "order-6 group is abelian, not S3",
                ));
            }
        }
        Ok(group)
    }

    /// The one-element group on the given alphabet.
    pub fn trivial(alphabet: Vec<u32>) -> Result<Self, ProblemAError> {
        let k = alphabet.len();
        BlockGroup::new(BlockGroupKind::Trivial, alphabet, alloc::vec![(0..k).collect()])
    }

    pub fn kind(&self) -> BlockGroupKind {
        self.kind
    }

    pub fn alphabet(&self) -> &[u32] {
        &self.alphabet
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Element tables as index permutations of the sorted alphabet.
    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn contains_value(&self, v: u32) -> bool {
        self.alphabet.binary_search(&v).is_ok()
    }

    fn value_index(&self, v: u32) -> usize {
        self.alphabet.binary_search(&v).expect("value in alphabet")
    }

    /// Image of an alphabet value under the element with the given index.
    pub fn apply(&self, element: usize, v: u32) -> u32 {
        self.alphabet[self.elements[element][self.value_index(v)]]
    }

    /// Index of `a . b` (apply `b` first), if closure holds.
    pub fn compose_index(&self, a: usize, b: usize) -> Option<usize> {
        let table: Vec<usize> = self.elements[b]
            .iter()
            .map(|&i| self.elements[a][i])
            .collect();
        self.elements.iter().position(|e| *e == table)
    }

    pub fn inverse_index(&self, a: usize) -> Option<usize> {
        let inv = crate::perms::invert(&self.elements[a]);
        self.elements.iter().position(|e| *e == inv)
    }

    pub fn identity_index(&self) -> usize {
        let k = self.alphabet.len();
        self.elements
            .iter()
            .position(|e| *e == (0..k).collect::<Vec<_>>())
            .expect("identity validated at construction")
    }

    /// Index of the element whose value table matches `map` (as pairs of
    /// `(value, image)` over the whole alphabet).
    pub fn element_matching(&self, map: &dyn Fn(u32) -> u32) -> Option<usize> {
        'outer: for (idx, e) in self.elements.iter().enumerate() {
            for (i, &v) in self.alphabet.iter().enumerate() {
                if self.alphabet[e[i]] != map(v) {
                    continue 'outer;
                }
            }
            return Some(idx);
        }
        None
    }

    /// Orbits on alphabet indices, each sorted, ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let k = self.alphabet.len();
        let mut seen = alloc::vec![false; k];
        let mut orbits = Vec::new();
        for start in 0..k {
            if seen[start] {
                continue;
            }
            let mut orbit = BTreeSet::new();
            let mut frontier = alloc::vec![start];
            while let Some(i) = frontier.pop() {
                if !orbit.insert(i) {
                    continue;
                }
                seen[i] = true;
                for e in &self.elements {
                    frontier.push(e[i]);
                }
            }
            orbits.push(orbit.into_iter().collect());
        }
        orbits
    }
}

/// An `r x s` matrix of non-negative integers with a column block structure,
/// one [`BlockGroup`] per block, and optional opaque row colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemAInstance {
    matrix: Vec<Vec<u32>>,
    rows: usize,
    cols: usize,
    block_sizes: Vec<usize>,
    groups: Vec<BlockGroup>,
    row_colors: Option<Vec<u32>>,
}

impl ProblemAInstance {
    pub fn new(
        matrix: Vec<Vec<u32>>,
        block_sizes: Vec<usize>,
        groups: Vec<BlockGroup>,
        row_colors: Option<Vec<u32>>,
    ) -> Result<Self, ProblemAError> {
        let rows = matrix.len();
        let cols = block_sizes.iter().sum();
        if groups.len() != block_sizes.len() {
            return Err(ProblemAError::InvalidInstance(
                "one group per block is required",
            ));
        }
        if block_sizes.iter().any(|&k| k == 0) {
            return Err(ProblemAError::InvalidInstance("empty block"));
        }
        for row in &matrix {
            if row.len() != cols {
                return Err(ProblemAError::InvalidInstance("ragged matrix"));
            }
        }
        if let Some(rc) = &row_colors {
            if rc.len() != rows {
                return Err(ProblemAError::InvalidInstance(
                    "row color count must match the row count",
                ));
            }
        }
        let inst = ProblemAInstance {
            matrix,
            rows,
            cols,
            block_sizes,
            groups,
            row_colors,
        };
        for j in 0..cols {
            let g = inst.group_of_col(j);
            for i in 0..rows {
                if !g.contains_value(inst.matrix[i][j]) {
                    return Err(ProblemAError::InvalidInstance(
                        "matrix entry outside the block alphabet",
                    ));
                }
            }
        }
        Ok(inst)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> u32 {
        self.matrix[i][j]
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn groups(&self) -> &[BlockGroup] {
        &self.groups
    }

    pub fn row_colors(&self) -> Option<&[u32]> {
        self.row_colors.as_deref()
    }

    /// The same instance with row colors replaced.
    pub fn with_row_colors(&self, colors: Option<Vec<u32>>) -> Result<Self, ProblemAError> {
        ProblemAInstance::new(
            self.matrix.clone(),
            self.block_sizes.clone(),
            self.groups.clone(),
            colors,
        )
    }

    pub fn block_of_col(&self, j: usize) -> usize {
        let mut acc = 0usize;
        for (b, &k) in self.block_sizes.iter().enumerate() {
            acc += k;
            if j < acc {
                return b;
            }
        }
        panic!("column out of range");
    }

    pub fn group_of_col(&self, j: usize) -> &BlockGroup {
        &self.groups[self.block_of_col(j)]
    }

    /// The equivalent instance obtained by applying the inverse transform:
    /// the returned `I2` satisfies `self(i, j) = g_j(I2(pi(i), sigma(j)))`,
    /// so `(pi, sigma, g)` is a valid witness between `self` and the result.
    pub fn transformed(
        &self,
        row_perm: &[usize],
        col_perm: &[usize],
        col_elements: &[usize],
    ) -> Result<Self, ProblemAError> {
        let (r, s) = (self.rows(), self.cols());
        if row_perm.len() != r
            || col_perm.len() != s
            || col_elements.len() != s
            || !is_permutation(row_perm)
            || !is_permutation(col_perm)
        {
            return Err(ProblemAError::InvalidInstance("malformed transform"));
        }
        let mut m2 = alloc::vec![alloc::vec![0u32; s]; r];
        for i in 0..r {
            for j in 0..s {
                if self.block_of_col(j) != self.block_of_col(col_perm[j]) {
                    return Err(ProblemAError::InvalidInstance(
                        "column permutation must preserve blocks",
                    ));
                }
                let g = self.group_of_col(j);
                let inv = g
                    .inverse_index(*col_elements.get(j).filter(|&&e| e < g.order()).ok_or(
                        ProblemAError::InvalidInstance("element index out of range"),
                    )?)
                    .expect("groups are closed under inversion");
                m2[row_perm[i]][col_perm[j]] = g.apply(inv, self.at(i, j));
            }
        }
        let colors = self.row_colors().map(|c1| {
            let mut c2 = alloc::vec![0u32; r];
            for i in 0..r {
                c2[row_perm[i]] = c1[i];
            }
            c2
        });
        ProblemAInstance::new(m2, self.block_sizes.clone(), self.groups.clone(), colors)
    }

    /// Shape, blocks, groups and row-color presence all agree; a mismatch
    /// means "not equivalent", never an error.
    pub fn compatible(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.block_sizes == other.block_sizes
            && self.groups == other.groups
            && self.row_colors.is_some() == other.row_colors.is_some()
    }
}

/// Witness that instance 2 maps onto instance 1:
/// `M1(i, j) = g_j(M2(pi(i), sigma(j)))` for all `i, j`, with `sigma`
/// block-preserving and row colors preserved by `pi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemAWitness {
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    /// Per column of the first instance: index into the block group's
    /// element list.
    pub col_elements: Vec<usize>,
}

/// Re-check the defining identity of a witness; used on every returned
/// witness regardless of which solver produced it.
pub fn verify_witness(i1: &ProblemAInstance, i2: &ProblemAInstance, w: &ProblemAWitness) -> bool {
    if !i1.compatible(i2) {
        return false;
    }
    let (r, s) = (i1.rows(), i1.cols());
    if w.row_perm.len() != r || w.col_perm.len() != s || w.col_elements.len() != s {
        return false;
    }
    if !is_permutation(&w.row_perm) || !is_permutation(&w.col_perm) {
        return false;
    }
    for j in 0..s {
        if i1.block_of_col(j) != i1.block_of_col(w.col_perm[j]) {
            return false;
        }
        if w.col_elements[j] >= i1.group_of_col(j).order() {
            return false;
        }
    }
    if let (Some(c1), Some(c2)) = (i1.row_colors(), i2.row_colors()) {
        for i in 0..r {
            if c1[i] != c2[w.row_perm[i]] {
                return false;
            }
        }
    }
    for i in 0..r {
        for j in 0..s {
            let g = i1.group_of_col(j);
            if i1.at(i, j) != g.apply(w.col_elements[j], i2.at(w.row_perm[i], w.col_perm[j])) {
                return false;
            }
        }
    }
    true
}

/// Edge-vertex incidence matrix of a simple undirected graph as an
/// instance with one trivial block: rows are edges in lexicographic
/// order, columns are vertices.
pub fn gi_to_problem_a(g: &ColoredGraph) -> Result<ProblemAInstance, ProblemAError> {
    if g.directed() {
        return Err(ProblemAError::NotSimpleUndirected);
    }
    let plain = g.plain_edges();
    {
        let mut dedup = plain.clone();
        dedup.dedup();
        if dedup.len() != plain.len() {
            return Err(ProblemAError::NotSimpleUndirected);
        }
    }
    let nv = g.vertex_count();
    if nv == 0 {
        return Err(ProblemAError::InvalidInstance("graph has no vertices"));
    }
    let mut matrix = alloc::vec![alloc::vec![0u32; nv]; plain.len()];
    for (i, &(u, v)) in plain.iter().enumerate() {
        matrix[i][u] = 1;
        matrix[i][v] = 1;
    }
    let mut alphabet: Vec<u32> = matrix.iter().flatten().copied().collect();
    alphabet.sort_unstable();
    alphabet.dedup();
    if alphabet.is_empty() {
        // Edgeless graph: the matrix is 0 x nv; give the group a one-letter
        // alphabet so the instance stays well-formed.
        alphabet.push(0);
    }
    let group = BlockGroup::trivial(alphabet)?;
    ProblemAInstance::new(matrix, alloc::vec![nv], alloc::vec![group], None)
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;

    /// S2 acting on the named fixed points plus disjoint swapped pairs.
    pub(crate) fn s2_group(fixed: &[u32], pairs: &[(u32, u32)]) -> BlockGroup {
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
        BlockGroup::new(BlockGroupKind::S2, alphabet, alloc::vec![identity, swap]).unwrap()
    }

    /// Planted partner via [`ProblemAInstance::transformed`].
    pub(crate) fn apply_transform(
        i1: &ProblemAInstance,
        row_perm: &[usize],
        col_perm: &[usize],
        col_elements: &[usize],
    ) -> ProblemAInstance {
        i1.transformed(row_perm, col_perm, col_elements).unwrap()
    }
}
