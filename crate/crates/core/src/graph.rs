//! Colored (optionally directed) graphs, 1-dimensional color refinement, and
//! an isomorphism/automorphism solver built on refinement-pruned
//! individualization backtracking.
//!
//! The solver is deterministic: the target cell is the smallest non-singleton
//! color class (smallest color id on ties), candidates are tried in ascending
//! vertex order, and the first complete bijection that survives the full edge
//! check is the witness.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex index out of range")]
    InvalidVertex,
    #[error("self-loops are not allowed")]
    SelfLoop,
    #[error("duplicate edge")]
    DuplicateEdge,
    #[error("vertex color list has wrong length")]
    ColorCountMismatch,
    #[error("graph exceeds the automorphism enumeration bound")]
    TooLarge,
}

/// A vertex bijection witnessing an isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexBijection {
    pub mapping: Vec<usize>,
}

/// Vertex-colored, edge-colored graph; undirected edges are stored with
/// `u <= v`, and `(u, v, color)` triples are unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    vertex_count: usize,
    directed: bool,
    vertex_colors: Vec<u32>,
    edges: Vec<(usize, usize, u32)>,
}

impl ColoredGraph {
    pub fn new(
        directed: bool,
        vertex_colors: Vec<u32>,
        edges: &[(usize, usize, u32)],
    ) -> Result<Self, GraphError> {
        let n = vertex_colors.len();
        let mut set = BTreeSet::new();
        for &(u, v, c) in edges {
            if u >= n || v >= n {
                return Err(GraphError::InvalidVertex);
            }
            if u == v {
                return Err(GraphError::SelfLoop);
            }
            let key = if directed || u <= v { (u, v, c) } else { (v, u, c) };
            if !set.insert(key) {
                return Err(GraphError::DuplicateEdge);
            }
        }
        Ok(ColoredGraph {
            vertex_count: n,
            directed,
            vertex_colors,
            edges: set.into_iter().collect(),
        })
    }

    /// Uncolored simple undirected graph.
    pub fn simple_undirected(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let colored: Vec<(usize, usize, u32)> = edges.iter().map(|&(u, v)| (u, v, 0)).collect();
        ColoredGraph::new(false, alloc::vec![0; n], &colored)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_colors(&self) -> &[u32] {
        &self.vertex_colors
    }

    /// Edges in sorted order (undirected ones normalized to `u <= v`).
    pub fn edges(&self) -> &[(usize, usize, u32)] {
        &self.edges
    }

    /// Sorted undirected edge list without colors, for simple graphs.
    pub fn plain_edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(u, v, _)| (u, v)).collect()
    }

    fn adjacency(&self) -> (Vec<Vec<(usize, u32)>>, Vec<Vec<(usize, u32)>>) {
        let mut out = alloc::vec![Vec::new(); self.vertex_count];
        let mut inn = alloc::vec![Vec::new(); self.vertex_count];
        for &(u, v, c) in &self.edges {
            if self.directed {
                out[u].push((v, c));
                inn[v].push((u, c));
            } else {
                out[u].push((v, c));
                out[v].push((u, c));
            }
        }
        (out, inn)
    }
}

/// Re-check that `mapping` is a color/edge/direction preserving bijection.
/// Kept independent of the search so it can vet every returned witness.
pub fn is_isomorphism(g1: &ColoredGraph, g2: &ColoredGraph, mapping: &[usize]) -> bool {
    if g1.vertex_count != g2.vertex_count
        || g1.directed != g2.directed
        || mapping.len() != g1.vertex_count
        || g1.edges.len() != g2.edges.len()
    {
        return false;
    }
    if !crate::perms::is_permutation(mapping) {
        return false;
    }
    for v in 0..g1.vertex_count {
        if g1.vertex_colors[v] != g2.vertex_colors[mapping[v]] {
            return false;
        }
    }
    let e2: BTreeSet<(usize, usize, u32)> = g2.edges.iter().copied().collect();
    for &(u, v, c) in &g1.edges {
        let (mu, mv) = (mapping[u], mapping[v]);
        let key = if g2.directed || mu <= mv {
            (mu, mv, c)
        } else {
            (mv, mu, c)
        };
        if !e2.contains(&key) {
            return false;
        }
    }
    true
}

type Signature = (u32, Vec<(u32, u32)>, Vec<(u32, u32)>);

fn signatures(
    g: &ColoredGraph,
    adj: &(Vec<Vec<(usize, u32)>>, Vec<Vec<(usize, u32)>>),
    colors: &[u32],
) -> Vec<Signature> {
    (0..g.vertex_count)
        .map(|v| {
            let mut outs: Vec<(u32, u32)> =
                adj.0[v].iter().map(|&(w, c)| (c, colors[w])).collect();
            outs.sort_unstable();
            let mut ins: Vec<(u32, u32)> = adj.1[v].iter().map(|&(w, c)| (c, colors[w])).collect();
            ins.sort_unstable();
            (colors[v], outs, ins)
        })
        .collect()
}

fn color_class_count(colors: &[u32]) -> usize {
    let mut distinct: Vec<u32> = colors.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    distinct.len()
}

/// Coarsest stable refinement of the graph's own vertex coloring. Color ids
/// are assigned deterministically by sorted signature, so isomorphic graphs
/// get equal stable color multisets.
pub fn refine(g: &ColoredGraph) -> Vec<u32> {
    let adj = g.adjacency();
    let mut colors = g.vertex_colors.clone();
    loop {
        let sigs = signatures(g, &adj, &colors);
        let mut sorted: Vec<&Signature> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        let next: Vec<u32> = sigs
            .iter()
            .map(|s| sorted.binary_search(&s).unwrap() as u32)
            .collect();
        if color_class_count(&next) == color_class_count(&colors) {
            return next;
        }
        colors = next;
    }
}

/// Lockstep refinement of two graphs with a shared color dictionary.
/// `None` means the signature multisets disagreed: no isomorphism can
/// respect the current coloring.
fn refine_pair(
    g1: &ColoredGraph,
    adj1: &(Vec<Vec<(usize, u32)>>, Vec<Vec<(usize, u32)>>),
    c1: &[u32],
    g2: &ColoredGraph,
    adj2: &(Vec<Vec<(usize, u32)>>, Vec<Vec<(usize, u32)>>),
    c2: &[u32],
) -> Option<(Vec<u32>, Vec<u32>)> {
    let mut colors1 = c1.to_vec();
    let mut colors2 = c2.to_vec();
    loop {
        let s1 = signatures(g1, adj1, &colors1);
        let s2 = signatures(g2, adj2, &colors2);
        let mut m1: Vec<&Signature> = s1.iter().collect();
        let mut m2: Vec<&Signature> = s2.iter().collect();
        m1.sort();
        m2.sort();
        if m1 != m2 {
            return None;
        }
        let mut dict = m1;
        dict.dedup();
        let next1: Vec<u32> = s1
            .iter()
            .map(|s| dict.binary_search(&s).unwrap() as u32)
            .collect();
        let next2: Vec<u32> = s2
            .iter()
            .map(|s| dict.binary_search(&s).unwrap() as u32)
            .collect();
        // Refinement only ever splits classes, so an unchanged class count
        // means the partition is stable (ids are already normalized).
        let stable = color_class_count(&next1) == color_class_count(&colors1);
        colors1 = next1;
        colors2 = next2;
        if stable {
            return Some((colors1, colors2));
        }
    }
}

struct Searcher<'a> {
    g1: &'a ColoredGraph,
    g2: &'a ColoredGraph,
    adj1: (Vec<Vec<(usize, u32)>>, Vec<Vec<(usize, u32)>>),
    adj2: (Vec<Vec<(usize, u32)>>, Vec<Vec<(usize, u32)>>),
    collect_all: bool,
    found: Vec<VertexBijection>,
    nodes: u64,
}

impl Searcher<'_> {
    /// Returns true when a single witness was requested and found.
    fn search(&mut self, c1: &[u32], c2: &[u32]) -> bool {
        self.nodes += 1;
        let Some((c1, c2)) = refine_pair(self.g1, &self.adj1, c1, self.g2, &self.adj2, c2)
        else {
            return false;
        };
        let n = self.g1.vertex_count();
        // Group by color; cells are matched across the two graphs by id.
        let max_color = c1.iter().copied().max().map(|m| m as usize + 1).unwrap_or(0);
        let mut cells1: Vec<Vec<usize>> = alloc::vec![Vec::new(); max_color];
        let mut cells2: Vec<Vec<usize>> = alloc::vec![Vec::new(); max_color];
        for v in 0..n {
            cells1[c1[v] as usize].push(v);
            cells2[c2[v] as usize].push(v);
        }
        let target = cells1
            .iter()
            .enumerate()
            .filter(|(_, cell)| cell.len() > 1)
            .min_by_key(|(color, cell)| (cell.len(), *color));
        let Some((color, cell)) = target else {
            // Discrete coloring: read off the candidate bijection.
            let mut mapping = alloc::vec![0usize; n];
            for (color, cell) in cells1.iter().enumerate() {
                if let (Some(&v), Some(&w)) = (cell.first(), cells2[color].first()) {
                    mapping[v] = w;
                }
            }
            if is_isomorphism(self.g1, self.g2, &mapping) {
                self.found.push(VertexBijection { mapping });
                return !self.collect_all;
            }
            return false;
        };
        let v = cell[0];
        let fresh = max_color as u32;
        for &w in &cells2[color] {
            let mut n1 = c1.clone();
            let mut n2 = c2.clone();
            n1[v] = fresh;
            n2[w] = fresh;
            if self.search(&n1, &n2) {
                return true;
            }
        }
        false
    }
}

/// Outcome of an isomorphism search, with the node counter used for
/// diagnostics.
#[derive(Debug, Clone)]
pub struct IsoOutcome {
    pub witness: Option<VertexBijection>,
    pub nodes: u64,
}

pub fn find_isomorphism_with_stats(g1: &ColoredGraph, g2: &ColoredGraph) -> IsoOutcome {
    if g1.vertex_count != g2.vertex_count
        || g1.directed != g2.directed
        || g1.edges.len() != g2.edges.len()
    {
        return IsoOutcome {
            witness: None,
            nodes: 0,
        };
    }
    let mut searcher = Searcher {
        g1,
        g2,
        adj1: g1.adjacency(),
        adj2: g2.adjacency(),
        collect_all: false,
        found: Vec::new(),
        nodes: 0,
    };
    searcher.search(&g1.vertex_colors, &g2.vertex_colors);
    IsoOutcome {
        witness: searcher.found.into_iter().next(),
        nodes: searcher.nodes,
    }
}

/// First isomorphism in the deterministic search order, or `None`.
pub fn find_isomorphism(g1: &ColoredGraph, g2: &ColoredGraph) -> Option<VertexBijection> {
    find_isomorphism_with_stats(g1, g2).witness
}

pub const DEFAULT_AUTOMORPHISM_BOUND: usize = 64;

/// The full automorphism group as an explicit list, by exhaustive
/// backtracking. Refuses graphs above the vertex bound.
pub fn automorphisms(g: &ColoredGraph, max_vertices: usize) -> Result<Vec<VertexBijection>, GraphError> {
    if g.vertex_count > max_vertices {
        return Err(GraphError::TooLarge);
    }
    let mut searcher = Searcher {
        g1: g,
        g2: g,
        adj1: g.adjacency(),
        adj2: g.adjacency(),
        collect_all: true,
        found: Vec::new(),
        nodes: 0,
    };
    searcher.search(&g.vertex_colors, &g.vertex_colors);
    Ok(searcher.found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perms::Permutations;

    fn triangle() -> ColoredGraph {
        ColoredGraph::simple_undirected(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn path3() -> ColoredGraph {
        ColoredGraph::simple_undirected(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn cycle(n: usize) -> ColoredGraph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        ColoredGraph::simple_undirected(n, &edges).unwrap()
    }

    fn two_triangles() -> ColoredGraph {
        ColoredGraph::simple_undirected(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
            .unwrap()
    }

    /// Exhaustive oracle: try all n! bijections.
    fn brute_force_isomorphic(g1: &ColoredGraph, g2: &ColoredGraph) -> bool {
        if g1.vertex_count() != g2.vertex_count() {
            return false;
        }
        Permutations::new(g1.vertex_count()).any(|p| is_isomorphism(g1, g2, &p))
    }

    #[test]
    fn construction_rejects_bad_edges() {
        assert_eq!(
            ColoredGraph::simple_undirected(2, &[(0, 0)]),
            Err(GraphError::SelfLoop)
        );
        assert_eq!(
            ColoredGraph::simple_undirected(2, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge)
        );
        assert_eq!(
            ColoredGraph::simple_undirected(2, &[(0, 2)]),
            Err(GraphError::InvalidVertex)
        );
    }

    #[test]
    fn refine_trivial_cases() {
        assert_eq!(refine(&triangle()), alloc::vec![0, 0, 0]);
        let p = refine(&path3());
        assert_eq!(p[0], p[2]);
        assert_ne!(p[0], p[1]);
    }

    #[test]
    fn refinement_cannot_split_regular_graphs() {
        // 6-cycle vs two triangles: both 2-regular, so refinement alone
        // leaves a single class; only the backtracking distinguishes them.
        let c6 = cycle(6);
        let tt = two_triangles();
        assert_eq!(refine(&c6), alloc::vec![0; 6]);
        assert_eq!(refine(&tt), alloc::vec![0; 6]);
        assert!(find_isomorphism(&c6, &tt).is_none());
        assert!(!brute_force_isomorphic(&c6, &tt));
    }

    #[test]
    fn identity_and_degree_mismatch() {
        let t = triangle();
        let w = find_isomorphism(&t, &t).unwrap();
        assert!(is_isomorphism(&t, &t, &w.mapping));
        assert!(find_isomorphism(&triangle(), &path3()).is_none());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&triangle(), 64).unwrap().len(), 6);
        assert_eq!(automorphisms(&path3(), 64).unwrap().len(), 2);
        assert_eq!(automorphisms(&cycle(5), 64).unwrap().len(), 10);
        assert_eq!(automorphisms(&two_triangles(), 64).unwrap().len(), 72);
        let big = ColoredGraph::simple_undirected(65, &[]).unwrap();
        assert_eq!(automorphisms(&big, 64), Err(GraphError::TooLarge));
    }

    #[test]
    fn directed_edges_matter() {
        let a = ColoredGraph::new(true, alloc::vec![0, 0, 0], &[(0, 1, 0), (1, 2, 0)]).unwrap();
        let b = ColoredGraph::new(true, alloc::vec![0, 0, 0], &[(1, 0, 0), (1, 2, 0)]).unwrap();
        assert!(find_isomorphism(&a, &b).is_none());
        let c = ColoredGraph::new(true, alloc::vec![0, 0, 0], &[(2, 1, 0), (1, 0, 0)]).unwrap();
        let w = find_isomorphism(&a, &c).unwrap();
        assert!(is_isomorphism(&a, &c, &w.mapping));
    }

    #[test]
    fn edge_colors_matter() {
        let a = ColoredGraph::new(false, alloc::vec![0, 0], &[(0, 1, 1)]).unwrap();
        let b = ColoredGraph::new(false, alloc::vec![0, 0], &[(0, 1, 2)]).unwrap();
        assert!(find_isomorphism(&a, &b).is_none());
    }

    #[test]
    fn agrees_with_brute_force_on_small_graphs() {
        // All graphs on 4 unlabelled vertices, pairwise.
        let all_edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut graphs = Vec::new();
        for mask in 0u32..64 {
            let edges: Vec<(usize, usize)> = all_edges
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            graphs.push(ColoredGraph::simple_undirected(4, &edges).unwrap());
        }
        for g1 in graphs.iter().step_by(3) {
            for g2 in graphs.iter().step_by(5) {
                let fast = find_isomorphism(g1, g2);
                let slow = brute_force_isomorphic(g1, g2);
                assert_eq!(fast.is_some(), slow);
                if let Some(w) = fast {
                    assert!(is_isomorphism(g1, g2, &w.mapping));
                }
            }
        }
    }
}
