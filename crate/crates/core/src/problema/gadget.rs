//! Reduction to colored graph isomorphism via per-column color palettes.
//!
//! Every matrix cell becomes an "edge vertex" tied to its row vertex, its
//! column vertex, and the palette vertex encoding the cell's value. The
//! palette attached to a column is built so that its automorphisms realize
//! exactly the column's block group acting on the alphabet: a marked line
//! for trivial groups, two marked parallel lines for the swap action of S2,
//! and copies of an 11-vertex directed gadget glued along three lines for
//! S3. A graph isomorphism therefore decodes to a row permutation, a
//! block-preserving column permutation, and one group element per column,
//! which is re-verified before being returned.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{
    verify_witness, BlockGroup, BlockGroupKind, ProblemAError, ProblemAInstance, ProblemAWitness,
};
use crate::graph::{find_isomorphism_with_stats, ColoredGraph};

/// A permutation of three points, `perm[x] = image of x`.
pub type S3Perm = [usize; 3];

pub const S3_IDENTITY: S3Perm = [0, 1, 2];

/// Gadget slot order: the six regular-orbit vertices correspond to the six
/// permutations in this order (A12, A23, A31, B21, B32, B13).
pub const SLOT_PERMS: [S3Perm; 6] = [
    [0, 1, 2], // identity        ~ A12
    [1, 2, 0], // 3-cycle 0->1->2 ~ A23
    [2, 0, 1], // 3-cycle 0->2->1 ~ A31
    [1, 0, 2], // swap 0,1        ~ B21
    [2, 1, 0], // swap 0,2        ~ B32
    [0, 2, 1], // swap 1,2        ~ B13
];

/// Apply `b` first, then `a`.
pub fn s3_compose(a: S3Perm, b: S3Perm) -> S3Perm {
    [a[b[0]], a[b[1]], a[b[2]]]
}

pub fn s3_is_even(p: S3Perm) -> bool {
    p == [0, 1, 2] || p == [1, 2, 0] || p == [2, 0, 1]
}

fn slot_index(p: S3Perm) -> usize {
    SLOT_PERMS.iter().position(|&q| q == p).expect("valid perm")
}

/// Named vertices of the standalone 11-vertex color gadget.
#[derive(Debug, Clone, Copy)]
pub struct S3GadgetLabels {
    /// The three point vertices on which the automorphism group acts
    /// naturally.
    pub points: [usize; 3],
    /// Regular-orbit vertices in [`SLOT_PERMS`] order.
    pub slots: [usize; 6],
    pub a: usize,
    pub b: usize,
}

struct GraphBuilder {
    vcolors: Vec<u32>,
    edges: Vec<(usize, usize, u32)>,
}

impl GraphBuilder {
    fn new() -> Self {
        GraphBuilder {
            vcolors: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn vertex(&mut self, color: u32) -> usize {
        self.vcolors.push(color);
        self.vcolors.len() - 1
    }

    fn undirected(&mut self, u: usize, v: usize) {
        self.edges.push((u, v, 0));
        self.edges.push((v, u, 0));
    }

    fn arc(&mut self, u: usize, v: usize) {
        self.edges.push((u, v, 0));
    }

    fn build(self) -> ColoredGraph {
        ColoredGraph::new(true, self.vcolors, &self.edges).expect("builder emits valid edges")
    }
}

/// Emit one copy of the 11-vertex gadget into the builder, all vertices
/// with the given color. Returns (points, slots, a, b).
fn emit_gadget_copy(b: &mut GraphBuilder, color: u32) -> ([usize; 3], [usize; 6], usize, usize) {
    let points = [b.vertex(color), b.vertex(color), b.vertex(color)];
    let slots = [
        b.vertex(color), // A12
        b.vertex(color), // A23
        b.vertex(color), // A31
        b.vertex(color), // B21
        b.vertex(color), // B32
        b.vertex(color), // B13
    ];
    let a = b.vertex(color);
    let bb = b.vertex(color);
    // A-side triangle and hub.
    b.undirected(slots[0], slots[1]);
    b.undirected(slots[1], slots[2]);
    b.undirected(slots[2], slots[0]);
    b.undirected(a, slots[0]);
    b.undirected(a, slots[1]);
    b.undirected(a, slots[2]);
    // B-side triangle and hub.
    b.undirected(slots[3], slots[4]);
    b.undirected(slots[4], slots[5]);
    b.undirected(slots[5], slots[3]);
    b.undirected(bb, slots[3]);
    b.undirected(bb, slots[4]);
    b.undirected(bb, slots[5]);
    // Directed A-cycle: 1 -> A12 -> 2 -> A23 -> 3 -> A31 -> 1.
    b.arc(points[0], slots[0]);
    b.arc(slots[0], points[1]);
    b.arc(points[1], slots[1]);
    b.arc(slots[1], points[2]);
    b.arc(points[2], slots[2]);
    b.arc(slots[2], points[0]);
    // Directed B-cycle: 1 -> B13 -> 3 -> B32 -> 2 -> B21 -> 1.
    b.arc(points[0], slots[5]);
    b.arc(slots[5], points[2]);
    b.arc(points[2], slots[4]);
    b.arc(slots[4], points[1]);
    b.arc(points[1], slots[3]);
    b.arc(slots[3], points[0]);
    (points, slots, a, bb)
}

/// The standalone 11-vertex color gadget, monochromatic. Its automorphism
/// group is S3: natural on the points, regular on the slots, and the parity
/// action on `a`/`b`.
pub fn s3_color_gadget() -> (ColoredGraph, S3GadgetLabels) {
    let mut b = GraphBuilder::new();
    let (points, slots, a, bb) = emit_gadget_copy(&mut b, 0);
    (
        b.build(),
        S3GadgetLabels {
            points,
            slots,
            a,
            b: bb,
        },
    )
}

/// A group isomorphism onto S3: the element table of index `e` acts on the
/// three gadget points as `phi[e]`. Deterministic: the first order-3 and
/// order-2 elements (in canonical element order) generate.
fn s3_isomorphism(g: &BlockGroup) -> Vec<S3Perm> {
    debug_assert_eq!(g.order(), 6);
    let id = g.identity_index();
    let order = |e: usize| -> usize {
        let mut acc = e;
        let mut k = 1;
        while acc != id {
            acc = g.compose_index(e, acc).expect("closed");
            k += 1;
        }
        k
    };
    let t = (0..6).find(|&e| order(e) == 3).expect("S3 has a 3-cycle");
    let s = (0..6).find(|&e| order(e) == 2).expect("S3 has an involution");
    let phi_t: S3Perm = [1, 2, 0];
    let phi_s: S3Perm = [1, 0, 2];
    let mut phi = alloc::vec![S3_IDENTITY; 6];
    let mut covered = alloc::vec![false; 6];
    for a_pow in 0..2 {
        for b_pow in 0..3 {
            // group element s^a . t^b and its image
            let mut idx = id;
            let mut img = S3_IDENTITY;
            for _ in 0..b_pow {
                idx = g.compose_index(t, idx).expect("closed");
                img = s3_compose(phi_t, img);
            }
            for _ in 0..a_pow {
                idx = g.compose_index(s, idx).expect("closed");
                img = s3_compose(phi_s, img);
            }
            phi[idx] = img;
            covered[idx] = true;
        }
    }
    debug_assert!(covered.iter().all(|&c| c), "s and t generate the group");
    #[cfg(debug_assertions)]
    for x in 0..6 {
        for y in 0..6 {
            let xy = g.compose_index(x, y).expect("closed");
            debug_assert_eq!(phi[xy], s3_compose(phi[x], phi[y]), "not a homomorphism");
        }
    }
    phi
}

/// Equivariant labels of a 3-orbit: `label[member] in {0,1,2}` with
/// `label(g(x)) = phi[g](label(x))`. The base point is the orbit's smallest
/// member; it is labelled by the fixed point of its stabilizer's image.
fn label_3_orbit(g: &BlockGroup, phi: &[S3Perm], orbit: &[usize]) -> BTreeMap<usize, usize> {
    let x0 = orbit[0];
    let id = g.identity_index();
    let stab = (0..6)
        .find(|&e| e != id && g.elements()[e][x0] == x0)
        .expect("3-orbit point stabilizer has order 2");
    let f = (0..3)
        .find(|&p| phi[stab][p] == p)
        .expect("a transposition fixes one point");
    let mut labels = BTreeMap::new();
    for e in 0..6 {
        let member = g.elements()[e][x0];
        let label = phi[e][f];
        if let Some(&prev) = labels.get(&member) {
            debug_assert_eq!(prev, label, "labeling must be well-defined");
        } else {
            labels.insert(member, label);
        }
    }
    debug_assert_eq!(labels.len(), 3);
    labels
}

/// Equivariant slots of a 6-orbit: member `g(x0)` sits in the slot of
/// `phi[g]`, matching the gadget's regular action.
fn label_6_orbit(g: &BlockGroup, phi: &[S3Perm], orbit: &[usize]) -> BTreeMap<usize, usize> {
    let x0 = orbit[0];
    let mut labels = BTreeMap::new();
    for e in 0..6 {
        let member = g.elements()[e][x0];
        labels.insert(member, slot_index(phi[e]));
    }
    debug_assert_eq!(labels.len(), 6, "regular orbit");
    labels
}

#[derive(Debug, Clone, Copy)]
struct ColorScheme {
    col_base: u32,
    edge_vertex: u32,
    palette: u32,
    mark_trivial: u32,
    mark_s2_fixed: u32,
    mark_s2_orbit: u32,
    mark_s3_fixed: u32,
    mark_s3_gadget: u32,
}

fn color_scheme(label_count: u32, block_count: u32) -> ColorScheme {
    let col_base = label_count;
    ColorScheme {
        col_base,
        edge_vertex: col_base + block_count,
        palette: col_base + block_count + 1,
        mark_trivial: col_base + block_count + 2,
        mark_s2_fixed: col_base + block_count + 3,
        mark_s2_orbit: col_base + block_count + 4,
        mark_s3_fixed: col_base + block_count + 5,
        mark_s3_gadget: col_base + block_count + 6,
    }
}

/// The graph encoding of an instance, with enough bookkeeping to decode an
/// isomorphism back into a witness.
#[derive(Debug, Clone)]
pub struct GadgetEncoding {
    pub graph: ColoredGraph,
    pub row_vertices: Vec<usize>,
    pub col_vertices: Vec<usize>,
    pub cell_vertices: Vec<Vec<usize>>,
    /// Per column: alphabet value -> palette vertex encoding it.
    pub value_vertices: Vec<BTreeMap<u32, usize>>,
}

/// A line of palette vertices (one per value, in the given order) with a
/// marked end vertex attached to the column vertex. Returns value -> vertex.
fn emit_line_palette(
    b: &mut GraphBuilder,
    scheme: &ColorScheme,
    mark_color: u32,
    col_vertex: usize,
    values: &[u32],
) -> BTreeMap<u32, usize> {
    let mut map = BTreeMap::new();
    if values.is_empty() {
        return map;
    }
    let mut prev: Option<usize> = None;
    for &v in values {
        let vertex = b.vertex(scheme.palette);
        map.insert(v, vertex);
        if let Some(p) = prev {
            b.undirected(p, vertex);
        }
        prev = Some(vertex);
    }
    let mark = b.vertex(mark_color);
    b.undirected(prev.expect("nonempty"), mark);
    b.undirected(mark, col_vertex);
    map
}

fn emit_palette(
    b: &mut GraphBuilder,
    scheme: &ColorScheme,
    col_vertex: usize,
    group: &BlockGroup,
) -> Result<BTreeMap<u32, usize>, ProblemAError> {
    let alphabet = group.alphabet();
    match group.kind() {
        BlockGroupKind::Trivial => Ok(emit_line_palette(
            b,
            scheme,
            scheme.mark_trivial,
            col_vertex,
            alphabet,
        )),
        BlockGroupKind::S2 => {
            let orbits = group.orbits();
            let fixed: Vec<u32> = orbits
                .iter()
                .filter(|o| o.len() == 1)
                .map(|o| alphabet[o[0]])
                .collect();
            let pairs: Vec<(u32, u32)> = orbits
                .iter()
                .filter(|o| o.len() == 2)
                .map(|o| (alphabet[o[0]], alphabet[o[1]]))
                .collect();
            if fixed.len() + 2 * pairs.len() != alphabet.len() {
                return Err(ProblemAError::UnsupportedGroup);
            }
            let mut map = emit_line_palette(b, scheme, scheme.mark_s2_fixed, col_vertex, &fixed);
            if !pairs.is_empty() {
                // Two parallel lines; the swap exchanges them position-wise.
                let k = pairs.len();
                let line_a: Vec<usize> = (0..k).map(|_| b.vertex(scheme.palette)).collect();
                let line_b: Vec<usize> = (0..k).map(|_| b.vertex(scheme.palette)).collect();
                for t in 0..k.saturating_sub(1) {
                    b.undirected(line_a[t], line_a[t + 1]);
                    b.undirected(line_b[t], line_b[t + 1]);
                }
                let mark = b.vertex(scheme.mark_s2_orbit);
                b.undirected(line_a[k - 1], mark);
                b.undirected(line_b[k - 1], mark);
                b.undirected(mark, col_vertex);
                for (t, &(x, y)) in pairs.iter().enumerate() {
                    map.insert(x, line_a[t]);
                    map.insert(y, line_b[t]);
                }
            }
            Ok(map)
        }
        BlockGroupKind::S3 => {
            let phi = s3_isomorphism(group);
            let orbits = group.orbits();
            let fixed: Vec<u32> = orbits
                .iter()
                .filter(|o| o.len() == 1)
                .map(|o| alphabet[o[0]])
                .collect();
            let o2: Vec<&Vec<usize>> = orbits.iter().filter(|o| o.len() == 2).collect();
            let o3: Vec<&Vec<usize>> = orbits.iter().filter(|o| o.len() == 3).collect();
            let o6: Vec<&Vec<usize>> = orbits.iter().filter(|o| o.len() == 6).collect();
            if fixed.len() + 2 * o2.len() + 3 * o3.len() + 6 * o6.len() != alphabet.len() {
                return Err(ProblemAError::UnsupportedGroup);
            }
            let mut map = emit_line_palette(b, scheme, scheme.mark_s3_fixed, col_vertex, &fixed);
            let copies = o2.len().max(o3.len()).max(o6.len());
            if copies > 0 {
                let mut all: Vec<([usize; 3], [usize; 6], usize, usize)> = Vec::new();
                for _ in 0..copies {
                    all.push(emit_gadget_copy(b, scheme.palette));
                }
                // Glue consecutive copies along the three point lines.
                for t in 0..copies - 1 {
                    for p in 0..3 {
                        b.undirected(all[t].0[p], all[t + 1].0[p]);
                    }
                }
                // Every vertex of the end copy hangs off the marked vertex.
                let mark = b.vertex(scheme.mark_s3_gadget);
                let (pts, slots, av, bv) = all[copies - 1];
                for v in pts.iter().chain(slots.iter()).chain([&av, &bv]) {
                    b.undirected(*v, mark);
                }
                b.undirected(mark, col_vertex);
                for (t, orbit) in o2.iter().enumerate() {
                    map.insert(alphabet[orbit[0]], all[t].2);
                    map.insert(alphabet[orbit[1]], all[t].3);
                }
                for (t, orbit) in o3.iter().enumerate() {
                    for (&member, &label) in label_3_orbit(group, &phi, orbit).iter() {
                        map.insert(alphabet[member], all[t].0[label]);
                    }
                }
                for (t, orbit) in o6.iter().enumerate() {
                    for (&member, &slot) in label_6_orbit(group, &phi, orbit).iter() {
                        map.insert(alphabet[member], all[t].1[slot]);
                    }
                }
            }
            Ok(map)
        }
    }
}

fn encode(
    inst: &ProblemAInstance,
    label_colors: &BTreeMap<u32, u32>,
    label_count: u32,
) -> Result<GadgetEncoding, ProblemAError> {
    let scheme = color_scheme(label_count, inst.block_sizes().len() as u32);
    let mut b = GraphBuilder::new();
    let row_vertices: Vec<usize> = (0..inst.rows())
        .map(|i| {
            let color = inst
                .row_colors()
                .map(|c| *label_colors.get(&c[i]).expect("label in dictionary"))
                .unwrap_or(0);
            b.vertex(color)
        })
        .collect();
    let col_vertices: Vec<usize> = (0..inst.cols())
        .map(|j| b.vertex(scheme.col_base + inst.block_of_col(j) as u32))
        .collect();
    let mut value_vertices = Vec::with_capacity(inst.cols());
    for j in 0..inst.cols() {
        value_vertices.push(emit_palette(
            &mut b,
            &scheme,
            col_vertices[j],
            inst.group_of_col(j),
        )?);
    }
    let mut cell_vertices = Vec::with_capacity(inst.rows());
    for i in 0..inst.rows() {
        let mut row_cells = Vec::with_capacity(inst.cols());
        for j in 0..inst.cols() {
            let cell = b.vertex(scheme.edge_vertex);
            b.undirected(row_vertices[i], cell);
            b.undirected(cell, col_vertices[j]);
            let value_vertex = value_vertices[j][&inst.at(i, j)];
            b.undirected(cell, value_vertex);
            row_cells.push(cell);
        }
        cell_vertices.push(row_cells);
    }
    Ok(GadgetEncoding {
        graph: b.build(),
        row_vertices,
        col_vertices,
        cell_vertices,
        value_vertices,
    })
}

fn label_dictionary(instances: &[&ProblemAInstance]) -> (BTreeMap<u32, u32>, u32) {
    let mut labels: Vec<u32> = instances
        .iter()
        .filter_map(|i| i.row_colors())
        .flatten()
        .copied()
        .collect();
    labels.sort_unstable();
    labels.dedup();
    let count = labels.len().max(1) as u32;
    (
        labels
            .into_iter()
            .enumerate()
            .map(|(i, l)| (l, i as u32))
            .collect(),
        count,
    )
}

/// Graph encoding of a single instance (colors drawn from its own labels).
pub fn problem_a_to_gi(inst: &ProblemAInstance) -> Result<GadgetEncoding, ProblemAError> {
    let (dict, count) = label_dictionary(&[inst]);
    encode(inst, &dict, count)
}

fn decode(
    i1: &ProblemAInstance,
    i2: &ProblemAInstance,
    enc1: &GadgetEncoding,
    enc2: &GadgetEncoding,
    mapping: &[usize],
) -> Result<ProblemAWitness, ProblemAError> {
    let row_index2: BTreeMap<usize, usize> = enc2
        .row_vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let col_index2: BTreeMap<usize, usize> = enc2
        .col_vertices
        .iter()
        .enumerate()
        .map(|(j, &v)| (v, j))
        .collect();
    let mut value_lookup2: BTreeMap<usize, (usize, u32)> = BTreeMap::new();
    for (j, values) in enc2.value_vertices.iter().enumerate() {
        for (&value, &vertex) in values {
            value_lookup2.insert(vertex, (j, value));
        }
    }
    let row_perm: Vec<usize> = enc1
        .row_vertices
        .iter()
        .map(|&v| row_index2.get(&mapping[v]).copied())
        .collect::<Option<Vec<_>>>()
        .ok_or(ProblemAError::GadgetDecode)?;
    let col_perm: Vec<usize> = enc1
        .col_vertices
        .iter()
        .map(|&v| col_index2.get(&mapping[v]).copied())
        .collect::<Option<Vec<_>>>()
        .ok_or(ProblemAError::GadgetDecode)?;
    let mut col_elements = Vec::with_capacity(i1.cols());
    for j in 0..i1.cols() {
        // h sends each value of column j to the value its palette vertex
        // lands on; the witness element is h^{-1}.
        let mut h_inv: BTreeMap<u32, u32> = BTreeMap::new();
        for (&value, &vertex) in &enc1.value_vertices[j] {
            let &(col2, image) = value_lookup2
                .get(&mapping[vertex])
                .ok_or(ProblemAError::GadgetDecode)?;
            if col2 != col_perm[j] {
                return Err(ProblemAError::GadgetDecode);
            }
            h_inv.insert(image, value);
        }
        let group = i1.group_of_col(j);
        if h_inv.len() != group.alphabet().len() {
            return Err(ProblemAError::GadgetDecode);
        }
        let element = group
            .element_matching(&|v| *h_inv.get(&v).expect("total on alphabet"))
            .ok_or(ProblemAError::GadgetDecode)?;
        col_elements.push(element);
    }
    let witness = ProblemAWitness {
        row_perm,
        col_perm,
        col_elements,
    };
    if verify_witness(i1, i2, &witness) {
        Ok(witness)
    } else {
        Err(ProblemAError::GadgetDecode)
    }
}

#[derive(Debug, Clone)]
pub struct GadgetOutcome {
    pub witness: Option<ProblemAWitness>,
    pub search_nodes: u64,
}

/// Decide equivalence by building both gadget graphs over a shared label
/// dictionary and running the graph-isomorphism solver.
pub fn solve_via_gi(
    i1: &ProblemAInstance,
    i2: &ProblemAInstance,
) -> Result<GadgetOutcome, ProblemAError> {
    if !i1.compatible(i2) {
        return Ok(GadgetOutcome {
            witness: None,
            search_nodes: 0,
        });
    }
    let (dict, count) = label_dictionary(&[i1, i2]);
    let enc1 = encode(i1, &dict, count)?;
    let enc2 = encode(i2, &dict, count)?;
    let outcome = find_isomorphism_with_stats(&enc1.graph, &enc2.graph);
    let witness = match outcome.witness {
        None => None,
        Some(iso) => Some(decode(i1, i2, &enc1, &enc2, &iso.mapping)?),
    };
    Ok(GadgetOutcome {
        witness,
        search_nodes: outcome.nodes,
    })
}
