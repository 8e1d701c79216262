//! Direct solvers: full enumeration of column data with row matching by
//! sorting, and row-permutation enumeration for instances with few rows.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{verify_witness, ProblemAError, ProblemAInstance, ProblemAWitness};
use crate::perms::{BlockPermutations, MixedRadix, Permutations};

/// Guard on the size of the enumeration; solvers refuse to start a search
/// larger than this.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_combinations: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_combinations: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProblemAStats {
    /// Combinations of column data (and row permutations, where
    /// enumerated) that were actually tried.
    pub combinations_tried: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemAOutcome {
    pub witness: Option<ProblemAWitness>,
    pub stats: ProblemAStats,
}

fn not_equivalent(stats: ProblemAStats) -> ProblemAOutcome {
    ProblemAOutcome {
        witness: None,
        stats,
    }
}

/// Row colors as a matching key; instances without colors use a constant.
fn row_color(inst: &ProblemAInstance, i: usize) -> u32 {
    inst.row_colors().map(|c| c[i]).unwrap_or(0)
}

/// Enumerate block-preserving column permutations and per-column group
/// elements in lexicographic order; for each, the transformed second matrix
/// must match the first up to a row permutation, found by stable sorting on
/// `(row color, row content)`.
pub fn solve_bruteforce(
    i1: &ProblemAInstance,
    i2: &ProblemAInstance,
    budget: Budget,
) -> Result<ProblemAOutcome, ProblemAError> {
    let mut stats = ProblemAStats::default();
    if !i1.compatible(i2) {
        return Ok(not_equivalent(stats));
    }
    let (r, s) = (i1.rows(), i1.cols());
    let sigma_count = BlockPermutations::count(i1.block_sizes());
    let elem_radices: Vec<usize> = (0..s).map(|j| i1.group_of_col(j).order()).collect();
    let elem_count: u128 = elem_radices.iter().map(|&x| x as u128).product();
    if sigma_count.saturating_mul(elem_count) > budget.max_combinations {
        return Err(ProblemAError::BudgetExceeded);
    }

    for sigma in BlockPermutations::new(i1.block_sizes()) {
        for combo in MixedRadix::new(elem_radices.clone()) {
            stats.combinations_tried += 1;
            // n[i][j] = g_j(M2(i, sigma(j))); a witness needs
            // M1 row i == n row pi(i) with matching row colors.
            let mut queues: BTreeMap<(u32, Vec<u32>), Vec<usize>> = BTreeMap::new();
            for i in 0..r {
                let row: Vec<u32> = (0..s)
                    .map(|j| i1.group_of_col(j).apply(combo[j], i2.at(i, sigma[j])))
                    .collect();
                queues.entry((row_color(i2, i), row)).or_default().push(i);
            }
            let mut row_perm = Vec::with_capacity(r);
            let mut ok = true;
            for i in 0..r {
                let key = (
                    row_color(i1, i),
                    (0..s).map(|j| i1.at(i, j)).collect::<Vec<u32>>(),
                );
                match queues.get_mut(&key).and_then(|q| {
                    if q.is_empty() {
                        None
                    } else {
                        Some(q.remove(0))
                    }
                }) {
                    Some(target) => row_perm.push(target),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let witness = ProblemAWitness {
                row_perm,
                col_perm: sigma.clone(),
                col_elements: combo,
            };
            debug_assert!(verify_witness(i1, i2, &witness));
            if verify_witness(i1, i2, &witness) {
                return Ok(ProblemAOutcome {
                    witness: Some(witness),
                    stats,
                });
            }
        }
    }
    Ok(not_equivalent(stats))
}

/// Enumerate column twists (only over columns with a nontrivial group) and
/// all `r!` row permutations; columns are then matched per block by sorting
/// column vectors, with lexicographic tie-breaking.
pub fn solve_boundedrows(
    i1: &ProblemAInstance,
    i2: &ProblemAInstance,
    budget: Budget,
) -> Result<ProblemAOutcome, ProblemAError> {
    let mut stats = ProblemAStats::default();
    if !i1.compatible(i2) {
        return Ok(not_equivalent(stats));
    }
    let (r, s) = (i1.rows(), i1.cols());
    // Radix 1 for trivial columns keeps the odometer aligned with column
    // indices without enlarging the search.
    let radices: Vec<usize> = (0..s).map(|j| i2.group_of_col(j).order()).collect();
    let twist_count: u128 = radices.iter().map(|&x| x as u128).product();
    let total = twist_count.saturating_mul(crate::perms::factorial(r));
    if total > budget.max_combinations {
        return Err(ProblemAError::BudgetExceeded);
    }

    let col1: Vec<Vec<u32>> = (0..s)
        .map(|j| (0..r).map(|i| i1.at(i, j)).collect())
        .collect();

    for twists in MixedRadix::new(radices) {
        for pi in Permutations::new(r) {
            stats.combinations_tried += 1;
            if let Some(c1) = i1.row_colors() {
                let c2 = i2.row_colors().expect("compatibility checked");
                if (0..r).any(|i| c1[i] != c2[pi[i]]) {
                    continue;
                }
            }
            // b[c] = column c of M2 with rows permuted by pi and entries
            // twisted by h_c.
            let b: Vec<Vec<u32>> = (0..s)
                .map(|c| {
                    let g = i2.group_of_col(c);
                    (0..r).map(|i| g.apply(twists[c], i2.at(pi[i], c))).collect()
                })
                .collect();
            // Per-block multiset matching, earliest available column first.
            let mut used = alloc::vec![false; s];
            let mut col_perm = alloc::vec![0usize; s];
            let mut start = 0usize;
            let mut ok = true;
            'blocks: for &width in i1.block_sizes() {
                for j in start..start + width {
                    let mut found = false;
                    for c in start..start + width {
                        if !used[c] && b[c] == col1[j] {
                            used[c] = true;
                            col_perm[j] = c;
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        ok = false;
                        break 'blocks;
                    }
                }
                start += width;
            }
            if !ok {
                continue;
            }
            let witness = ProblemAWitness {
                row_perm: pi,
                col_perm: col_perm.clone(),
                col_elements: col_perm.iter().map(|&c| twists[c]).collect(),
            };
            if verify_witness(i1, i2, &witness) {
                return Ok(ProblemAOutcome {
                    witness: Some(witness),
                    stats,
                });
            }
        }
    }
    Ok(not_equivalent(stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problema::BlockGroup;

    fn trivial_instance(m: Vec<Vec<u32>>, cols: usize) -> ProblemAInstance {
        let mut alphabet: Vec<u32> = m.iter().flatten().copied().collect();
        alphabet.sort_unstable();
        alphabet.dedup();
        if alphabet.is_empty() {
            alphabet.push(0);
        }
        let g = BlockGroup::trivial(alphabet).unwrap();
        ProblemAInstance::new(m, alloc::vec![cols], alloc::vec![g], None).unwrap()
    }

    #[test]
    fn identical_instances() {
        let i = trivial_instance(alloc::vec![alloc::vec![1, 2], alloc::vec![2, 2]], 2);
        for solver in [solve_bruteforce, solve_boundedrows] {
            let out = solver(&i, &i, Budget::default()).unwrap();
            let w = out.witness.unwrap();
            assert!(verify_witness(&i, &i, &w));
        }
    }

    #[test]
    fn single_row_swap() {
        let i1 = trivial_instance(alloc::vec![alloc::vec![1, 2]], 2);
        let i2 = trivial_instance(alloc::vec![alloc::vec![2, 1]], 2);
        let out = solve_bruteforce(&i1, &i2, Budget::default()).unwrap();
        let w = out.witness.unwrap();
        assert_eq!(w.row_perm, alloc::vec![0]);
        assert_eq!(w.col_perm, alloc::vec![1, 0]);
    }

    #[test]
    fn multiset_mismatch() {
        let i1 = trivial_instance(alloc::vec![alloc::vec![1], alloc::vec![2]], 1);
        let i2 = trivial_instance(alloc::vec![alloc::vec![1], alloc::vec![1]], 1);
        // Alphabets differ ({1,2} vs {1}), so the instances are simply
        // incompatible -> not equivalent.
        for solver in [solve_bruteforce, solve_boundedrows] {
            assert!(solver(&i1, &i2, Budget::default()).unwrap().witness.is_none());
        }
        // Same alphabet, still inequivalent: entry multisets differ.
        let g = BlockGroup::trivial(alloc::vec![1, 2]).unwrap();
        let j1 = ProblemAInstance::new(
            alloc::vec![alloc::vec![1], alloc::vec![2]],
            alloc::vec![1],
            alloc::vec![g.clone()],
            None,
        )
        .unwrap();
        let j2 = ProblemAInstance::new(
            alloc::vec![alloc::vec![1], alloc::vec![1]],
            alloc::vec![1],
            alloc::vec![g],
            None,
        )
        .unwrap();
        for solver in [solve_bruteforce, solve_boundedrows] {
            assert!(solver(&j1, &j2, Budget::default()).unwrap().witness.is_none());
        }
    }

    #[test]
    fn within_block_column_swap_found_with_identity_rows() {
        let i1 = trivial_instance(
            alloc::vec![alloc::vec![1, 2, 3], alloc::vec![2, 3, 1]],
            3,
        );
        // swap columns 0 and 1
        let i2 = trivial_instance(
            alloc::vec![alloc::vec![2, 1, 3], alloc::vec![3, 2, 1]],
            3,
        );
        let out = solve_boundedrows(&i1, &i2, Budget::default()).unwrap();
        let w = out.witness.unwrap();
        assert_eq!(w.row_perm, alloc::vec![0, 1]);
        assert!(verify_witness(&i1, &i2, &w));
    }

    #[test]
    fn s2_twist_is_needed() {
        let g = crate::problema::testutil::s2_group(&[0], &[(1, 2)]);
        let i1 = ProblemAInstance::new(
            alloc::vec![alloc::vec![1, 0], alloc::vec![2, 1]],
            alloc::vec![2],
            alloc::vec![g.clone()],
            None,
        )
        .unwrap();
        // twist column 0 by the swap (1 <-> 2)
        let i2 = ProblemAInstance::new(
            alloc::vec![alloc::vec![2, 0], alloc::vec![1, 1]],
            alloc::vec![2],
            alloc::vec![g.clone()],
            None,
        )
        .unwrap();
        for solver in [solve_bruteforce, solve_boundedrows] {
            let out = solver(&i1, &i2, Budget::default()).unwrap();
            let w = out.witness.expect("equivalent via the S2 twist");
            assert!(verify_witness(&i1, &i2, &w));
        }
        // Without the twist the instances differ: the trivial group fails.
        let t = BlockGroup::trivial(alloc::vec![0, 1, 2]).unwrap();
        let j1 = i1.clone();
        let j1 = ProblemAInstance::new(
            j1.matrix().to_vec(),
            alloc::vec![2],
            alloc::vec![t.clone()],
            None,
        )
        .unwrap();
        let j2 = ProblemAInstance::new(
            i2.matrix().to_vec(),
            alloc::vec![2],
            alloc::vec![t],
            None,
        )
        .unwrap();
        assert!(solve_bruteforce(&j1, &j2, Budget::default())
            .unwrap()
            .witness
            .is_none());
    }

    #[test]
    fn row_colors_constrain_matching() {
        let g = BlockGroup::trivial(alloc::vec![1, 2]).unwrap();
        let mk = |colors: Vec<u32>| {
            ProblemAInstance::new(
                alloc::vec![alloc::vec![1, 2], alloc::vec![1, 2]],
                alloc::vec![2],
                alloc::vec![g.clone()],
                Some(colors),
            )
            .unwrap()
        };
        let i1 = mk(alloc::vec![7, 8]);
        let i2 = mk(alloc::vec![8, 7]);
        for solver in [solve_bruteforce, solve_boundedrows] {
            let w = solver(&i1, &i2, Budget::default()).unwrap().witness.unwrap();
            assert_eq!(w.row_perm, alloc::vec![1, 0]);
        }
        let i3 = mk(alloc::vec![7, 7]);
        for solver in [solve_bruteforce, solve_boundedrows] {
            assert!(solver(&i1, &i3, Budget::default()).unwrap().witness.is_none());
        }
    }

    #[test]
    fn budget_guard() {
        let i = trivial_instance(alloc::vec![alloc::vec![1, 2, 3, 4, 5, 6, 7, 8]], 8);
        let tiny = Budget {
            max_combinations: 10,
        };
        assert_eq!(
            solve_bruteforce(&i, &i, tiny),
            Err(ProblemAError::BudgetExceeded)
        );
    }

    #[test]
    fn solvers_agree_on_planted_mixed_blocks() {
        // blocks [2, 1] with groups S2 and trivial
        let s2 = crate::problema::testutil::s2_group(&[0], &[(1, 2)]);
        let tr = BlockGroup::trivial(alloc::vec![0, 1, 2, 3]).unwrap();
        let i1 = ProblemAInstance::new(
            alloc::vec![
                alloc::vec![1, 2, 3],
                alloc::vec![0, 1, 0],
                alloc::vec![2, 2, 0],
            ],
            alloc::vec![2, 1],
            alloc::vec![s2, tr],
            None,
        )
        .unwrap();
        let planted = ProblemAWitness {
            row_perm: alloc::vec![2, 0, 1],
            col_perm: alloc::vec![1, 0, 2],
            col_elements: alloc::vec![1, 0, 0],
        };
        let i2 = crate::problema::testutil::apply_transform(&i1, &planted.row_perm, &planted.col_perm, &planted.col_elements);
        assert!(verify_witness(&i1, &i2, &planted));
        let a = solve_bruteforce(&i1, &i2, Budget::default()).unwrap();
        let b = solve_boundedrows(&i1, &i2, Budget::default()).unwrap();
        let wa = a.witness.expect("bruteforce finds the planted pair");
        let wb = b.witness.expect("boundedrows finds the planted pair");
        assert!(verify_witness(&i1, &i2, &wa));
        assert!(verify_witness(&i1, &i2, &wb));
    }
}
