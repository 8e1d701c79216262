//! Small combinatorial enumeration helpers: lexicographic permutations,
//! k-subsets, mixed-radix odometers, and permutation algebra.
//!
//! Every solver in this crate promises a deterministic first witness, so all
//! enumeration here is strictly lexicographic.

use alloc::vec::Vec;

/// `compose(p, q)[i] = p[q[i]]` (apply `q` first, then `p`).
pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

pub fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = alloc::vec![0usize; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

pub fn is_permutation(p: &[usize]) -> bool {
    let n = p.len();
    let mut seen = alloc::vec![false; n];
    for &v in p {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

pub fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// In-place lexicographic successor; `false` when the input was the last.
pub fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All permutations of `0..n` in lexicographic order.
pub struct Permutations {
    state: Vec<usize>,
    started: bool,
    done: bool,
}

impl Permutations {
    pub fn new(n: usize) -> Self {
        Permutations {
            state: identity(n),
            started: false,
            done: false,
        }
    }
}

impl Iterator for Permutations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.state.clone());
        }
        if next_permutation(&mut self.state) {
            Some(self.state.clone())
        } else {
            self.done = true;
            None
        }
    }
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// k-element subsets of `0..n` in lexicographic order.
pub struct Subsets {
    n: usize,
    k: usize,
    state: Vec<usize>,
    started: bool,
    done: bool,
}

impl Subsets {
    pub fn new(n: usize, k: usize) -> Self {
        Subsets {
            n,
            k,
            state: (0..k).collect(),
            started: false,
            done: k > n,
        }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.state.clone());
        }
        let (n, k) = (self.n, self.k);
        if k == 0 {
            self.done = true;
            return None;
        }
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.state[i] != i + n - k {
                self.state[i] += 1;
                for j in i + 1..k {
                    self.state[j] = self.state[j - 1] + 1;
                }
                return Some(self.state.clone());
            }
        }
        self.done = true;
        None
    }
}

/// Mixed-radix odometer, index 0 most significant. Yields every tuple
/// `t` with `t[i] < radices[i]`, in lexicographic order.
pub struct MixedRadix {
    radices: Vec<usize>,
    state: Vec<usize>,
    started: bool,
    done: bool,
}

impl MixedRadix {
    pub fn new(radices: Vec<usize>) -> Self {
        let done = radices.iter().any(|&r| r == 0);
        MixedRadix {
            state: alloc::vec![0; radices.len()],
            radices,
            started: false,
            done,
        }
    }

    pub fn count(&self) -> u128 {
        self.radices.iter().map(|&r| r as u128).product()
    }
}

impl Iterator for MixedRadix {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.state.clone());
        }
        let mut i = self.radices.len();
        while i > 0 {
            i -= 1;
            self.state[i] += 1;
            if self.state[i] < self.radices[i] {
                return Some(self.state.clone());
            }
            self.state[i] = 0;
        }
        self.done = true;
        None
    }
}

/// Permutations of `0..total` preserving consecutive blocks of the given
/// sizes, in lexicographic order of the full image array.
pub struct BlockPermutations {
    offsets: Vec<usize>,
    inner: Vec<Vec<usize>>,
    started: bool,
    done: bool,
}

impl BlockPermutations {
    pub fn new(block_sizes: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(block_sizes.len());
        let mut acc = 0usize;
        for &b in block_sizes {
            offsets.push(acc);
            acc += b;
        }
        BlockPermutations {
            offsets,
            inner: block_sizes.iter().map(|&b| identity(b)).collect(),
            started: false,
            done: false,
        }
    }

    pub fn count(block_sizes: &[usize]) -> u128 {
        block_sizes.iter().map(|&b| factorial(b)).product()
    }

    fn current(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (off, p) in self.offsets.iter().zip(&self.inner) {
            out.extend(p.iter().map(|&v| v + off));
        }
        out
    }
}

impl Iterator for BlockPermutations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current());
        }
        let mut i = self.inner.len();
        while i > 0 {
            i -= 1;
            if next_permutation(&mut self.inner[i]) {
                return Some(self.current());
            }
            let n = self.inner[i].len();
            self.inner[i] = identity(n);
        }
        self.done = true;
        None
    }
}
