//! Unordered increasing trees ("recursive trees") and their refined counts.
//!
//! A recursive tree on `n` vertices has vertex set `{0, ..., n-1}`, root
//! `0`, and every non-root vertex attached to a strictly smaller parent.
//! There are `(n-1)!` of them. Two statistics matter here:
//!
//! * `ell` — the number of vertices of degree one, where the root's degree
//!   is its child count and every other vertex adds one for its parent
//!   edge;
//! * `path_end` (`x`) — the endpoint of the path that starts at the root
//!   and always steps to the smallest child.
//!
//! `count_r(n, ell, x)` tallies trees by both statistics at once;
//! `count_t(n, ell)` is its marginal over `x`. Both are available through
//! independent routes (direct enumeration and a two-term recurrence) so
//! that claimed identities can be checked rather than assumed.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::counting::binomial;
use crate::perm::Permutation;

/// Default cap for exhaustive tree enumeration (`10! = 3628800` trees).
pub const DEFAULT_TREE_BOUND: usize = 11;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("vertex {vertex} has parent {parent}, but parents must be smaller")]
    ParentNotSmaller { vertex: usize, parent: u32 },
    #[error("tree on {n} vertices is too small (need n >= {min})")]
    TooSmall { n: usize, min: usize },
    #[error("degree-one count {ell} is below 2, the minimum for any tree with an edge")]
    EllTooSmall { ell: usize },
    #[error("cannot enumerate {n}-vertex trees: exceeds bound {bound}")]
    EnumerationBound { n: usize, bound: usize },
    #[error("cannot enumerate trees on zero vertices")]
    EmptyEnumeration,
}

/// A recursive tree stored as a parent array: entry `v - 1` is the parent
/// of vertex `v`, for `v` in `1..n`. The root `0` has no entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RecursiveTree {
    parent: Vec<u32>,
}

impl RecursiveTree {
    /// Validates `parent[v - 1] < v` for every non-root vertex `v`.
    pub fn new(parent: Vec<u32>) -> Result<Self, TreeError> {
        for (idx, &p) in parent.iter().enumerate() {
            let vertex = idx + 1;
            if p as usize >= vertex {
                return Err(TreeError::ParentNotSmaller { vertex, parent: p });
            }
        }
        Ok(RecursiveTree { parent })
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len() + 1
    }

    /// Parent of `v`, or `None` for the root.
    pub fn parent_of(&self, v: usize) -> Option<u32> {
        if v == 0 {
            None
        } else {
            Some(self.parent[v - 1])
        }
    }

    pub fn parent_array(&self) -> &[u32] {
        &self.parent
    }

    /// Children of each vertex, sorted increasingly.
    pub fn children_lists(&self) -> Vec<Vec<u32>> {
        let mut ch = vec![Vec::new(); self.vertex_count()];
        for (idx, &p) in self.parent.iter().enumerate() {
            ch[p as usize].push(idx as u32 + 1);
        }
        ch // children are pushed in increasing vertex order
    }

    /// Degree of `v`: child count, plus one for the parent edge off the root.
    pub fn degree(&self, v: usize) -> usize {
        let ch = self.children_lists();
        ch[v].len() + usize::from(v != 0)
    }
}

/// The two refined statistics of a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TreeStats {
    pub n: usize,
    /// Number of degree-one vertices.
    pub ell: usize,
    /// Endpoint of the smallest-child path from the root.
    pub path_end: u32,
}

/// Computes both statistics. Needs `n >= 2`: on a single vertex the
/// smallest-child path has no endpoint besides the root.
pub fn tree_stats(t: &RecursiveTree) -> Result<TreeStats, TreeError> {
    let n = t.vertex_count();
    if n < 2 {
        return Err(TreeError::TooSmall { n, min: 2 });
    }
    let ch = t.children_lists();
    let ell = (0..n)
        .filter(|&v| ch[v].len() + usize::from(v != 0) == 1)
        .count();
    let mut v = 0usize;
    while let Some(&smallest) = ch[v].first() {
        v = smallest as usize;
    }
    Ok(TreeStats {
        n,
        ell,
        path_end: v as u32,
    })
}

fn check_tree_enumeration(n: usize, bound: usize) -> Result<(), TreeError> {
    if n == 0 {
        return Err(TreeError::EmptyEnumeration);
    }
    if n > bound {
        return Err(TreeError::EnumerationBound { n, bound });
    }
    Ok(())
}

/// All recursive trees on `n` vertices, in odometer order of parent arrays.
#[derive(Debug)]
pub struct Trees {
    parent: Vec<u32>,
    started: bool,
    done: bool,
}

impl Iterator for Trees {
    type Item = RecursiveTree;

    fn next(&mut self) -> Option<RecursiveTree> {
        if self.done {
            return None;
        }
        if self.started {
            // advance the odometer: entry v-1 counts 0..v
            let mut idx = self.parent.len();
            loop {
                if idx == 0 {
                    self.done = true;
                    return None;
                }
                idx -= 1;
                if (self.parent[idx] as usize) < idx {
                    self.parent[idx] += 1;
                    for later in idx + 1..self.parent.len() {
                        self.parent[later] = 0;
                    }
                    break;
                }
            }
        }
        self.started = true;
        Some(RecursiveTree {
            parent: self.parent.clone(),
        })
    }
}

/// Enumerates all `(n-1)!` recursive trees on `n` vertices.
pub fn enumerate_trees(n: usize) -> Result<Trees, TreeError> {
    enumerate_trees_bounded(n, DEFAULT_TREE_BOUND)
}

pub fn enumerate_trees_bounded(n: usize, bound: usize) -> Result<Trees, TreeError> {
    check_tree_enumeration(n, bound)?;
    Ok(Trees {
        parent: vec![0; n - 1],
        started: false,
        done: false,
    })
}

/// Streams every tree through `f`, reusing one parent buffer.
pub fn for_each_tree<F: FnMut(&RecursiveTree)>(n: usize, mut f: F) -> Result<(), TreeError> {
    check_tree_enumeration(n, DEFAULT_TREE_BOUND)?;
    let mut t = RecursiveTree {
        parent: vec![0; n - 1],
    };
    loop {
        f(&t);
        let mut idx = t.parent.len();
        loop {
            if idx == 0 {
                return Ok(());
            }
            idx -= 1;
            if (t.parent[idx] as usize) < idx {
                t.parent[idx] += 1;
                for later in idx + 1..t.parent.len() {
                    t.parent[later] = 0;
                }
                break;
            }
        }
    }
}

/// Number of `n`-vertex trees with statistics exactly `(ell, x)`, by direct
/// enumeration. Needs `2 <= n <= bound`.
pub fn count_r(n: usize, ell: usize, x: u32) -> Result<BigUint, TreeError> {
    if n < 2 {
        return Err(TreeError::TooSmall { n, min: 2 });
    }
    let mut tally = 0u64;
    for_each_tree(n, |t| {
        let s = tree_stats(t).expect("n >= 2 was checked");
        if s.ell == ell && s.path_end == x {
            tally += 1;
        }
    })?;
    Ok(BigUint::from(tally))
}

/// The full table of refined counts for one `n`, built by the two-term
/// recurrence
///
/// ```text
/// R(n, ell, x) = sum_{i = max(x, 2)}^{n-2} R(n-1, ell-1, i)
///              + sum_{i = 1}^{max(x-1, 1)} R(n-1, ell, i)
/// ```
///
/// with base case `R(2, 2, 1) = 1` and zero outside `1 <= x <= n-1`.
#[derive(Debug, Clone)]
pub struct RTable {
    n: usize,
    /// `values[ell][x]` for `ell` in `0..=n`, `x` in `0..=n`.
    values: Vec<Vec<BigUint>>,
}

impl RTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `R(n, ell, x)`, zero outside the support.
    pub fn value(&self, ell: usize, x: u32) -> BigUint {
        let x = x as usize;
        if ell > self.n || x > self.n {
            return BigUint::zero();
        }
        self.values[ell][x].clone()
    }
}

/// Builds the recurrence table for `n >= 2` (no enumeration bound: the
/// table costs `O(n^2)` cells per layer).
pub fn r_recurrence_table(n: usize) -> Result<RTable, TreeError> {
    if n < 2 {
        return Err(TreeError::TooSmall { n, min: 2 });
    }
    let mut layer = vec![vec![BigUint::zero(); 3]; 3];
    layer[2][1] = BigUint::one(); // R(2, 2, 1) = 1
    let mut layer_n = 2usize;
    while layer_n < n {
        let next_n = layer_n + 1;
        let mut next = vec![vec![BigUint::zero(); next_n + 1]; next_n + 1];
        // prefix[ell][x] = sum_{i <= x} layer[ell][i]
        let mut prefix = vec![vec![BigUint::zero(); layer_n + 2]; layer_n + 1];
        for ell in 0..=layer_n {
            for x in 0..=layer_n {
                prefix[ell][x + 1] = &prefix[ell][x] + &layer[ell][x];
            }
        }
        let range_sum = |ell: usize, lo: usize, hi: usize| -> BigUint {
            // sum of layer[ell][lo..=hi], empty when lo > hi
            if ell > layer_n || lo > hi || lo > layer_n {
                return BigUint::zero();
            }
            let hi = hi.min(layer_n);
            &prefix[ell][hi + 1] - &prefix[ell][lo]
        };
        for (ell, row) in next.iter_mut().enumerate() {
            for (x, cell) in row.iter_mut().enumerate().take(next_n).skip(1) {
                let gained_leaf = if ell >= 1 {
                    range_sum(ell - 1, x.max(2), next_n - 2)
                } else {
                    BigUint::zero()
                };
                let kept_leaves = range_sum(ell, 1, (x.max(2)) - 1);
                *cell = gained_leaf + kept_leaves;
            }
        }
        layer = next;
        layer_n = next_n;
    }
    Ok(RTable {
        n,
        values: layer,
    })
}

/// Single refined count through the recurrence route.
pub fn count_r_recurrence(n: usize, ell: usize, x: u32) -> Result<BigUint, TreeError> {
    Ok(r_recurrence_table(n)?.value(ell, x))
}

/// Number of `n`-vertex trees with `ell` degree-one vertices: the marginal
/// of the refined table over the path endpoint.
pub fn count_t(n: usize, ell: usize) -> Result<BigUint, TreeError> {
    let table = r_recurrence_table(n)?;
    let mut sum = BigUint::zero();
    for x in 1..n as u32 {
        sum += table.value(ell, x);
    }
    Ok(sum)
}

/// The printed closed form for the leaf-count marginal,
/// `sum_{j=0}^{ell-2} (-1)^j (ell-1-j) C(n, j) (ell-j)^n`,
/// evaluated exactly as written. It disagrees with enumeration (see the
/// identity checks), so the result is reported as a signed integer and
/// never silently corrected.
pub fn t_closed_form(n: usize, ell: usize) -> Result<BigInt, TreeError> {
    if ell < 2 {
        return Err(TreeError::EllTooSmall { ell });
    }
    let mut sum = BigInt::zero();
    for j in 0..=(ell - 2) {
        let weight = BigInt::from(ell - 1 - j);
        let binom = BigInt::from(binomial(n as u64, j as i64));
        let power = BigInt::from(ell - j).pow(n as u32);
        let term = weight * binom * power;
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum)
}

/// Reads a tree as a word: depth-first from the root, visiting children
/// largest-first, emitting `vertex + 1` on entry.
///
/// The word always starts with `1`, always ends with `path_end + 1` (the
/// smallest child is visited last at every step), and the reading is
/// injective — the tree can be reconstructed from the word. Its descent
/// count is one less than the number of childless vertices, which matches
/// `ell - 1` exactly when the root has a single child; the refined class
/// `(ell, x)` is therefore carried at the level of counts (see the
/// identity checks) rather than letter-for-letter.
pub fn tree_to_permutation(t: &RecursiveTree) -> Result<Permutation, TreeError> {
    let n = t.vertex_count();
    if n < 2 {
        return Err(TreeError::TooSmall { n, min: 2 });
    }
    let ch = t.children_lists();
    let mut word = Vec::with_capacity(n);
    let mut stack = vec![0u32];
    while let Some(v) = stack.pop() {
        word.push(v + 1);
        // children are sorted increasingly; pushing in that order pops the
        // largest first
        stack.extend(ch[v as usize].iter().copied());
    }
    Ok(Permutation::new(word).expect("DFS emits each vertex label exactly once"))
}
