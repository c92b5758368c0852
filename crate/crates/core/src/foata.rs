//! The fundamental transform between descent structure and cycle structure.
//!
//! Cutting a word immediately before each left-to-right maximum splits it
//! into blocks, each led by its own maximum. Closing every block into a
//! cycle (each letter maps to the next one in its block, the last letter
//! maps back to the block's head) yields a new permutation. The inverse
//! direction writes a permutation in cycle form, rotates each cycle so its
//! maximum comes first, sorts the cycles by increasing maximum, and drops
//! the parentheses.
//!
//! The transform carries the `r`-descent count of the input to the
//! `r`-anti-excedance count of the output, which is what makes descent
//! statistics and excedance statistics interchangeable in counting
//! arguments.

use crate::perm::Permutation;

/// The left-to-right-maximum blocks of a word.
///
/// Concatenating the blocks in order restores the word; every block starts
/// with its own maximum, and those leading maxima increase left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    blocks: Vec<Vec<u32>>,
}

impl BlockDecomposition {
    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// The word the blocks came from.
    pub fn concatenation(&self) -> Vec<u32> {
        self.blocks.iter().flatten().copied().collect()
    }
}

/// Splits the word of `p` immediately before each left-to-right maximum.
pub fn record_blocks(p: &Permutation) -> BlockDecomposition {
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    let mut max_so_far = 0u32;
    for &v in p.word() {
        if v > max_so_far {
            blocks.push(vec![v]);
            max_so_far = v;
        } else {
            blocks
                .last_mut()
                .expect("first letter is always a left-to-right maximum")
                .push(v);
        }
    }
    BlockDecomposition { blocks }
}

/// Word-to-cycles direction: each block `[a1, ..., aj]` becomes the cycle
/// `a1 -> a2 -> ... -> aj -> a1` of the result.
pub fn foata_transform(p: &Permutation) -> Permutation {
    let n = p.len();
    let mut image = vec![0u32; n];
    for block in record_blocks(p).blocks() {
        for (i, &a) in block.iter().enumerate() {
            let next = block[(i + 1) % block.len()];
            image[a as usize - 1] = next;
        }
    }
    Permutation::new(image).expect("closing disjoint cycles over 1..=n yields a permutation")
}

/// Cycles-to-word direction: write `p` in cycle form, rotate each cycle so
/// its maximum leads, sort cycles by increasing maximum, concatenate.
pub fn foata_inverse(p: &Permutation) -> Permutation {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut cycles: Vec<Vec<u32>> = Vec::new();
    for start in 1..=n as u32 {
        if seen[start as usize - 1] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        while !seen[v as usize - 1] {
            seen[v as usize - 1] = true;
            cycle.push(v);
            v = p.at(v as usize);
        }
        let max_pos = cycle
            .iter()
            .position(|&w| w == *cycle.iter().max().expect("cycle is non-empty"))
            .expect("max occurs in its own cycle");
        cycle.rotate_left(max_pos);
        cycles.push(cycle);
    }
    cycles.sort_by_key(|c| c[0]); // each cycle now leads with its maximum
    let word: Vec<u32> = cycles.into_iter().flatten().collect();
    Permutation::new(word).expect("cycle letters cover 1..=n exactly once")
}
