//! Structure-preserving maps between permutation classes.
//!
//! Each map here witnesses an equality of refined counts: it sends one
//! class of permutations onto another while carrying a distance-`r`
//! statistic along. All preconditions are validated eagerly and reported
//! through [`BijectionError`] so that callers can rely on the documented
//! transfer facts whenever a call succeeds.

use std::fmt;

use thiserror::Error;

use crate::foata::{foata_inverse, foata_transform};
use crate::perm::Permutation;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BijectionError {
    #[error("distance r must be >= 1")]
    ZeroDistance,
    #[error("last letter {last} must be at most r = {r}")]
    LastExceedsDistance { last: u32, r: u32 },
    #[error("target letter {k2} must be at most r = {r}")]
    TargetExceedsDistance { k2: u32, r: u32 },
    #[error("target letter {k2} is outside 1..={n}")]
    TargetOutOfRange { k2: u32, n: usize },
    #[error("word must end with 1, found {last}")]
    LastNotOne { last: u32 },
    #[error("position {position} is outside 1..={n}")]
    PositionOutOfRange { position: usize, n: usize },
    #[error("expected the maximum {n} at position {position}, found {found}")]
    MaxNotAtPosition { position: usize, found: u32, n: usize },
    #[error("word of length {n} is too short for this map (need n >= {min})")]
    TooShort { n: usize, min: usize },
}

/// Sends a permutation with `m` `r`-excedances and last letter `k` to one
/// with `m` `r`-descents and the same last letter `k`, for every `r >= 1`
/// simultaneously.
///
/// The map writes the inverse of `p` in rotated-cycle word form: inversion
/// exchanges `r`-excedance positions for `r`-anti-excedances, and reading
/// cycles as blocks exchanges those for `r`-descents.
pub fn exc_to_desc(p: &Permutation) -> Permutation {
    foata_inverse(&p.inverse())
}

/// Inverse of [`exc_to_desc`]: carries `r`-descent counts back to
/// `r`-excedance counts, again preserving the last letter.
pub fn desc_to_exc(p: &Permutation) -> Permutation {
    foata_transform(p).inverse()
}

/// Cyclically rotates a word ending in a small letter (`p(n) <= r`) so that
/// another small letter `k2 <= r` ends it instead.
///
/// Within the classes of words ending in letters `<= r`, rotation preserves
/// the `r`-descent count: letters that small can never sit on top of an
/// `r`-descent, so moving the cyclic cut between them breaks no descent.
pub fn rotate_small_last(p: &Permutation, r: u32, k2: u32) -> Result<Permutation, BijectionError> {
    if r == 0 {
        return Err(BijectionError::ZeroDistance);
    }
    let last = p.last();
    if last > r {
        return Err(BijectionError::LastExceedsDistance { last, r });
    }
    if k2 < 1 || k2 as usize > p.len() {
        return Err(BijectionError::TargetOutOfRange { k2, n: p.len() });
    }
    if k2 > r {
        return Err(BijectionError::TargetExceedsDistance { k2, r });
    }
    Ok(p.rotate_to_end(k2)
        .expect("k2 was range-checked against 1..=n"))
}

/// Relabels a word ending in `1` so it ends in `n` instead: every letter
/// drops by one and the final `1` becomes `n`.
///
/// For every `r >= 1`, the `(r+1)`-excedance count of the input equals the
/// `r`-excedance count of the output: away from the last position the
/// relabeling shifts both sides of `p(i) >= i + r + 1` by exactly one, and
/// the last position carries no excedance on either side.
pub fn shift_to_n(p: &Permutation) -> Result<Permutation, BijectionError> {
    let last = p.last();
    if last != 1 {
        return Err(BijectionError::LastNotOne { last });
    }
    Ok(relabel_one_to_n(p))
}

/// Deletes the maximal letter `n` from position `i` (validated), leaving a
/// permutation of `[n-1]` on the remaining letters.
///
/// When `i > n - r` the letter `n` is not an `r`-excedance and every other
/// position keeps its `r`-excedance status: positions before `i` are
/// untouched, and positions after `i` slide left only in the range where
/// `j + r` already exceeds `n`, so no new excedance can appear. In that
/// regime the map preserves the `r`-excedance count, and it preserves the
/// last letter whenever `i < n`.
pub fn remove_max_at(p: &Permutation, i: usize) -> Result<Permutation, BijectionError> {
    let n = p.len();
    if n < 2 {
        return Err(BijectionError::TooShort { n, min: 2 });
    }
    if i < 1 || i > n {
        return Err(BijectionError::PositionOutOfRange { position: i, n });
    }
    let found = p.at(i);
    if found as usize != n {
        return Err(BijectionError::MaxNotAtPosition {
            position: i,
            found,
            n,
        });
    }
    let word: Vec<u32> = p.word().iter().copied().filter(|&v| v as usize != n).collect();
    Ok(Permutation::new(word).expect("removing n from a permutation of [n] leaves one of [n-1]"))
}

/// Total relabeling `1 -> n, v -> v - 1 (v > 1)` applied letterwise.
///
/// At every position except `i = p^{-1}(1)`, the `(r+1)`-excedance test for
/// the input and the `r`-excedance test for the output agree. At `i` itself
/// the input never has an excedance, while the output has an `r`-excedance
/// exactly when `i <= n - r`.
pub fn relabel_one_to_n(p: &Permutation) -> Permutation {
    let n = p.len() as u32;
    let word: Vec<u32> = p
        .word()
        .iter()
        .map(|&v| if v == 1 { n } else { v - 1 })
        .collect();
    Permutation::new(word).expect("cyclic relabeling of values keeps a permutation")
}

/// Names for the maps in this module, as used in reports and documentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapName {
    ExcToDesc,
    DescToExc,
    RotateSmallLast,
    ShiftToN,
    RemoveMaxAt,
    RelabelOneToN,
}

/// A catalog entry describing one map's domain and what it transfers.
#[derive(Debug, Clone, Copy)]
pub struct MapDescriptor {
    pub name: MapName,
    /// Stable textual identifier.
    pub id: &'static str,
    pub domain: &'static str,
    pub codomain: &'static str,
    pub transfers: &'static str,
}

impl fmt::Display for MapDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} -> {} ({})",
            self.id, self.domain, self.codomain, self.transfers
        )
    }
}

/// The catalog of all maps provided by this module.
pub fn descriptors() -> &'static [MapDescriptor] {
    &[
        MapDescriptor {
            name: MapName::ExcToDesc,
            id: "exc_to_desc",
            domain: "all words of [n]",
            codomain: "all words of [n]",
            transfers: "m r-excedances, last k -> m r-descents, last k, every r",
        },
        MapDescriptor {
            name: MapName::DescToExc,
            id: "desc_to_exc",
            domain: "all words of [n]",
            codomain: "all words of [n]",
            transfers: "m r-descents, last k -> m r-excedances, last k, every r",
        },
        MapDescriptor {
            name: MapName::RotateSmallLast,
            id: "rotate_small_last",
            domain: "words ending in a letter <= r",
            codomain: "words ending in the chosen letter k2 <= r",
            transfers: "r-descent count preserved",
        },
        MapDescriptor {
            name: MapName::ShiftToN,
            id: "shift_to_n",
            domain: "words ending in 1",
            codomain: "words ending in n",
            transfers: "(r+1)-excedance count -> r-excedance count, every r",
        },
        MapDescriptor {
            name: MapName::RemoveMaxAt,
            id: "remove_max_at",
            domain: "words of [n] with n at position i",
            codomain: "words of [n-1]",
            transfers: "r-excedance count preserved when i > n - r",
        },
        MapDescriptor {
            name: MapName::RelabelOneToN,
            id: "relabel_one_to_n",
            domain: "all words of [n]",
            codomain: "all words of [n]",
            transfers: "(r+1)-excedances -> r-excedances away from the letter 1",
        },
    ]
}
