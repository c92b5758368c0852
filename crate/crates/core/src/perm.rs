//! Permutations of `[n] = {1, ..., n}` in one-line notation and their
//! distance-`r` statistics.
//!
//! Positions and values are both 1-indexed throughout. For a statistic
//! distance `r >= 1`, position `i` of a permutation `p` is
//!
//! * an `r`-descent        if `i < n` and `p(i) >= p(i+1) + r`,
//! * an `r`-ascent         if `i < n` and `p(i) + r <= p(i+1)`,
//! * an `r`-excedance      if `p(i) >= i + r`,
//! * an `r`-anti-excedance if `p(i) <= i - r`.
//!
//! `r = 1` gives the classical statistics; `r = 2` is often called the
//! "big" variant of each.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Default cap for exhaustive enumeration (`11! ≈ 4·10^7` words).
pub const DEFAULT_ENUMERATION_BOUND: usize = 11;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("permutation word must be non-empty")]
    Empty,
    #[error("value {value} appears twice in the word")]
    DuplicateValue { value: u32 },
    #[error("value {value} is outside 1..={n}")]
    ValueOutOfRange { value: u32, n: usize },
    #[error("position {position} is outside 1..={n}")]
    PositionOutOfRange { position: usize, n: usize },
    #[error("statistic distance r must be >= 1")]
    ZeroDistance,
    #[error("cannot enumerate length {n}: exceeds bound {bound}")]
    EnumerationBound { n: usize, bound: usize },
    #[error("cannot enumerate length 0")]
    EmptyEnumeration,
    #[error("cannot parse {text:?} as a permutation word")]
    Parse { text: String },
}

/// Which of the four distance-`r` statistics is being counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StatFamily {
    RDescent,
    RAscent,
    RExcedance,
    RAntiExcedance,
}

impl StatFamily {
    pub const ALL: [StatFamily; 4] = [
        StatFamily::RDescent,
        StatFamily::RAscent,
        StatFamily::RExcedance,
        StatFamily::RAntiExcedance,
    ];

    /// Short name used in CLI flags and table headers.
    pub fn name(self) -> &'static str {
        match self {
            StatFamily::RDescent => "descent",
            StatFamily::RAscent => "ascent",
            StatFamily::RExcedance => "excedance",
            StatFamily::RAntiExcedance => "anti-excedance",
        }
    }
}

impl fmt::Display for StatFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatFamily {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "descent" => Ok(StatFamily::RDescent),
            "ascent" => Ok(StatFamily::RAscent),
            "excedance" => Ok(StatFamily::RExcedance),
            "anti-excedance" | "anti_excedance" => Ok(StatFamily::RAntiExcedance),
            _ => Err(PermError::Parse { text: s.to_owned() }),
        }
    }
}

/// A statistic family together with its distance `r >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StatKind {
    family: StatFamily,
    r: u32,
}

impl StatKind {
    pub fn new(family: StatFamily, r: u32) -> Result<Self, PermError> {
        if r == 0 {
            return Err(PermError::ZeroDistance);
        }
        Ok(StatKind { family, r })
    }

    pub fn descent(r: u32) -> Result<Self, PermError> {
        StatKind::new(StatFamily::RDescent, r)
    }

    pub fn ascent(r: u32) -> Result<Self, PermError> {
        StatKind::new(StatFamily::RAscent, r)
    }

    pub fn excedance(r: u32) -> Result<Self, PermError> {
        StatKind::new(StatFamily::RExcedance, r)
    }

    pub fn anti_excedance(r: u32) -> Result<Self, PermError> {
        StatKind::new(StatFamily::RAntiExcedance, r)
    }

    pub fn family(self) -> StatFamily {
        self.family
    }

    pub fn r(self) -> u32 {
        self.r
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.r, self.family)
    }
}

/// A permutation of `[n]` stored in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    word: Vec<u32>,
}

impl Permutation {
    /// Validates that `values` is a rearrangement of `1..=n` with `n >= 1`.
    pub fn new(values: Vec<u32>) -> Result<Self, PermError> {
        let n = values.len();
        if n == 0 {
            return Err(PermError::Empty);
        }
        let mut seen = vec![false; n];
        for &v in &values {
            if v < 1 || v as usize > n {
                return Err(PermError::ValueOutOfRange { value: v, n });
            }
            if seen[v as usize - 1] {
                return Err(PermError::DuplicateValue { value: v });
            }
            seen[v as usize - 1] = true;
        }
        Ok(Permutation { word: values })
    }

    pub fn identity(n: usize) -> Result<Self, PermError> {
        Permutation::new((1..=n as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the word of a valid permutation is never empty
    }

    /// Image of position `i` (1-indexed): `p(i)`.
    ///
    /// Panics if `i` is outside `1..=n`; use [`Permutation::get`] for a
    /// checked variant.
    pub fn at(&self, i: usize) -> u32 {
        self.word[i - 1]
    }

    pub fn get(&self, i: usize) -> Result<u32, PermError> {
        if i < 1 || i > self.len() {
            return Err(PermError::PositionOutOfRange {
                position: i,
                n: self.len(),
            });
        }
        Ok(self.word[i - 1])
    }

    /// The one-line word as a slice (`word()[i]` is `p(i+1)`).
    pub fn word(&self) -> &[u32] {
        &self.word
    }

    pub fn last(&self) -> u32 {
        *self.word.last().expect("permutation word is non-empty")
    }

    /// The inverse permutation: `inverse().at(v) = i` iff `at(i) = v`.
    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.len()];
        for (i, &v) in self.word.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Permutation { word: inv }
    }

    /// Cyclic rotation of the word that puts value `v` at the last position.
    ///
    /// The relative cyclic order of the word is preserved.
    pub fn rotate_to_end(&self, v: u32) -> Result<Permutation, PermError> {
        let n = self.len();
        if v < 1 || v as usize > n {
            return Err(PermError::ValueOutOfRange { value: v, n });
        }
        let pos = self
            .word
            .iter()
            .position(|&w| w == v)
            .expect("every value 1..=n occurs in a permutation");
        let mut word = Vec::with_capacity(n);
        word.extend_from_slice(&self.word[pos + 1..]);
        word.extend_from_slice(&self.word[..=pos]);
        Ok(Permutation { word })
    }

    /// Whether position `i` realizes the statistic `s`.
    ///
    /// Positions outside `1..=n` never do; descent/ascent additionally
    /// require `i < n` because they compare adjacent letters.
    pub fn is_stat_position(&self, i: usize, s: StatKind) -> bool {
        let n = self.len();
        if i < 1 || i > n {
            return false;
        }
        let r = u64::from(s.r);
        match s.family {
            StatFamily::RDescent => {
                i < n && u64::from(self.word[i - 1]) >= u64::from(self.word[i]) + r
            }
            StatFamily::RAscent => {
                i < n && u64::from(self.word[i - 1]) + r <= u64::from(self.word[i])
            }
            StatFamily::RExcedance => u64::from(self.word[i - 1]) >= i as u64 + r,
            StatFamily::RAntiExcedance => u64::from(self.word[i - 1]) + r <= i as u64,
        }
    }

    /// Number of positions realizing the statistic `s`.
    pub fn count_stat(&self, s: StatKind) -> usize {
        (1..=self.len())
            .filter(|&i| self.is_stat_position(i, s))
            .count()
    }

    /// Sorted list of positions realizing the statistic `s`.
    pub fn positions_stat(&self, s: StatKind) -> Vec<usize> {
        (1..=self.len())
            .filter(|&i| self.is_stat_position(i, s))
            .collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.word {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Parses comma- or whitespace-separated values, e.g. `"5,1,2,8,3,6,4,7"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values: Result<Vec<u32>, _> = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>())
            .collect();
        match values {
            Ok(v) if !v.is_empty() => Permutation::new(v),
            _ => Err(PermError::Parse { text: s.to_owned() }),
        }
    }
}

/// Advances `word` to its lexicographic successor in place.
/// Returns `false` when `word` was already the maximal arrangement.
fn next_lex(word: &mut [u32]) -> bool {
    let n = word.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && word[i - 1] >= word[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while word[j] <= word[i - 1] {
        j -= 1;
    }
    word.swap(i - 1, j);
    word[i..].reverse();
    true
}

/// Lexicographic stream over all permutations of `[n]`.
#[derive(Debug)]
pub struct Permutations {
    word: Vec<u32>,
    done: bool,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let out = Permutation {
            word: self.word.clone(),
        };
        self.done = !next_lex(&mut self.word);
        Some(out)
    }
}

fn check_enumeration(n: usize, bound: usize) -> Result<(), PermError> {
    if n == 0 {
        return Err(PermError::EmptyEnumeration);
    }
    if n > bound {
        return Err(PermError::EnumerationBound { n, bound });
    }
    Ok(())
}

/// All permutations of `[n]` in lexicographic order.
///
/// Refuses `n` beyond [`DEFAULT_ENUMERATION_BOUND`]; use
/// [`permutations_bounded`] to raise the cap deliberately.
pub fn permutations(n: usize) -> Result<Permutations, PermError> {
    permutations_bounded(n, DEFAULT_ENUMERATION_BOUND)
}

pub fn permutations_bounded(n: usize, bound: usize) -> Result<Permutations, PermError> {
    check_enumeration(n, bound)?;
    Ok(Permutations {
        word: (1..=n as u32).collect(),
        done: false,
    })
}

/// Streams every permutation of `[n]` with `p(1) = first` in lexicographic
/// order through `f`, reusing a single buffer.
///
/// Splitting by the first letter partitions the full lexicographic stream
/// into `n` disjoint blocks, which is how counting folds parallelize.
pub fn for_each_with_first<F: FnMut(&Permutation)>(
    n: usize,
    first: u32,
    mut f: F,
) -> Result<(), PermError> {
    check_enumeration(n, DEFAULT_ENUMERATION_BOUND)?;
    if first < 1 || first as usize > n {
        return Err(PermError::ValueOutOfRange { value: first, n });
    }
    let mut word = Vec::with_capacity(n);
    word.push(first);
    word.extend((1..=n as u32).filter(|&v| v != first));
    let mut p = Permutation { word };
    loop {
        f(&p);
        // advance only the tail so p(1) stays fixed
        if !next_lex(&mut p.word[1..]) {
            return Ok(());
        }
    }
}

/// Streams every permutation of `[n]` in lexicographic order through `f`,
/// reusing a single buffer.
pub fn for_each_permutation<F: FnMut(&Permutation)>(n: usize, mut f: F) -> Result<(), PermError> {
    check_enumeration(n, DEFAULT_ENUMERATION_BOUND)?;
    let mut p = Permutation {
        word: (1..=n as u32).collect(),
    };
    loop {
        f(&p);
        if !next_lex(&mut p.word) {
            return Ok(());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(values: &[u32]) -> Permutation {
        Permutation::new(values.to_vec()).unwrap()
    }

    #[test]
    fn constructor_accepts_valid_words() {
        assert_eq!(p(&[5, 1, 2, 8, 3, 6, 4, 7]).len(), 8);
        assert_eq!(p(&[1]).len(), 1);
    }

    #[test]
    fn constructor_rejects_bad_words() {
        assert_eq!(Permutation::new(vec![]), Err(PermError::Empty));
        assert_eq!(
            Permutation::new(vec![1, 1]),
            Err(PermError::DuplicateValue { value: 1 })
        );
        assert_eq!(
            Permutation::new(vec![1, 3]),
            Err(PermError::ValueOutOfRange { value: 3, n: 2 })
        );
        assert_eq!(
            Permutation::new(vec![0, 1]),
            Err(PermError::ValueOutOfRange { value: 0, n: 2 })
        );
    }

    #[test]
    fn inverse_worked_example() {
        assert_eq!(
            p(&[6, 2, 1, 4, 5, 7, 3]).inverse(),
            p(&[3, 2, 7, 4, 5, 1, 6])
        );
    }

    #[test]
    fn inverse_is_involutive_exhaustively() {
        for n in 1..=6 {
            for q in permutations(n).unwrap() {
                assert_eq!(q.inverse().inverse(), q);
                // p(i) = v iff p^{-1}(v) = i
                let inv = q.inverse();
                for i in 1..=n {
                    assert_eq!(inv.at(q.at(i) as usize) as usize, i);
                }
            }
        }
    }

    #[test]
    fn classical_descents_of_transformed_word() {
        let q = p(&[2, 4, 5, 7, 6, 1, 3]);
        let des = StatKind::descent(1).unwrap();
        assert_eq!(q.count_stat(des), 2);
        assert_eq!(q.positions_stat(des), vec![4, 5]);
    }

    #[test]
    fn excedance_positions_worked_example() {
        let q = p(&[6, 2, 1, 4, 5, 7, 3]);
        let exc = StatKind::excedance(1).unwrap();
        assert_eq!(q.positions_stat(exc), vec![1, 6]);
        let exc2 = StatKind::excedance(2).unwrap();
        assert_eq!(q.positions_stat(exc2), vec![1]);
    }

    #[test]
    fn big_descents_small_example() {
        let q = p(&[3, 1, 2]);
        assert_eq!(q.count_stat(StatKind::descent(2).unwrap()), 1);
        assert_eq!(q.count_stat(StatKind::descent(1).unwrap()), 1);
        assert_eq!(q.count_stat(StatKind::ascent(1).unwrap()), 1);
    }

    #[test]
    fn identity_has_no_descents_or_excedances() {
        let id = Permutation::identity(7).unwrap();
        for r in 1..=3 {
            assert_eq!(id.count_stat(StatKind::descent(r).unwrap()), 0);
            assert_eq!(id.count_stat(StatKind::excedance(r).unwrap()), 0);
            assert_eq!(id.count_stat(StatKind::anti_excedance(r).unwrap()), 0);
        }
        assert_eq!(id.count_stat(StatKind::ascent(1).unwrap()), 6);
    }

    #[test]
    fn zero_distance_is_rejected() {
        assert_eq!(
            StatKind::new(StatFamily::RDescent, 0),
            Err(PermError::ZeroDistance)
        );
    }

    #[test]
    fn adjacent_pairs_split_into_descents_ascents_and_near_ties() {
        // |p(i) - p(i+1)| >= 1 always, so for r = 1 the first two classes
        // partition all adjacent pairs; for larger r the remainder is the
        // pairs closer than r.
        for n in 1..=6 {
            for q in permutations(n).unwrap() {
                for r in 1..=4u32 {
                    let des = q.count_stat(StatKind::descent(r).unwrap());
                    let asc = q.count_stat(StatKind::ascent(r).unwrap());
                    let near = (1..n)
                        .filter(|&i| {
                            let a = i64::from(q.at(i));
                            let b = i64::from(q.at(i + 1));
                            (a - b).abs() < i64::from(r)
                        })
                        .count();
                    assert_eq!(des + asc + near, n - 1);
                    if r == 1 {
                        assert_eq!(des + asc, n - 1);
                    }
                }
            }
        }
    }

    #[test]
    fn counts_shrink_as_distance_grows() {
        for n in 1..=6 {
            for q in permutations(n).unwrap() {
                for fam in StatFamily::ALL {
                    let mut prev = usize::MAX;
                    for r in 1..=(n as u32 + 1) {
                        let c = q.count_stat(StatKind::new(fam, r).unwrap());
                        assert!(c <= prev);
                        prev = c;
                    }
                }
            }
        }
    }

    #[test]
    fn excedance_positions_of_inverse_are_anti_excedance_values() {
        // i is an r-excedance position of p iff p(i) is an r-anti-excedance
        // position of p^{-1}.
        for n in 1..=6 {
            for q in permutations(n).unwrap() {
                let inv = q.inverse();
                for r in 1..=3u32 {
                    let exc = StatKind::excedance(r).unwrap();
                    let anti = StatKind::anti_excedance(r).unwrap();
                    let mapped: Vec<usize> = {
                        let mut v: Vec<usize> = q
                            .positions_stat(exc)
                            .into_iter()
                            .map(|i| q.at(i) as usize)
                            .collect();
                        v.sort_unstable();
                        v
                    };
                    assert_eq!(mapped, inv.positions_stat(anti));
                }
            }
        }
    }

    #[test]
    fn rotation_moves_value_to_last_position() {
        let q = p(&[2, 4, 1, 3]);
        assert_eq!(q.rotate_to_end(4).unwrap(), p(&[1, 3, 2, 4]));
        assert_eq!(q.rotate_to_end(3).unwrap(), q);
        assert_eq!(q.rotate_to_end(2).unwrap(), p(&[4, 1, 3, 2]));
        assert_eq!(
            q.rotate_to_end(9),
            Err(PermError::ValueOutOfRange { value: 9, n: 4 })
        );
        for n in 1..=5 {
            for q in permutations(n).unwrap() {
                assert_eq!(q.rotate_to_end(q.last()).unwrap(), q);
                for v in 1..=n as u32 {
                    assert_eq!(q.rotate_to_end(v).unwrap().last(), v);
                }
            }
        }
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let all: Vec<Permutation> = permutations(3).unwrap().collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], p(&[1, 2, 3]));
        assert_eq!(all[1], p(&[1, 3, 2]));
        assert_eq!(all[5], p(&[3, 2, 1]));
        for w in all.windows(2) {
            assert!(w[0].word() < w[1].word());
        }

        let mut count = 0usize;
        for_each_permutation(7, |_| count += 1).unwrap();
        assert_eq!(count, 5040);
    }

    #[test]
    fn enumeration_bound_is_enforced() {
        assert!(matches!(
            permutations(12),
            Err(PermError::EnumerationBound { n: 12, bound: 11 })
        ));
        assert!(permutations_bounded(12, 12).is_ok());
        assert!(matches!(permutations(0), Err(PermError::EmptyEnumeration)));
    }

    #[test]
    fn first_letter_blocks_partition_the_stream() {
        let n = 5;
        let mut combined: Vec<Permutation> = Vec::new();
        for first in 1..=n as u32 {
            let mut block = Vec::new();
            for_each_with_first(n, first, |q| block.push(q.clone())).unwrap();
            assert_eq!(block.len(), 24);
            assert!(block.iter().all(|q| q.at(1) == first));
            combined.extend(block);
        }
        let whole: Vec<Permutation> = permutations(n).unwrap().collect();
        assert_eq!(combined, whole);
    }

    #[test]
    fn parse_and_display_roundtrip() {
        let q: Permutation = "5,1,2,8,3,6,4,7".parse().unwrap();
        assert_eq!(q, p(&[5, 1, 2, 8, 3, 6, 4, 7]));
        assert_eq!(q.to_string().parse::<Permutation>().unwrap(), q);
        let spaced: Permutation = "3 1 2".parse().unwrap();
        assert_eq!(spaced, p(&[3, 1, 2]));
        assert!("".parse::<Permutation>().is_err());
        assert!("1,2,x".parse::<Permutation>().is_err());
    }
}
