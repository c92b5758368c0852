//! Exact counting tables for permutation statistics.
//!
//! The classical numbers `A(n, m)` count permutations of `[n]` with `m`
//! descents. They are available through three independent routes — the
//! two-term recurrence, the alternating closed form, and direct
//! enumeration — precisely so the routes can be played against each other.
//! The refined counts `A_r(n, m, k)` additionally fix the last letter `k`
//! and use distance-`r` statistics; small instances come from enumeration
//! and large ones ride on the recursive-tree recurrence.
//!
//! All table values are arbitrary-precision; enumeration tallies are
//! word-sized because enumeration is capped well below `u64` overflow.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{for_each_with_first, PermError, StatFamily, StatKind};
use crate::trees::{r_recurrence_table, TreeError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CountError {
    #[error("descent count {m} is outside 0..={max} for n = {n}")]
    MOutOfRange { n: u64, m: u64, max: u64 },
    #[error("last letter {k} is outside 1..={n}")]
    KOutOfRange { n: u64, k: u64 },
    #[error("n must be >= 1")]
    ZeroN,
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// `C(a, b)`, with the usual convention that out-of-range `b` gives zero.
pub fn binomial(a: u64, b: i64) -> BigUint {
    if b < 0 || b as u64 > a {
        return BigUint::zero();
    }
    let b = (b as u64).min(a - b as u64);
    let mut result = BigUint::one();
    for i in 1..=b {
        result = result * BigUint::from(a - b + i) / BigUint::from(i);
    }
    result
}

/// `n!` as an exact integer.
pub fn factorial(n: u64) -> BigUint {
    let mut result = BigUint::one();
    for i in 2..=n {
        result *= BigUint::from(i);
    }
    result
}

/// How a table's values were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Enumeration,
    Recurrence,
    ClosedForm,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Enumeration => "enumeration",
            Method::Recurrence => "recurrence",
            Method::ClosedForm => "closed_form",
        })
    }
}

/// What a table's indices mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableKind {
    /// Entries `(n, m)`: permutations of `[n]` with `m` descents.
    Eulerian,
    /// Entries `(n, r, m, k)`: permutations of `[n]` whose distance-`r`
    /// statistic of this family equals `m` and whose last letter is `k`.
    Stat(StatFamily),
}

impl TableKind {
    pub fn id(self) -> String {
        match self {
            TableKind::Eulerian => "eulerian".to_owned(),
            TableKind::Stat(family) => family.name().to_owned(),
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for TableKind {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "eulerian" {
            return Ok(TableKind::Eulerian);
        }
        s.parse::<StatFamily>().map(TableKind::Stat)
    }
}

/// Index of one table entry. `r` and `k` are present only for refined
/// statistic tables. Ordering is lexicographic on `(n, r, m, k)`, which is
/// also the row-major reading order of every export.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CountKey {
    pub n: u32,
    pub r: Option<u32>,
    pub m: u32,
    pub k: Option<u32>,
}

impl CountKey {
    pub fn plain(n: u32, m: u32) -> Self {
        CountKey {
            n,
            r: None,
            m,
            k: None,
        }
    }

    pub fn refined(n: u32, r: u32, m: u32, k: u32) -> Self {
        CountKey {
            n,
            r: Some(r),
            m,
            k: Some(k),
        }
    }
}

/// A sparse exact-count table. Absent keys mean zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "TableRepr", try_from = "TableRepr")]
pub struct CountTable {
    kind: TableKind,
    method: Method,
    entries: BTreeMap<CountKey, BigUint>,
}

impl CountTable {
    pub fn new(kind: TableKind, method: Method) -> Self {
        CountTable {
            kind,
            method,
            entries: BTreeMap::new(),
        }
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Stores a value; zero values are kept implicit.
    pub fn set(&mut self, key: CountKey, value: BigUint) {
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
    }

    pub fn add(&mut self, key: CountKey, value: BigUint) {
        if !value.is_zero() {
            *self.entries.entry(key).or_insert_with(BigUint::zero) += value;
        }
    }

    /// Value at `key`, zero when absent.
    pub fn get(&self, key: &CountKey) -> BigUint {
        self.entries.get(key).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in `(n, r, m, k)` order — the canonical reading order.
    pub fn iter(&self) -> impl Iterator<Item = (&CountKey, &BigUint)> {
        self.entries.iter()
    }

    /// Largest `n` present, if any.
    pub fn max_n(&self) -> Option<u32> {
        self.entries.keys().map(|k| k.n).max()
    }

    /// Sum of all stored values.
    pub fn total(&self) -> BigUint {
        let mut sum = BigUint::zero();
        for v in self.entries.values() {
            sum += v;
        }
        sum
    }
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    n: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    r: Option<u32>,
    m: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    k: Option<u32>,
    /// Decimal string so arbitrary precision survives JSON.
    value: String,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    kind: String,
    method: Method,
    entries: Vec<EntryRepr>,
}

impl From<CountTable> for TableRepr {
    fn from(t: CountTable) -> TableRepr {
        TableRepr {
            kind: t.kind.id(),
            method: t.method,
            entries: t
                .entries
                .iter()
                .map(|(key, value)| EntryRepr {
                    n: key.n,
                    r: key.r,
                    m: key.m,
                    k: key.k,
                    value: value.to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<TableRepr> for CountTable {
    type Error = String;

    fn try_from(repr: TableRepr) -> Result<CountTable, String> {
        let kind: TableKind = repr
            .kind
            .parse()
            .map_err(|_| format!("unknown table kind {:?}", repr.kind))?;
        let mut table = CountTable::new(kind, repr.method);
        for e in repr.entries {
            let value = BigUint::from_str(&e.value)
                .map_err(|_| format!("entry value {:?} is not a decimal integer", e.value))?;
            table.add(
                CountKey {
                    n: e.n,
                    r: e.r,
                    m: e.m,
                    k: e.k,
                },
                value,
            );
        }
        Ok(table)
    }
}

/// Classical triangle rows `1..=n_max` by the two-term recurrence
/// `A(n, m) = (n - m) A(n-1, m-1) + (m + 1) A(n-1, m)`.
pub fn eulerian_recurrence(n_max: u32) -> Result<CountTable, CountError> {
    if n_max == 0 {
        return Err(CountError::ZeroN);
    }
    let mut table = CountTable::new(TableKind::Eulerian, Method::Recurrence);
    let mut row: Vec<BigUint> = vec![BigUint::one()]; // A(1, 0) = 1
    table.set(CountKey::plain(1, 0), BigUint::one());
    for n in 2..=n_max {
        let mut next = vec![BigUint::zero(); n as usize];
        for m in 0..n {
            let from_left = if m >= 1 {
                BigUint::from(n - m) * &row[m as usize - 1]
            } else {
                BigUint::zero()
            };
            let from_same = if (m as usize) < row.len() {
                BigUint::from(m + 1) * &row[m as usize]
            } else {
                BigUint::zero()
            };
            next[m as usize] = from_left + from_same;
        }
        for (m, v) in next.iter().enumerate() {
            table.set(CountKey::plain(n, m as u32), v.clone());
        }
        row = next;
    }
    Ok(table)
}

/// The alternating closed form
/// `A(n, m) = sum_{j=0}^{m+1} (-1)^j C(n+1, j) (m+1-j)^n`.
pub fn eulerian_closed_form(n: u32, m: u32) -> Result<BigUint, CountError> {
    if n == 0 {
        return Err(CountError::ZeroN);
    }
    if m >= n {
        return Err(CountError::MOutOfRange {
            n: n.into(),
            m: m.into(),
            max: (n - 1).into(),
        });
    }
    let mut sum = BigInt::zero();
    for j in 0..=(m + 1) {
        let term = BigInt::from(binomial(u64::from(n) + 1, i64::from(j)))
            * BigInt::from(m + 1 - j).pow(n);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum
        .to_biguint()
        .expect("the alternating sum telescopes to a count, which is nonnegative"))
}

/// Joint distribution of (statistic count, last letter) over all
/// permutations of `[n]`, by exhaustive enumeration.
///
/// The stream is split by the first letter and tallied in parallel; the
/// merge is a plain sum, so the result is deterministic.
pub fn count_by_enumeration(n: usize, stat: StatKind) -> Result<CountTable, CountError> {
    if n == 0 {
        return Err(CountError::ZeroN);
    }
    let partials: Result<Vec<BTreeMap<(u32, u32), u64>>, PermError> = (1..=n as u32)
        .into_par_iter()
        .map(|first| {
            let mut tally: BTreeMap<(u32, u32), u64> = BTreeMap::new();
            for_each_with_first(n, first, |p| {
                let key = (p.count_stat(stat) as u32, p.last());
                *tally.entry(key).or_default() += 1;
            })?;
            Ok(tally)
        })
        .collect();
    let mut table = CountTable::new(TableKind::Stat(stat.family()), Method::Enumeration);
    for tally in partials? {
        for ((m, k), count) in tally {
            table.add(
                CountKey::refined(n as u32, stat.r(), m, k),
                BigUint::from(count),
            );
        }
    }
    Ok(table)
}

/// Joint distributions for every size `1..=n`, merged into one table.
pub fn count_by_enumeration_upto(n: usize, stat: StatKind) -> Result<CountTable, CountError> {
    let mut merged = CountTable::new(TableKind::Stat(stat.family()), Method::Enumeration);
    for size in 1..=n {
        let single = count_by_enumeration(size, stat)?;
        for (key, value) in single.iter() {
            merged.set(*key, value.clone());
        }
    }
    Ok(merged)
}

/// Refined descent count `A(n, m, k)` — permutations of `[n]` with `m`
/// descents ending in `k` — through the recurrence route.
///
/// For `k < n` this is the refined tree count `R(n+1, m+1, k+1)`. Words
/// ending in the maximal letter fall outside that table's support: dropping
/// the final `n` is a bijection onto all of `[n-1]`'s words that preserves
/// the descent count, so `A(n, m, n) = A(n-1, m)`.
pub fn a_nmk_recurrence(n: u64, m: u64, k: u64) -> Result<BigUint, CountError> {
    if n == 0 {
        return Err(CountError::ZeroN);
    }
    if k < 1 || k > n {
        return Err(CountError::KOutOfRange { n, k });
    }
    if m >= n {
        return Ok(BigUint::zero()); // no word has that many descents
    }
    if k == n {
        if n == 1 {
            return Ok(BigUint::one()); // the single word of [1]
        }
        return if m <= n - 2 {
            eulerian_closed_form((n - 1) as u32, m as u32)
        } else {
            Ok(BigUint::zero())
        };
    }
    let table = r_recurrence_table((n + 1) as usize)?;
    Ok(table.value((m + 1) as usize, (k + 1) as u32))
}

/// The full `(m, k)` table of refined descent counts for one `n`, built
/// from the recurrence route (one tree-table construction for all cells).
pub fn a_nmk_table(n: u32) -> Result<CountTable, CountError> {
    if n == 0 {
        return Err(CountError::ZeroN);
    }
    let mut table = CountTable::new(TableKind::Stat(StatFamily::RDescent), Method::Recurrence);
    if n == 1 {
        table.set(CountKey::refined(1, 1, 0, 1), BigUint::one());
        return Ok(table);
    }
    let tree_table = r_recurrence_table((n + 1) as usize)?;
    let classical = eulerian_recurrence(n - 1)?;
    for m in 0..n {
        for k in 1..n {
            table.set(
                CountKey::refined(n, 1, m, k),
                tree_table.value((m + 1) as usize, k + 1),
            );
        }
        table.set(
            CountKey::refined(n, 1, m, n),
            classical.get(&CountKey::plain(n - 1, m)),
        );
    }
    Ok(table)
}

/// Coefficient list of an exact polynomial with nonnegative coefficients.
/// Trailing zeros are trimmed, so `degree` is honest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyCoeffs {
    coeffs: Vec<BigUint>,
}

impl PolyCoeffs {
    pub fn new(mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyCoeffs { coeffs }
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigUint {
        self.coeffs.get(i).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn as_slice(&self) -> &[BigUint] {
        &self.coeffs
    }
}

/// The polynomial `sum_m A(n, m) x^m`.
pub fn eulerian_polynomial(n: u32) -> Result<PolyCoeffs, CountError> {
    let table = eulerian_recurrence(n)?;
    Ok(PolyCoeffs::new(
        (0..n).map(|m| table.get(&CountKey::plain(n, m))).collect(),
    ))
}

/// Series coefficients of `A_n(x) / (1 - x)^(n+1)` through `x^degree_max`.
///
/// Uses `1 / (1 - x)^(n+1) = sum_j C(n + j, n) x^j` and convolves exactly.
pub fn ogf_coefficients(n: u32, degree_max: u32) -> Result<PolyCoeffs, CountError> {
    let poly = eulerian_polynomial(n)?;
    let mut out = Vec::with_capacity(degree_max as usize + 1);
    for d in 0..=degree_max {
        let mut sum = BigUint::zero();
        for m in 0..=d.min(poly.degree().unwrap_or(0) as u32) {
            sum += poly.coeff(m as usize)
                * binomial(u64::from(n) + u64::from(d - m), i64::from(n));
        }
        out.push(sum);
    }
    Ok(PolyCoeffs::new(out))
}

#[cfg(test)]
mod tests {
    use num_traits::ToPrimitive;

    use super::*;
    use crate::perm::for_each_permutation;

    fn eulerian_cell(table: &CountTable, n: u32, m: u32) -> u64 {
        table.get(&CountKey::plain(n, m)).to_u64().unwrap()
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(4, 0), BigUint::from(1u32));
        assert_eq!(binomial(0, 0), BigUint::from(1u32));
        assert_eq!(binomial(4, 5), BigUint::zero());
        assert_eq!(binomial(4, -1), BigUint::zero());
        // Pascal cross-check
        for a in 1..=20u64 {
            for b in 0..=a as i64 {
                assert_eq!(
                    binomial(a, b),
                    binomial(a - 1, b - 1) + binomial(a - 1, b)
                );
            }
        }
    }

    #[test]
    fn recurrence_reproduces_the_classical_triangle() {
        let t = eulerian_recurrence(7).unwrap();
        let rows: Vec<Vec<u64>> = (1..=6)
            .map(|n| (0..n).map(|m| eulerian_cell(&t, n, m)).collect())
            .collect();
        assert_eq!(
            rows,
            vec![
                vec![1],
                vec![1, 1],
                vec![1, 4, 1],
                vec![1, 11, 11, 1],
                vec![1, 26, 66, 26, 1],
                vec![1, 57, 302, 302, 57, 1],
            ]
        );
        assert_eq!(eulerian_cell(&t, 7, 2), 1191);
        assert_eq!(eulerian_cell(&t, 7, 3), 2416);
    }

    #[test]
    fn closed_form_matches_recurrence() {
        let t = eulerian_recurrence(10).unwrap();
        for n in 1..=10u32 {
            for m in 0..n {
                assert_eq!(
                    eulerian_closed_form(n, m).unwrap(),
                    t.get(&CountKey::plain(n, m)),
                    "closed form disagrees at ({n}, {m})"
                );
            }
        }
        assert_eq!(eulerian_closed_form(5, 2).unwrap(), BigUint::from(66u32));
        assert!(matches!(
            eulerian_closed_form(4, 4),
            Err(CountError::MOutOfRange { .. })
        ));
        assert!(matches!(eulerian_closed_form(0, 0), Err(CountError::ZeroN)));
    }

    #[test]
    fn rows_are_symmetric_and_sum_to_factorials() {
        let t = eulerian_recurrence(10).unwrap();
        for n in 1..=10u32 {
            let mut sum = BigUint::zero();
            for m in 0..n {
                sum += t.get(&CountKey::plain(n, m));
                assert_eq!(
                    t.get(&CountKey::plain(n, m)),
                    t.get(&CountKey::plain(n, n - 1 - m))
                );
            }
            assert_eq!(sum, factorial(n.into()));
        }
    }

    #[test]
    fn enumeration_refines_the_classical_counts() {
        for n in 1..=7usize {
            let refined = count_by_enumeration(n, StatKind::descent(1).unwrap()).unwrap();
            let classical = eulerian_recurrence(n as u32).unwrap();
            for m in 0..n as u32 {
                let mut sum = BigUint::zero();
                for k in 1..=n as u32 {
                    sum += refined.get(&CountKey::refined(n as u32, 1, m, k));
                }
                assert_eq!(sum, classical.get(&CountKey::plain(n as u32, m)));
            }
            assert_eq!(refined.total(), factorial(n as u64));
        }
    }

    #[test]
    fn refined_descent_counts_small_worked_values() {
        let t = count_by_enumeration(4, StatKind::descent(1).unwrap()).unwrap();
        let get = |m: u32, k: u32| t.get(&CountKey::refined(4, 1, m, k)).to_u64().unwrap();
        assert_eq!(get(1, 2), 2); // 1342 and 3412
        assert_eq!(get(2, 1), 4);
        assert_eq!(get(1, 3), 4);
        assert_eq!(get(0, 4), 1); // the identity word

        let big = count_by_enumeration(4, StatKind::descent(2).unwrap()).unwrap();
        let get2 = |m: u32, k: u32| big.get(&CountKey::refined(4, 2, m, k)).to_u64().unwrap();
        assert_eq!(get2(0, 1), 1);
        assert_eq!(get2(1, 1), 4);
        assert_eq!(get2(2, 1), 1);
        assert_eq!(get2(1, 2), 4);
        assert_eq!(get2(0, 2), 1);
        assert_eq!(get2(2, 2), 1);

        let small = count_by_enumeration(3, StatKind::descent(2).unwrap()).unwrap();
        assert_eq!(small.get(&CountKey::refined(3, 2, 0, 1)), BigUint::one()); // 321
    }

    #[test]
    fn excedance_families_also_tally() {
        // every r-statistic family produces a full table over n! words
        for family in StatFamily::ALL {
            let t = count_by_enumeration(5, StatKind::new(family, 2).unwrap()).unwrap();
            assert_eq!(t.total(), factorial(5));
        }
    }

    #[test]
    fn every_last_letter_class_has_factorial_size() {
        // sum over m of A_r(n, m, k) counts the words ending in k: (n-1)!
        for r in 1..=3u32 {
            for n in 1..=7u32 {
                let t = count_by_enumeration(n as usize, StatKind::descent(r).unwrap()).unwrap();
                for k in 1..=n {
                    let mut sum = BigUint::zero();
                    for m in 0..n {
                        sum += t.get(&CountKey::refined(n, r, m, k));
                    }
                    assert_eq!(sum, factorial(n as u64 - 1), "class size at ({n}, r={r}, k={k})");
                }
            }
        }
    }

    #[test]
    fn recurrence_route_matches_enumeration_for_refined_counts() {
        for n in 1..=6u64 {
            let enumerated = count_by_enumeration(n as usize, StatKind::descent(1).unwrap())
                .unwrap();
            for m in 0..n {
                for k in 1..=n {
                    assert_eq!(
                        a_nmk_recurrence(n, m, k).unwrap(),
                        enumerated.get(&CountKey::refined(n as u32, 1, m as u32, k as u32)),
                        "mismatch at ({n}, {m}, {k})"
                    );
                }
            }
        }
    }

    #[test]
    fn refined_recurrence_worked_values_and_errors() {
        assert_eq!(a_nmk_recurrence(3, 1, 2).unwrap(), BigUint::from(2u32));
        assert_eq!(a_nmk_recurrence(3, 2, 1).unwrap(), BigUint::one());
        assert_eq!(a_nmk_recurrence(4, 2, 1).unwrap(), BigUint::from(4u32));
        // ending in the maximum reduces to the unrefined count
        assert_eq!(a_nmk_recurrence(5, 2, 5).unwrap(), BigUint::from(11u32));
        assert_eq!(a_nmk_recurrence(1, 0, 1).unwrap(), BigUint::one());
        assert!(matches!(
            a_nmk_recurrence(3, 0, 0),
            Err(CountError::KOutOfRange { .. })
        ));
        assert!(matches!(
            a_nmk_recurrence(3, 0, 4),
            Err(CountError::KOutOfRange { .. })
        ));
        assert_eq!(a_nmk_recurrence(3, 7, 2).unwrap(), BigUint::zero());
    }

    #[test]
    fn ending_in_one_shifts_the_triangle() {
        // words ending in 1: drop the 1, every descent survives except the
        // final one, giving A(n, m, 1) = A(n-1, m-1)
        let t = eulerian_recurrence(8).unwrap();
        for n in 2..=8u64 {
            for m in 1..n {
                assert_eq!(
                    a_nmk_recurrence(n, m, 1).unwrap(),
                    t.get(&CountKey::plain((n - 1) as u32, (m - 1) as u32))
                );
            }
            assert_eq!(a_nmk_recurrence(n, 0, 1).unwrap(), BigUint::zero());
        }
    }

    #[test]
    fn refined_table_marginalizes_to_the_classical_row() {
        // sum over k of A(n, m, k) must equal A(n, m), including at n = 60
        let n = 60u64;
        let refined = a_nmk_table(n as u32).unwrap();
        let classical = eulerian_recurrence(n as u32).unwrap();
        for m in [0u64, 1, 29, 30, 58, 59] {
            let mut sum = BigUint::zero();
            for k in 1..=n {
                sum += refined.get(&CountKey::refined(
                    n as u32,
                    1,
                    m as u32,
                    k as u32,
                ));
            }
            let expected = if m < n {
                classical.get(&CountKey::plain(n as u32, m as u32))
            } else {
                BigUint::zero()
            };
            assert_eq!(sum, expected, "marginal mismatch at m = {m}");
        }
    }

    #[test]
    fn full_refined_table_matches_single_queries() {
        let table = a_nmk_table(6).unwrap();
        for m in 0..6u64 {
            for k in 1..=6u64 {
                assert_eq!(
                    table.get(&CountKey::refined(6, 1, m as u32, k as u32)),
                    a_nmk_recurrence(6, m, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn polynomial_and_series_coefficients() {
        let p = eulerian_polynomial(4).unwrap();
        assert_eq!(
            p.as_slice(),
            &[
                BigUint::from(1u32),
                BigUint::from(11u32),
                BigUint::from(11u32),
                BigUint::from(1u32)
            ]
        );
        assert_eq!(p.degree(), Some(3));

        let s = ogf_coefficients(2, 3).unwrap();
        assert_eq!(
            s.as_slice(),
            &[
                BigUint::from(1u32),
                BigUint::from(4u32),
                BigUint::from(9u32),
                BigUint::from(16u32)
            ]
        );
        let s = ogf_coefficients(1, 2).unwrap();
        assert_eq!(
            s.as_slice(),
            &[BigUint::from(1u32), BigUint::from(2u32), BigUint::from(3u32)]
        );
        let s = ogf_coefficients(4, 5).unwrap();
        assert_eq!(s.coeff(5), BigUint::from(6u32).pow(4));
    }

    #[test]
    fn series_coefficients_are_perfect_powers() {
        for n in 1..=6u32 {
            let s = ogf_coefficients(n, 12).unwrap();
            for d in 0..=12u32 {
                assert_eq!(s.coeff(d as usize), BigUint::from(d + 1).pow(n));
            }
        }
    }

    #[test]
    fn poly_coeffs_trim_trailing_zeros() {
        let p = PolyCoeffs::new(vec![
            BigUint::from(3u32),
            BigUint::zero(),
            BigUint::zero(),
        ]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(p.coeff(7), BigUint::zero());
        let zero = PolyCoeffs::new(vec![BigUint::zero()]);
        assert_eq!(zero.degree(), None);
    }

    #[test]
    fn table_serialization_roundtrips_with_decimal_strings() {
        let mut t = CountTable::new(TableKind::Eulerian, Method::Recurrence);
        t.set(CountKey::plain(70, 35), factorial(40)); // needs > 64 bits
        t.set(CountKey::plain(2, 1), BigUint::one());
        let json = serde_json::to_string(&t).unwrap();
        assert!(json.contains("\"value\":\"1\""));
        assert!(json.contains("eulerian"));
        let back: CountTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);

        let refined = count_by_enumeration(4, StatKind::excedance(2).unwrap()).unwrap();
        let json = serde_json::to_string(&refined).unwrap();
        let back: CountTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, refined);
    }

    #[test]
    fn serialization_rejects_garbage() {
        let bad_kind = r#"{"kind":"mystery","method":"recurrence","entries":[]}"#;
        assert!(serde_json::from_str::<CountTable>(bad_kind).is_err());
        let bad_value =
            r#"{"kind":"eulerian","method":"recurrence","entries":[{"n":1,"m":0,"value":"x"}]}"#;
        assert!(serde_json::from_str::<CountTable>(bad_value).is_err());
    }

    #[test]
    fn parallel_and_serial_enumeration_agree() {
        // the rayon fold must give the same table as a single-threaded tally
        let n = 7usize;
        let stat = StatKind::descent(2).unwrap();
        let parallel = count_by_enumeration(n, stat).unwrap();
        let mut serial = CountTable::new(TableKind::Stat(StatFamily::RDescent), Method::Enumeration);
        for_each_permutation(n, |p| {
            serial.add(
                CountKey::refined(n as u32, 2, p.count_stat(stat) as u32, p.last()),
                BigUint::one(),
            );
        })
        .unwrap();
        assert_eq!(parallel, serial);
    }
}
