//! Exact combinatorics of permutation statistics and recursive trees.
//!
//! The library counts permutations of `[n] = {1, ..., n}` by distance-`r`
//! descent/ascent/excedance statistics together with the last element,
//! implements the fundamental transform that carries descent structure to
//! cycle structure (and several smaller structure-preserving maps), and
//! counts unordered increasing trees by leaf number and by the endpoint of
//! the minimal-label path from the root.
//!
//! Every count is exact: small enumerations tally in machine words and
//! tables store arbitrary-precision integers. Claimed equalities between
//! counting formulas are never assumed — the [`identities`] module checks
//! each one against independent brute-force oracles and reports the
//! minimal counterexample when a claim fails.

pub mod bijections;
pub mod cli;
pub mod counting;
pub mod foata;
pub mod identities;
pub mod perm;
pub mod toolkit;
pub mod trees;

pub use counting::{binomial, CountTable};
pub use identities::{IdentityId, SweepRanges, VerificationReport, Verdict};
pub use perm::{Permutation, StatFamily, StatKind};
pub use trees::RecursiveTree;
