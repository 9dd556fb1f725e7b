//! Enumeration oracles over F_2, independent of the row-reduction code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use lsc_core::{MatrixFq, PrimeField, Subspace};
use rand::Rng;

pub const F2: PrimeField = PrimeField::binary();

pub fn to_mask(v: &[u32]) -> u32 {
    v.iter().enumerate().fold(0, |acc, (i, &b)| acc | (b << i))
}

pub fn from_mask(mask: u32, n: usize) -> Vec<u32> {
    (0..n).map(|i| (mask >> i) & 1).collect()
}

/// Every vector in the F_2-span of `rows`, as bitmasks.
pub fn span(rows: &[u32]) -> BTreeSet<u32> {
    let mut set = BTreeSet::new();
    set.insert(0);
    for &r in rows {
        let extra: Vec<u32> = set.iter().map(|&v| v ^ r).collect();
        set.extend(extra);
    }
    set
}

pub fn masks(m: &MatrixFq) -> Vec<u32> {
    (0..m.rows()).map(|r| to_mask(m.row(r))).collect()
}

pub fn span_of(s: &Subspace) -> BTreeSet<u32> {
    span(&masks(s.basis()))
}

/// `log2 |set|` for a set whose size is a power of two.
pub fn dim_of(set: &BTreeSet<u32>) -> usize {
    let n = set.len();
    assert!(n.is_power_of_two());
    n.trailing_zeros() as usize
}

pub fn random_subspace<R: Rng>(ambient: usize, rng: &mut R) -> Subspace {
    let dim = rng.gen_range(0..=ambient);
    Subspace::random(F2, ambient, dim, rng).unwrap()
}

pub fn random_rows<R: Rng>(ambient: usize, count: usize, rng: &mut R) -> MatrixFq {
    MatrixFq::random(F2, count, ambient, rng)
}

/// Rank over F_2 from the size of the row span.
pub fn rank_by_span(m: &MatrixFq) -> usize {
    dim_of(&span(&masks(m)))
}
