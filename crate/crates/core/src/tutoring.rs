//! Tutoring policies: the order in which training examples reach the learner.
//!
//! `Balanced` groups examples into complete buckets by `(source, target)`. Each
//! round gives every non-empty bucket a quota of `floor(log2 |B|) + 1` draws, with
//! `|B|` its current size. Draws always come from the bucket with the most quota
//! left (ties go to the smallest `(source, target)`), picking a uniformly random
//! unused example. A new round starts once every quota is spent.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{IngredientId, SubstitutionExample};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    Random,
    Balanced,
}

impl Policy {
    pub fn as_str(self) -> &'static str {
        match self {
            Policy::Random => "random",
            Policy::Balanced => "balanced",
        }
    }

    pub fn order(self, train: &[SubstitutionExample], seed: u64) -> Vec<usize> {
        match self {
            Policy::Random => random_order(train.len(), seed),
            Policy::Balanced => balanced_order(train, seed),
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Policy::Random),
            "balanced" => Ok(Policy::Balanced),
            other => Err(Error::Config(format!(
                "unknown policy `{other}` (expected random or balanced)"
            ))),
        }
    }
}

/// Seeded uniform permutation of `0..n`.
pub fn random_order(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    order
}

/// `floor(log2(size)) + 1`.
pub fn reduced_quota(size: usize) -> usize {
    assert!(size >= 1);
    (usize::BITS - 1 - size.leading_zeros()) as usize + 1
}

pub type BucketKey = (IngredientId, IngredientId);

/// Example indices grouped by `(source, target)`, in input order.
pub fn complete_buckets(train: &[SubstitutionExample]) -> BTreeMap<BucketKey, Vec<usize>> {
    let mut buckets: BTreeMap<BucketKey, Vec<usize>> = BTreeMap::new();
    for (i, e) in train.iter().enumerate() {
        buckets.entry((e.source, e.target)).or_default().push(i);
    }
    buckets
}

/// Output of [`balanced_order_traced`]: the order plus where each round starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedTrace {
    pub order: Vec<usize>,
    /// Offsets into `order` at which each outer round begins.
    pub round_starts: Vec<usize>,
}

impl BalancedTrace {
    pub fn rounds(&self) -> impl Iterator<Item = &[usize]> {
        let ends = self
            .round_starts
            .iter()
            .skip(1)
            .copied()
            .chain([self.order.len()]);
        self.round_starts
            .iter()
            .zip(ends)
            .map(|(&s, e)| &self.order[s..e])
    }
}

pub fn balanced_order(train: &[SubstitutionExample], seed: u64) -> Vec<usize> {
    balanced_order_traced(train, seed).order
}

pub fn balanced_order_traced(train: &[SubstitutionExample], seed: u64) -> BalancedTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buckets: Vec<(BucketKey, Vec<usize>)> = complete_buckets(train).into_iter().collect();
    let mut order = Vec::with_capacity(train.len());
    let mut round_starts = Vec::new();

    while order.len() < train.len() {
        round_starts.push(order.len());
        // Max-heap on remaining quota; Reverse(index) breaks ties toward the
        // smallest key because `buckets` is sorted by key.
        let mut reduced: BinaryHeap<(usize, Reverse<usize>)> = buckets
            .iter()
            .enumerate()
            .filter(|(_, (_, pool))| !pool.is_empty())
            .map(|(b, (_, pool))| (reduced_quota(pool.len()), Reverse(b)))
            .collect();
        while let Some((left, Reverse(b))) = reduced.pop() {
            let pool = &mut buckets[b].1;
            let pick = rng.gen_range(0..pool.len());
            order.push(pool.swap_remove(pick));
            if left > 1 && !pool.is_empty() {
                reduced.push((left - 1, Reverse(b)));
            }
        }
    }
    BalancedTrace {
        order,
        round_starts,
    }
}

/// Writes one example index per line.
pub fn save_order(path: &Path, order: &[usize]) -> Result<()> {
    let mut out = Vec::with_capacity(order.len() * 6);
    for i in order {
        writeln!(out, "{i}").expect("write to Vec");
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}
