//! Show how the random and balanced policies order a skewed training set.
//!
//! cargo run --example tutoring_policies

use std::collections::BTreeMap;

use subteach::corpus::{IngredientId, SubstitutionExample};
use subteach::tutoring::{balanced_order_traced, random_order, reduced_quota};

fn main() {
    // Four (source, target) pairs with very different popularity.
    let sizes = [40usize, 12, 3, 1];
    let mut train = Vec::new();
    for (k, &n) in sizes.iter().enumerate() {
        let (s, t) = (IngredientId(2 * k as u32), IngredientId(2 * k as u32 + 1));
        for _ in 0..n {
            train.push(SubstitutionExample::new([s, t], s, t).unwrap());
        }
    }
    let pair = |i: usize| (train[i].source.0 / 2) as usize;

    println!(
        "bucket sizes {sizes:?}, first-round quotas {:?}",
        sizes.map(reduced_quota)
    );

    let first_ten = |order: &[usize]| {
        order
            .iter()
            .take(10)
            .map(|&i| pair(i).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    println!(
        "random   first 10 pairs: {}",
        first_ten(&random_order(train.len(), 1))
    );

    let trace = balanced_order_traced(&train, 1);
    println!("balanced first 10 pairs: {}", first_ten(&trace.order));
    for (r, round) in trace.rounds().enumerate() {
        let mut per_pair: BTreeMap<usize, usize> = BTreeMap::new();
        for &i in round {
            *per_pair.entry(pair(i)).or_default() += 1;
        }
        println!("round {r}: {} draws {per_pair:?}", round.len());
    }
}
