//! The learner x representation x policy grid on synthetic data, as learning
//! curves of validation hit@1 / hit@10 / MRR averaged over four runs.
//!
//! cargo run --release --example learning_curves

use subteach::knowledge::{derive_properties, LinkOptions};
use subteach::learners::{LearnerKind, Similarity};
use subteach::representation::{RepresentationProvider, UnseenPolicy};
use subteach::runner::{run_curves, Checkpoint, PreparedData, QuerySpec, RunSettings};
use subteach::synth::{generate, SynthConfig};
use subteach::{Policy, Split};

fn main() -> subteach::Result<()> {
    let data = generate(&SynthConfig {
        n_ingredients: 200,
        n_classes: 20,
        n_recipes: 800,
        n_examples: 6000,
        n_rules: 100,
        skew: 1.0,
        seed: 0,
    })?;
    let assignments = derive_properties(&data.vocab, &data.hierarchy, LinkOptions::default(), 5);
    let providers = [
        RepresentationProvider::one_hot(&data.vocab),
        RepresentationProvider::one_hot_kg(&data.vocab, &assignments)?,
    ];
    let checkpoints = [25, 50, 100, 500]
        .map(Checkpoint::Count)
        .into_iter()
        .chain([Checkpoint::All])
        .collect::<Vec<_>>();

    println!(
        "{:13} {:11} {:9} examples: hit@1 / hit@10 / mrr",
        "learner", "repr", "policy"
    );
    for provider in providers {
        let mode = provider.mode();
        let prepared = PreparedData::new(
            data.vocab.clone(),
            data.dataset.clone(),
            QuerySpec::Encode {
                provider,
                source_weight: 0.9,
                unseen: UnseenPolicy::MaxObserved,
            },
        )?;
        for learner in LearnerKind::ALL {
            for policy in [Policy::Random, Policy::Balanced] {
                let settings = RunSettings {
                    learner,
                    similarity: Similarity::Cosine,
                    policy,
                    checkpoints: checkpoints.clone(),
                    runs: 4,
                    base_seed: 0,
                };
                let result = run_curves(&prepared, &settings)?;
                let cells: Vec<String> = result
                    .aggregate(Split::Validation)?
                    .iter()
                    .map(|a| {
                        format!(
                            "{}: {:.2}/{:.2}/{:.2}",
                            a.examples_seen, a.hit1_mean, a.hit10_mean, a.mrr_mean
                        )
                    })
                    .collect();
                println!(
                    "{:13} {:11} {:9} {}",
                    learner.as_str(),
                    mode.as_str(),
                    policy.as_str(),
                    cells.join("  ")
                );
            }
        }
    }
    Ok(())
}
