//! Teach the three learners the same handful of examples and compare their
//! rankings for one query. Ends with a JSON snapshot round trip.
//!
//! cargo run --example learners

use subteach::corpus::{SubstitutionExample, Vocabulary};
use subteach::learners::{new_learner, LearnerKind, LearnerSnapshot, Similarity};
use subteach::representation::{
    DescriptiveWeights, QueryEncoder, RepresentationProvider, UnseenPolicy,
};

fn main() -> subteach::Result<()> {
    let vocab = Vocabulary::from_names([
        "butter",
        "oil",
        "margarine",
        "flour",
        "sugar",
        "egg",
        "milk",
        "soy_milk",
    ])?;
    let id = |n: &str| vocab.get(n).unwrap();
    let teach = [
        (&["butter", "flour", "sugar"][..], "butter", "oil"),
        (&["butter", "flour", "egg"][..], "butter", "oil"),
        (&["butter", "sugar"][..], "butter", "margarine"),
        (&["milk", "flour", "egg"][..], "milk", "soy_milk"),
        (&["milk", "sugar"][..], "milk", "soy_milk"),
    ];
    let examples: Vec<SubstitutionExample> = teach
        .iter()
        .map(|(recipe, s, t)| SubstitutionExample::new(recipe.iter().map(|n| id(n)), id(s), id(t)))
        .collect::<subteach::Result<_>>()?;

    let weights = DescriptiveWeights::compute(
        examples.iter().map(|e| e.recipe().to_vec()),
        vocab.len(),
        UnseenPolicy::MaxObserved,
    )?;
    let encoder = QueryEncoder {
        provider: RepresentationProvider::one_hot(&vocab),
        weights,
        source_weight: 0.9,
    };

    let query = SubstitutionExample::new(
        [id("butter"), id("flour"), id("egg")],
        id("butter"),
        id("oil"),
    )?;
    let q = encoder.encode(&query)?;
    let candidates: Vec<_> = vocab.ids().collect();

    for kind in LearnerKind::ALL {
        let mut learner = new_learner(kind, Similarity::Cosine);
        for e in &examples {
            learner.train_one(e, &encoder.encode(e)?);
        }
        let ranking = learner.rank(query.source, &q, &candidates);
        let top: Vec<String> = ranking
            .entries()
            .iter()
            .take(4)
            .map(|(c, s)| format!("{} ({s:.3})", vocab.name(*c)))
            .collect();
        println!("{kind:13} {}", top.join(", "));

        let json = learner.snapshot().to_json();
        let restored = LearnerSnapshot::from_json(&json)?.restore()?;
        assert_eq!(restored.rank(query.source, &q, &candidates), ranking);
        if kind == LearnerKind::Baseline {
            println!("  snapshot: {json}");
        }
    }
    Ok(())
}
