//! Build one-hot and knowledge-enriched ingredient vectors, compute descriptive
//! weights over a recipe corpus, and encode a substitution query.
//!
//! cargo run --example query_vectors

use subteach::corpus::{SubstitutionExample, Vocabulary};
use subteach::knowledge::{derive_properties, ClassHierarchy, LinkOptions};
use subteach::representation::{
    normalized_context_weights, DescriptiveWeights, QueryEncoder, RepresentationProvider,
    UnseenPolicy,
};

fn main() -> subteach::Result<()> {
    let vocab = Vocabulary::from_names(["salt", "sea_salt", "tomato", "basil", "olive_oil"])?;
    let mut h = ClassHierarchy::new();
    h.add_class("SALT", "salt");
    h.add_class("SEA_SALT", "sea salt");
    h.add_parent("SEA_SALT", "SALT")?;
    let assignments = derive_properties(&vocab, &h, LinkOptions::default(), 5);

    let id = |name: &str| vocab.get(name).unwrap();
    let recipes = vec![
        vec![id("salt"), id("tomato"), id("basil")],
        vec![id("salt"), id("tomato")],
        vec![id("tomato"), id("olive_oil")],
    ];
    let weights = DescriptiveWeights::compute(recipes, vocab.len(), UnseenPolicy::MaxObserved)?;
    for i in vocab.ids() {
        println!(
            "d({}) = {:.3} from {} recipes",
            vocab.name(i),
            weights.weight(i).unwrap(),
            weights.count(i)
        );
    }

    let example = SubstitutionExample::new(
        [id("salt"), id("tomato"), id("basil")],
        id("salt"),
        id("sea_salt"),
    )?;
    for (i, d) in normalized_context_weights(&example, &weights)? {
        println!("d'({}) = {d:.3}", vocab.name(i));
    }

    for provider in [
        RepresentationProvider::one_hot(&vocab),
        RepresentationProvider::one_hot_kg(&vocab, &assignments)?,
    ] {
        let mode = provider.mode();
        let class_dims = provider.class_dims().to_vec();
        let encoder = QueryEncoder {
            provider,
            weights: weights.clone(),
            source_weight: 0.9,
        };
        let q = encoder.encode(&example)?;
        let label = |dim: usize| match vocab.names().get(dim) {
            Some(name) => name.clone(),
            None => class_dims[dim - vocab.len()].clone(),
        };
        let parts: Vec<String> = q
            .nonzeros()
            .map(|(d, v)| format!("{}={v:.4}", label(d)))
            .collect();
        println!("{mode} query (dim {}): {}", q.dim(), parts.join(" "));
    }
    Ok(())
}
