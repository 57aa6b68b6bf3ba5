//! Link ingredient names to ontology class labels with tf-idf, climb superclasses,
//! and drop classes that describe a single ingredient.
//!
//! cargo run --example knowledge_linking

use subteach::corpus::Vocabulary;
use subteach::knowledge::{expand_hops, prune_singletons, tfidf_link, ClassHierarchy, LinkOptions};

fn main() -> subteach::Result<()> {
    let vocab = Vocabulary::from_names([
        "salt",
        "sea_salt",
        "kosher_salt",
        "brown_sugar",
        "cane_sugar",
        "rice",
    ])?;

    let mut h = ClassHierarchy::new();
    for (id, label) in [
        ("SALT", "salt"),
        ("SEA_SALT", "sea salt"),
        ("SUGAR", "sugar"),
        ("CANE_SUGAR", "cane sugar"),
        ("SEASONING", "seasoning"),
        ("SWEETENER", "sweetener"),
        ("FOOD", "food product"),
    ] {
        h.add_class(id, label);
    }
    for (child, parent) in [
        ("SEA_SALT", "SALT"),
        ("SALT", "SEASONING"),
        ("CANE_SUGAR", "SUGAR"),
        ("SUGAR", "SWEETENER"),
        ("SEASONING", "FOOD"),
        ("SWEETENER", "FOOD"),
    ] {
        h.add_parent(child, parent)?;
    }

    let links = tfidf_link(&vocab, &h, LinkOptions::default());
    println!("lexical links (cosine > 0.6):");
    for l in &links {
        println!(
            "  {:12} -> {:10} {:.3}",
            vocab.name(l.ingredient),
            l.class,
            l.similarity
        );
    }

    let expanded = expand_hops(&links, &h, 5);
    let kept = prune_singletons(&expanded);
    println!(
        "{} assignments after expansion, {} after pruning:",
        expanded.len(),
        kept.len()
    );
    for a in &kept {
        println!(
            "  {:12} {:10} hops {} weight {}",
            vocab.name(a.ingredient),
            a.class,
            a.hops,
            a.weight
        );
    }
    Ok(())
}
