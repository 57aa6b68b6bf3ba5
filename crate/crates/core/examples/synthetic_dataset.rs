//! Generate a synthetic dataset with a known substitution rule table and write it
//! in the corpus and hierarchy file formats.
//!
//! cargo run --example synthetic_dataset [output-dir]

use std::path::PathBuf;

use subteach::synth::{generate, SynthConfig};

fn main() -> subteach::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let data = generate(&SynthConfig::default())?;
    println!(
        "{} ingredients, {} classes, {} rules",
        data.vocab.len(),
        data.hierarchy.len(),
        data.rules.len()
    );
    println!(
        "splits: {} train / {} validation / {} test",
        data.dataset.train.len(),
        data.dataset.validation.len(),
        data.dataset.test.len()
    );
    for r in data.rules.iter().take(5) {
        println!(
            "  {} -> {} (p = {:.3})",
            data.vocab.name(r.source),
            data.vocab.name(r.target),
            r.probability
        );
    }
    let e = &data.dataset.train[0];
    let recipe: Vec<&str> = e.recipe().iter().map(|&i| data.vocab.name(i)).collect();
    println!(
        "first example: {recipe:?}, {} -> {}",
        data.vocab.name(e.source),
        data.vocab.name(e.target)
    );

    if let Some(dir) = out {
        let files = data.write_files(&dir)?;
        println!("wrote {} and friends", files.dataset.display());
    }
    Ok(())
}
