//! Load a vocabulary, an alias map and a JSONL dataset, then drop examples whose
//! recipe holds nothing but the source.
//!
//! cargo run --example load_and_filter

use std::fs;

use subteach::corpus::{filter_degenerate, load_dataset, AliasMap, Split, Vocabulary};

fn main() -> subteach::Result<()> {
    let dir = tempfile::tempdir().expect("temp dir");
    let vocab_path = dir.path().join("vocab.tsv");
    let alias_path = dir.path().join("aliases.tsv");
    let data_path = dir.path().join("dataset.jsonl");

    fs::write(
        &vocab_path,
        "0\tsalt\n1\tsea_salt\n2\ttomato\n3\tbutter\n4\tmargarine\n5\tflour\n",
    )
    .unwrap();
    fs::write(&alias_path, "table salt\tsalt\n").unwrap();
    fs::write(
        &data_path,
        [
            r#"{"split":"train","recipe":["Table Salt","tomato"],"source":"table salt","target":"sea_salt"}"#,
            r#"{"split":"train","recipe":["butter","flour"],"source":"butter","target":"margarine"}"#,
            r#"{"split":"train","recipe":["butter"],"source":"butter","target":"margarine"}"#,
            r#"{"split":"validation","recipe":["salt","flour"],"source":"salt","target":"sea_salt"}"#,
            r#"{"split":"test","recipe":["butter","tomato","flour"],"source":"butter","target":"margarine"}"#,
        ]
        .join("\n"),
    )
    .unwrap();

    let vocab = Vocabulary::load(&vocab_path)?.with_aliases(AliasMap::load(&alias_path)?);
    let dataset = load_dataset(&data_path, &vocab)?;
    println!("loaded {} examples", dataset.len());
    for e in &dataset.train {
        let recipe: Vec<&str> = e.recipe().iter().map(|&i| vocab.name(i)).collect();
        println!(
            "  train: {:?} {} -> {}",
            recipe,
            vocab.name(e.source),
            vocab.name(e.target)
        );
    }

    let (dataset, report) = filter_degenerate(dataset);
    println!(
        "filtered {} degenerate examples (train {}, validation {}, test {})",
        report.total(),
        report.train,
        report.validation,
        report.test
    );
    for split in Split::ALL {
        println!("  {split}: {}", dataset.split(split).len());
    }
    println!(
        "distinct training recipes: {}",
        dataset.recipe_corpus().len()
    );
    Ok(())
}
