//! End-to-end experiment driven by a config file, the same path the `subteach run`
//! command takes. Writes per-run CSVs, an aggregate CSV and a manifest.
//!
//! cargo run --example run_from_config [output-dir]

use std::fs;
use std::path::PathBuf;

use subteach::runner::{run_experiment, ConfigFile};
use subteach::synth::{generate, SynthConfig};

fn main() -> subteach::Result<()> {
    let scratch = tempfile::tempdir().expect("temp dir");
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| scratch.path().join("results"));

    generate(&SynthConfig::default())?.write_files(scratch.path())?;
    let config_path = scratch.path().join("experiment.toml");
    fs::write(
        &config_path,
        r#"dataset = "dataset.jsonl"
vocab = "vocab.tsv"
classes = "classes.tsv"
edges = "edges.tsv"
representation = "one_hot_kg"
learner = "accumulative"
policy = "balanced"
checkpoints = "50,100,500,all"
runs = 4
seed = 0
"#,
    )
    .expect("writable temp dir");

    let mut config = ConfigFile::load(&config_path)?;
    config.out = Some(out);
    let config = config.resolve()?;
    let output = run_experiment(&config)?;

    print!(
        "{}",
        fs::read_to_string(&output.aggregate_csv).expect("just written")
    );
    println!("manifest: {}", output.manifest.display());
    Ok(())
}
