use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use subteach::corpus::Split;
use subteach::learners::{new_learner, LearnerKind, Similarity};
use subteach::representation::{RepresentationProvider, UnseenPolicy};
use subteach::runner::{
    run_curves, run_experiment, Checkpoint, ConfigFile, PreparedData, QuerySpec, RunSettings,
};
use subteach::synth::{generate, SynthConfig, SynthFiles};
use subteach::tutoring::Policy;

fn write_synth(dir: &Path) -> SynthFiles {
    generate(&SynthConfig::default())
        .unwrap()
        .write_files(dir)
        .unwrap()
}

fn write_config(dir: &Path, files: &SynthFiles, extra: &str) -> PathBuf {
    let path = dir.join("experiment.toml");
    let text = format!(
        "dataset = {:?}\nvocab = {:?}\nclasses = {:?}\nedges = {:?}\n{extra}",
        files.dataset.file_name().unwrap(),
        files.vocab.file_name().unwrap(),
        files.classes.file_name().unwrap(),
        files.edges.file_name().unwrap(),
    );
    fs::write(&path, text).unwrap();
    path
}

fn without_seconds(csv: &Path) -> String {
    let text = fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let keep: Vec<usize> = (0..header.len())
        .filter(|&i| !header[i].starts_with("seconds"))
        .collect();
    std::iter::once(header)
        .chain(lines.map(|l| l.split(',').collect()))
        .map(|row| keep.iter().map(|&i| row[i]).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn baseline_random_is_reproducible_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let files = write_synth(dir.path());
    let cfg = write_config(
        dir.path(),
        &files,
        "learner = \"baseline\"\npolicy = \"random\"\nruns = 2\nseed = 3\n",
    );
    let mut outs = Vec::new();
    for name in ["a", "b"] {
        let mut file = ConfigFile::load(&cfg).unwrap();
        file.out = Some(dir.path().join(name));
        outs.push(run_experiment(&file.resolve().unwrap()).unwrap());
    }
    assert_eq!(outs[0].run_csvs.len(), 2);
    for (x, y) in outs[0]
        .run_csvs
        .iter()
        .chain([&outs[0].aggregate_csv])
        .zip(outs[1].run_csvs.iter().chain([&outs[1].aggregate_csv]))
    {
        assert_eq!(without_seconds(x), without_seconds(y));
    }
    let csv = fs::read_to_string(&outs[0].run_csvs[0]).unwrap();
    assert!(csv.starts_with(
        "run_id,policy,learner,representation,examples_seen,split,hit1,hit10,mrr,seconds\n"
    ));
    assert!(csv
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("0,random,baseline,none,100,validation,"));

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&outs[0].manifest).unwrap()).unwrap();
    assert_eq!(manifest["representation_used"], false);
    assert_eq!(manifest["seeds"], serde_json::json!([3, 4]));
    assert_eq!(manifest["inputs"][0]["role"], "dataset");
    assert_eq!(
        manifest["inputs"][0]["blob_sha256"].as_str().unwrap().len(),
        64
    );
}

#[test]
fn nine_learner_representation_combinations_run() {
    let dir = tempfile::tempdir().unwrap();
    let files = write_synth(dir.path());
    let embeddings = dir.path().join("vectors.txt");
    let vocab = subteach::Vocabulary::load(&files.vocab).unwrap();
    let mut text = format!("{} 4\n", vocab.len());
    for (i, name) in vocab.names().iter().enumerate() {
        text += &format!(
            "{name} {} {} {} {}\n",
            i % 2,
            i % 3,
            (i % 5) as f64 / 5.0,
            1
        );
    }
    fs::write(&embeddings, text).unwrap();

    let cfg = write_config(
        dir.path(),
        &files,
        "embeddings = \"vectors.txt\"\nruns = 1\ncheckpoints = \"100\"\n",
    );
    for learner in ["baseline", "prototype", "accumulative"] {
        for repr in ["one_hot", "one_hot_kg", "dense"] {
            let mut file = ConfigFile::load(&cfg).unwrap();
            file.learner = Some(learner.into());
            file.representation = Some(repr.into());
            file.out = Some(dir.path().join(format!("{learner}-{repr}")));
            let out = run_experiment(&file.resolve().unwrap()).unwrap();
            let agg = fs::read_to_string(&out.aggregate_csv).unwrap();
            assert_eq!(
                agg.lines().count(),
                3,
                "{learner}/{repr}: header, validation, test"
            );
        }
    }
}

#[test]
fn single_checkpoint_gives_one_record_per_run_per_split() {
    let data = generate(&SynthConfig::default()).unwrap();
    let prepared =
        PreparedData::new(data.vocab.clone(), data.dataset.clone(), QuerySpec::None).unwrap();
    let settings = RunSettings {
        learner: LearnerKind::Baseline,
        similarity: Similarity::Cosine,
        policy: Policy::Balanced,
        checkpoints: vec![Checkpoint::Count(100)],
        runs: 3,
        base_seed: 0,
    };
    let result = run_curves(&prepared, &settings).unwrap();
    assert_eq!(result.validation.len(), 3);
    assert!(result.validation.iter().all(|c| c.records().len() == 1));
    assert!(result
        .test
        .iter()
        .all(|c| c.records().len() == 1 && c.records()[0].examples_seen == 100));
    assert_eq!(result.aggregate(Split::Test).unwrap().len(), 1);
}

#[test]
fn checkpoint_evaluation_leaves_the_learner_untouched() {
    let data = generate(&SynthConfig::default()).unwrap();
    let prepared = PreparedData::new(
        data.vocab.clone(),
        data.dataset.clone(),
        QuerySpec::Encode {
            provider: RepresentationProvider::one_hot(&data.vocab),
            source_weight: 0.9,
            unseen: UnseenPolicy::MaxObserved,
        },
    )
    .unwrap();
    let grid = |checkpoints: Vec<Checkpoint>| RunSettings {
        learner: LearnerKind::Prototype,
        similarity: Similarity::Cosine,
        policy: Policy::Random,
        checkpoints,
        runs: 2,
        base_seed: 5,
    };
    let dense = run_curves(
        &prepared,
        &grid((1..=10).map(|k| Checkpoint::Count(100 * k)).collect()),
    )
    .unwrap();
    let sparse = run_curves(&prepared, &grid(vec![Checkpoint::Count(1000)])).unwrap();
    for (d, s) in dense.validation.iter().zip(&sparse.validation) {
        assert_eq!(
            d.records().last().unwrap().metrics(),
            s.records()[0].metrics()
        );
    }
    for (d, s) in dense.test.iter().zip(&sparse.test) {
        assert_eq!(d.records()[0].metrics(), s.records()[0].metrics());
    }

    // Same check directly on learner state.
    let order = Policy::Random.order(&prepared.dataset.train, 5);
    let train_all = |eval_every: Option<usize>| {
        let mut learner = new_learner(LearnerKind::Accumulative, Similarity::Cosine);
        for (step, &i) in order[..600].iter().enumerate() {
            learner.train_one(&prepared.dataset.train[i], &prepared.train_queries[i]);
            if eval_every.is_some_and(|k| (step + 1) % k == 0) {
                subteach::evaluation::evaluate(
                    learner.as_ref(),
                    &prepared.dataset.validation,
                    &prepared.validation_queries,
                    &prepared.candidates,
                )
                .unwrap();
            }
        }
        learner.snapshot()
    };
    assert_eq!(train_all(Some(50)), train_all(None));
}

#[test]
fn checkpoints_past_the_training_split_are_dropped() {
    let data = generate(&SynthConfig::default()).unwrap();
    let prepared =
        PreparedData::new(data.vocab.clone(), data.dataset.clone(), QuerySpec::None).unwrap();
    let settings = RunSettings {
        learner: LearnerKind::Baseline,
        similarity: Similarity::Cosine,
        policy: Policy::Random,
        checkpoints: vec![
            Checkpoint::Count(100),
            Checkpoint::Count(50_000),
            Checkpoint::All,
        ],
        runs: 1,
        base_seed: 0,
    };
    let result = run_curves(&prepared, &settings).unwrap();
    assert_eq!(result.checkpoints, vec![100, prepared.dataset.train.len()]);
    assert_eq!(result.skipped_checkpoints, vec![50_000]);
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_subteach"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let files = write_synth(dir.path());
    let cfg = write_config(dir.path(), &files, "runs = 1\ncheckpoints = \"100,all\"\n");
    let cfg = cfg.to_str().unwrap();
    let out = dir.path().join("out");

    let ok = cli(&[
        "run",
        "--config",
        cfg,
        "--learner",
        "baseline",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );
    assert!(out.join("aggregate.csv").exists());
    assert!(out.join("run_0.csv").exists());

    let bad_learner = cli(&["run", "--config", cfg, "--learner", "oracle"]);
    assert_eq!(bad_learner.status.code(), Some(2));
    let bad_checkpoints = cli(&["run", "--config", cfg, "--checkpoints", "ten"]);
    assert_eq!(bad_checkpoints.status.code(), Some(2));
    let missing_config = cli(&[
        "run",
        "--config",
        dir.path().join("nope.toml").to_str().unwrap(),
    ]);
    assert_eq!(missing_config.status.code(), Some(2));

    fs::write(
        &files.dataset,
        "{\"split\":\"train\",\"recipe\":[\"ghost\"],\"source\":\"ghost\",\"target\":\"ghost\"}\n",
    )
    .unwrap();
    let bad_data = cli(&[
        "run",
        "--config",
        cfg,
        "--learner",
        "baseline",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(bad_data.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&bad_data.stderr);
    assert!(
        stderr.contains("load dataset") && stderr.contains("ghost"),
        "{stderr}"
    );
}

#[test]
fn cli_synth_and_link() {
    let dir = tempfile::tempdir().unwrap();
    let data_dir = dir.path().join("data");
    let synth = cli(&["synth", "--out", data_dir.to_str().unwrap(), "--seed", "2"]);
    assert_eq!(synth.status.code(), Some(0));
    let assignments = dir.path().join("assignments.tsv");
    let link = cli(&[
        "link",
        "--vocab",
        data_dir.join("vocab.tsv").to_str().unwrap(),
        "--classes",
        data_dir.join("classes.tsv").to_str().unwrap(),
        "--edges",
        data_dir.join("edges.tsv").to_str().unwrap(),
        "--out",
        assignments.to_str().unwrap(),
    ]);
    assert_eq!(
        link.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&link.stderr)
    );
    let loaded = subteach::knowledge::load_assignments(&assignments).unwrap();
    assert!(!loaded.is_empty());
}
