//! Experiment orchestration: load inputs, replay the training split under a tutoring
//! policy, evaluate at checkpoints, and write per-run and aggregated CSVs.
//!
//! # Configuration file
//!
//! A flat TOML table. Relative paths resolve against the config file's directory.
//!
//! | key | meaning | default |
//! |-----|---------|---------|
//! | `dataset` | JSONL dataset | required |
//! | `vocab` | `id<TAB>name` vocabulary | required |
//! | `aliases` | `raw<TAB>canonical` alias map | none |
//! | `classes`, `edges` | class hierarchy TSVs (for `one_hot_kg`) | none |
//! | `assignments` | precomputed property assignments (for `one_hot_kg`, preferred over `classes`/`edges`) | none |
//! | `embeddings` | word2vec-style text vectors (for `dense`) | none |
//! | `representation` | `one_hot`, `one_hot_kg`, `dense` | `one_hot` |
//! | `learner` | `baseline`, `prototype`, `accumulative` | `accumulative` |
//! | `policy` | `random`, `balanced` | `random` |
//! | `source_weight` | weight of the source vector in a query | `0.9` |
//! | `checkpoints` | comma list of counts and/or `all` | `100,1000,5000,10000,20000,all` |
//! | `runs` | number of runs | `4` |
//! | `seed` | base seed; run `r` uses `seed + r` | `0` |
//! | `out` | output directory | `results` |
//! | `link_threshold` | tf-idf link threshold (strict) | `0.6` |
//! | `max_hops` | superclass hops | `5` |
//! | `similarity` | prototype similarity, `cosine` or `dot` | `cosine` |
//! | `unseen_weights` | `max_observed` or `error` | `max_observed` |
//! | `dump_order` | write each run's example order | `false` |
//!
//! Environment variables are never consulted.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{
    filter_degenerate, load_dataset, AliasMap, Dataset, FilterReport, IngredientId, Split,
    SubstitutionExample, Vocabulary,
};
use crate::error::{Error, Result};
use crate::evaluation::{
    aggregate_runs, evaluate, write_aggregate_csv, write_records_csv, AggregateRecord, EvalRecord,
    LearningCurve, RunLabels,
};
use crate::knowledge::{self, ClassHierarchy, LinkOptions, PropertyAssignment};
use crate::learners::{new_learner, LearnerKind, Similarity};
use crate::representation::{
    DescriptiveWeights, QueryEncoder, ReprMode, RepresentationProvider, UnseenPolicy,
    DEFAULT_SOURCE_WEIGHT,
};
use crate::tutoring::{save_order, Policy};
use crate::vector::{FeatureVector, SparseVector};

pub const DEFAULT_CHECKPOINTS: &str = "100,1000,5000,10000,20000,all";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Checkpoint {
    Count(usize),
    All,
}

impl fmt::Display for Checkpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Checkpoint::Count(n) => n.fmt(f),
            Checkpoint::All => f.write_str("all"),
        }
    }
}

/// Parses `100,1000,all`.
pub fn parse_checkpoints(text: &str) -> Result<Vec<Checkpoint>> {
    let list: Vec<Checkpoint> = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "all" => Ok(Checkpoint::All),
            n => n
                .parse()
                .map(Checkpoint::Count)
                .map_err(|_| Error::Config(format!("bad checkpoint `{n}`"))),
        })
        .collect::<Result<_>>()?;
    if list.is_empty() {
        return Err(Error::Config("checkpoint list is empty".into()));
    }
    Ok(list)
}

/// Sorted, deduplicated example counts not exceeding `n_train`, plus the dropped ones.
pub fn resolve_checkpoints(list: &[Checkpoint], n_train: usize) -> (Vec<usize>, Vec<usize>) {
    let mut kept = Vec::new();
    let mut skipped = Vec::new();
    for c in list {
        match *c {
            Checkpoint::All => kept.push(n_train),
            Checkpoint::Count(n) if n <= n_train => kept.push(n),
            Checkpoint::Count(n) => skipped.push(n),
        }
    }
    kept.sort_unstable();
    kept.dedup();
    skipped.sort_unstable();
    skipped.dedup();
    (kept, skipped)
}

/// The raw, flat key-value file. Every field is optional so CLI flags can fill gaps.
#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub dataset: Option<PathBuf>,
    pub vocab: Option<PathBuf>,
    pub aliases: Option<PathBuf>,
    pub classes: Option<PathBuf>,
    pub edges: Option<PathBuf>,
    pub assignments: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub representation: Option<String>,
    pub learner: Option<String>,
    pub policy: Option<String>,
    pub source_weight: Option<f64>,
    pub checkpoints: Option<String>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub link_threshold: Option<f64>,
    pub max_hops: Option<u32>,
    pub similarity: Option<String>,
    pub unseen_weights: Option<String>,
    pub dump_order: Option<bool>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a config file and makes its relative paths absolute against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [
            &mut cfg.dataset,
            &mut cfg.vocab,
            &mut cfg.aliases,
            &mut cfg.classes,
            &mut cfg.edges,
            &mut cfg.assignments,
            &mut cfg.embeddings,
            &mut cfg.out,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn resolve(self) -> Result<ExperimentConfig> {
        let required = |p: Option<PathBuf>, key: &str| {
            p.ok_or_else(|| Error::Config(format!("missing `{key}`")))
        };
        let cfg = ExperimentConfig {
            dataset: required(self.dataset, "dataset")?,
            vocab: required(self.vocab, "vocab")?,
            aliases: self.aliases,
            classes: self.classes,
            edges: self.edges,
            assignments: self.assignments,
            embeddings: self.embeddings,
            representation: self
                .representation
                .as_deref()
                .unwrap_or("one_hot")
                .parse()?,
            learner: self.learner.as_deref().unwrap_or("accumulative").parse()?,
            policy: self.policy.as_deref().unwrap_or("random").parse()?,
            source_weight: self.source_weight.unwrap_or(DEFAULT_SOURCE_WEIGHT),
            checkpoints: parse_checkpoints(
                self.checkpoints.as_deref().unwrap_or(DEFAULT_CHECKPOINTS),
            )?,
            runs: self.runs.unwrap_or(4),
            seed: self.seed.unwrap_or(0),
            out: self.out.unwrap_or_else(|| PathBuf::from("results")),
            link_threshold: self
                .link_threshold
                .unwrap_or(knowledge::DEFAULT_LINK_THRESHOLD),
            max_hops: self.max_hops.unwrap_or(knowledge::DEFAULT_MAX_HOPS),
            similarity: self.similarity.as_deref().unwrap_or("cosine").parse()?,
            unseen_weights: self
                .unseen_weights
                .as_deref()
                .unwrap_or("max_observed")
                .parse()?,
            dump_order: self.dump_order.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A fully specified experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub dataset: PathBuf,
    pub vocab: PathBuf,
    pub aliases: Option<PathBuf>,
    pub classes: Option<PathBuf>,
    pub edges: Option<PathBuf>,
    pub assignments: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub representation: ReprMode,
    pub learner: LearnerKind,
    pub policy: Policy,
    pub source_weight: f64,
    #[serde(serialize_with = "serialize_checkpoints")]
    pub checkpoints: Vec<Checkpoint>,
    pub runs: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub link_threshold: f64,
    pub max_hops: u32,
    pub similarity: Similarity,
    pub unseen_weights: UnseenPolicy,
    pub dump_order: bool,
}

fn serialize_checkpoints<S: serde::Serializer>(
    c: &[Checkpoint],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(
        &c.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(","),
    )
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.source_weight) {
            return Err(Error::Config(format!(
                "source_weight {} outside [0, 1]",
                self.source_weight
            )));
        }
        if !(0.0..=1.0).contains(&self.link_threshold) {
            return Err(Error::Config(format!(
                "link_threshold {} outside [0, 1]",
                self.link_threshold
            )));
        }
        if self.max_hops == 0 {
            return Err(Error::Config("max_hops must be at least 1".into()));
        }
        if self.learner.uses_representation() {
            match self.representation {
                ReprMode::OneHotKg
                    if self.assignments.is_none()
                        && (self.classes.is_none() || self.edges.is_none()) =>
                {
                    return Err(Error::Config(
                        "one_hot_kg needs `assignments` or both `classes` and `edges`".into(),
                    ))
                }
                ReprMode::Dense if self.embeddings.is_none() => {
                    return Err(Error::Config(
                        "dense representation needs `embeddings`".into(),
                    ))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Loaded, filtered inputs with every query vector precomputed.
#[derive(Clone, Debug)]
pub struct PreparedData {
    pub vocab: Vocabulary,
    pub dataset: Dataset,
    pub filter_report: FilterReport,
    pub candidates: Vec<IngredientId>,
    /// `None` when no representation was built (baseline only).
    pub representation: Option<ReprMode>,
    pub train_queries: Vec<FeatureVector>,
    pub validation_queries: Vec<FeatureVector>,
    pub test_queries: Vec<FeatureVector>,
}

/// How to build query vectors for [`PreparedData::new`].
#[derive(Clone, Debug)]
pub enum QuerySpec {
    /// Baseline-only data; queries are empty placeholders.
    None,
    Encode {
        provider: RepresentationProvider,
        source_weight: f64,
        unseen: UnseenPolicy,
    },
}

impl PreparedData {
    /// Filters degenerate examples and encodes every split.
    pub fn new(vocab: Vocabulary, dataset: Dataset, queries: QuerySpec) -> Result<Self> {
        let (dataset, filter_report) = filter_degenerate(dataset);
        let candidates: Vec<IngredientId> = vocab.ids().collect();
        let placeholder = |n: usize| vec![FeatureVector::Sparse(SparseVector::zeros(0)); n];
        let (representation, train_queries, validation_queries, test_queries) = match queries {
            QuerySpec::None => (
                None,
                placeholder(dataset.train.len()),
                placeholder(dataset.validation.len()),
                placeholder(dataset.test.len()),
            ),
            QuerySpec::Encode {
                provider,
                source_weight,
                unseen,
            } => {
                let weights =
                    DescriptiveWeights::compute(dataset.recipe_corpus(), vocab.len(), unseen)
                        .map_err(|e| e.in_stage("descriptive weights"))?;
                let mode = provider.mode();
                let encoder = QueryEncoder {
                    provider,
                    weights,
                    source_weight,
                };
                let enc = |s: &[SubstitutionExample]| {
                    encoder
                        .encode_all(s)
                        .map_err(|e| e.in_stage("encode queries"))
                };
                (
                    Some(mode),
                    enc(&dataset.train)?,
                    enc(&dataset.validation)?,
                    enc(&dataset.test)?,
                )
            }
        };
        Ok(PreparedData {
            vocab,
            dataset,
            filter_report,
            candidates,
            representation,
            train_queries,
            validation_queries,
            test_queries,
        })
    }

    fn split_queries(&self, split: Split) -> &[FeatureVector] {
        match split {
            Split::Train => &self.train_queries,
            Split::Validation => &self.validation_queries,
            Split::Test => &self.test_queries,
        }
    }
}

/// Settings that vary between runs over the same prepared data.
#[derive(Clone, Debug)]
pub struct RunSettings {
    pub learner: LearnerKind,
    pub similarity: Similarity,
    pub policy: Policy,
    pub checkpoints: Vec<Checkpoint>,
    pub runs: usize,
    pub base_seed: u64,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub checkpoints: Vec<usize>,
    pub skipped_checkpoints: Vec<usize>,
    /// One validation curve per run.
    pub validation: Vec<LearningCurve>,
    /// One single-record test curve per run, taken at the last checkpoint.
    pub test: Vec<LearningCurve>,
    pub orders: Vec<Vec<usize>>,
}

impl ExperimentResult {
    pub fn aggregate(&self, split: Split) -> Result<Vec<AggregateRecord>> {
        match split {
            Split::Validation => aggregate_runs(&self.validation),
            Split::Test => aggregate_runs(&self.test),
            Split::Train => Err(Error::Runtime(
                "the training split is never evaluated".into(),
            )),
        }
    }

    /// Mean validation metrics at `examples_seen`, if that checkpoint exists.
    pub fn validation_mean_at(&self, examples_seen: usize) -> Option<AggregateRecord> {
        self.aggregate(Split::Validation)
            .ok()?
            .into_iter()
            .find(|r| r.examples_seen == examples_seen)
    }
}

/// Runs `settings.runs` independent replays of the training split.
pub fn run_curves(data: &PreparedData, settings: &RunSettings) -> Result<ExperimentResult> {
    if settings.learner.uses_representation() && data.representation.is_none() {
        return Err(Error::Config(format!(
            "learner `{}` needs query vectors",
            settings.learner
        )));
    }
    if settings.runs == 0 {
        return Err(Error::Config("runs must be at least 1".into()));
    }
    let train = &data.dataset.train;
    let (checkpoints, skipped) = resolve_checkpoints(&settings.checkpoints, train.len());
    if checkpoints.is_empty() {
        return Err(Error::Config(format!(
            "no checkpoint fits the {} training examples",
            train.len()
        )));
    }
    let last = *checkpoints.last().expect("non-empty");

    let mut result = ExperimentResult {
        checkpoints: checkpoints.clone(),
        skipped_checkpoints: skipped,
        validation: Vec::new(),
        test: Vec::new(),
        orders: Vec::new(),
    };
    for run in 0..settings.runs {
        let seed = settings.base_seed.wrapping_add(run as u64);
        let started = Instant::now();
        let order = settings.policy.order(train, seed);
        let mut learner = new_learner(settings.learner, settings.similarity);
        let mut curve = LearningCurve::new();
        let mut seen = 0;
        for &cp in &checkpoints {
            for &i in &order[seen..cp] {
                learner.train_one(&train[i], &data.train_queries[i]);
            }
            seen = cp;
            let metrics = evaluate(
                learner.as_ref(),
                data.dataset.split(Split::Validation),
                data.split_queries(Split::Validation),
                &data.candidates,
            )
            .map_err(|e| e.in_stage("evaluate validation"))?;
            let record = EvalRecord::new(
                run,
                cp,
                Split::Validation,
                metrics,
                started.elapsed().as_secs_f64(),
            );
            log::info!(
                "run {run} @ {cp}: hit@1 {:.4} hit@10 {:.4} mrr {:.4}",
                record.hit1,
                record.hit10,
                record.mrr
            );
            curve.push(record)?;
        }
        let metrics = evaluate(
            learner.as_ref(),
            data.dataset.split(Split::Test),
            data.split_queries(Split::Test),
            &data.candidates,
        )
        .map_err(|e| e.in_stage("evaluate test"))?;
        let test = LearningCurve::try_from(vec![EvalRecord::new(
            run,
            last,
            Split::Test,
            metrics,
            started.elapsed().as_secs_f64(),
        )])?;
        result.validation.push(curve);
        result.test.push(test);
        result.orders.push(order);
    }
    Ok(result)
}

/// Loads every input named by `config` and prepares query vectors.
pub fn prepare(config: &ExperimentConfig) -> Result<PreparedData> {
    let mut vocab = Vocabulary::load(&config.vocab).map_err(|e| e.in_stage("load vocabulary"))?;
    if let Some(path) = &config.aliases {
        vocab = vocab.with_aliases(AliasMap::load(path).map_err(|e| e.in_stage("load aliases"))?);
    }
    let dataset = load_dataset(&config.dataset, &vocab).map_err(|e| e.in_stage("load dataset"))?;

    let queries = if config.learner.uses_representation() {
        let provider = match config.representation {
            ReprMode::OneHot => RepresentationProvider::one_hot(&vocab),
            ReprMode::OneHotKg => {
                let assignments = load_or_derive_assignments(config, &vocab)?;
                RepresentationProvider::one_hot_kg(&vocab, &assignments)
                    .map_err(|e| e.in_stage("build representation"))?
            }
            ReprMode::Dense => {
                let path = config.embeddings.as_deref().expect("validated");
                RepresentationProvider::dense_from_file(&vocab, path)
                    .map_err(|e| e.in_stage("build representation"))?
            }
        };
        QuerySpec::Encode {
            provider,
            source_weight: config.source_weight,
            unseen: config.unseen_weights,
        }
    } else {
        QuerySpec::None
    };
    PreparedData::new(vocab, dataset, queries)
}

fn load_or_derive_assignments(
    config: &ExperimentConfig,
    vocab: &Vocabulary,
) -> Result<Vec<PropertyAssignment>> {
    if let Some(path) = &config.assignments {
        return knowledge::load_assignments(path).map_err(|e| e.in_stage("load assignments"));
    }
    let (classes, edges) = (
        config.classes.as_deref().expect("validated"),
        config.edges.as_deref().expect("validated"),
    );
    let hierarchy =
        ClassHierarchy::load(classes, edges).map_err(|e| e.in_stage("load hierarchy"))?;
    let options = LinkOptions {
        threshold: config.link_threshold,
        ..Default::default()
    };
    Ok(knowledge::derive_properties(
        vocab,
        &hierarchy,
        options,
        config.max_hops,
    ))
}

/// `sha256("blob <len>\0" ++ content)`, the object id git computes in SHA-256 repositories.
pub fn git_blob_sha256(content: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", content.len()).as_bytes());
    h.update(content);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize)]
struct InputHash {
    role: &'static str,
    path: String,
    blob_sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    config: &'a ExperimentConfig,
    representation_used: bool,
    seeds: Vec<u64>,
    checkpoints: &'a [usize],
    skipped_checkpoints: &'a [usize],
    filter_report: FilterReport,
    train: usize,
    validation: usize,
    test: usize,
    inputs: Vec<InputHash>,
}

/// Everything a finished experiment wrote.
#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub result: ExperimentResult,
    pub run_csvs: Vec<PathBuf>,
    pub aggregate_csv: PathBuf,
    pub manifest: PathBuf,
}

/// Loads inputs, runs every replay, and writes CSVs plus a manifest into `config.out`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let data = prepare(config)?;
    let settings = RunSettings {
        learner: config.learner,
        similarity: config.similarity,
        policy: config.policy,
        checkpoints: config.checkpoints.clone(),
        runs: config.runs,
        base_seed: config.seed,
    };
    let result = run_curves(&data, &settings)?;
    write_outputs(config, &data, result).map_err(|e| e.in_stage("write outputs"))
}

fn write_outputs(
    config: &ExperimentConfig,
    data: &PreparedData,
    result: ExperimentResult,
) -> Result<ExperimentOutput> {
    let out = &config.out;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let labels = RunLabels {
        policy: config.policy.to_string(),
        learner: config.learner.to_string(),
        representation: match data.representation {
            Some(mode) => mode.to_string(),
            None => "none".to_string(),
        },
    };

    let mut run_csvs = Vec::new();
    for (run, (val, test)) in result.validation.iter().zip(&result.test).enumerate() {
        let path = out.join(format!("run_{run}.csv"));
        let records: Vec<EvalRecord> = val
            .records()
            .iter()
            .chain(test.records())
            .cloned()
            .collect();
        write_records_csv(&path, &labels, &records)?;
        run_csvs.push(path);
        if config.dump_order {
            save_order(
                &out.join(format!("order_run_{run}.txt")),
                &result.orders[run],
            )?;
        }
    }

    let mut aggregate = result.aggregate(Split::Validation)?;
    aggregate.extend(result.aggregate(Split::Test)?);
    let aggregate_csv = out.join("aggregate.csv");
    write_aggregate_csv(&aggregate_csv, &labels, &aggregate)?;

    let mut inputs = Vec::new();
    let named = [
        ("dataset", Some(&config.dataset)),
        ("vocab", Some(&config.vocab)),
        ("aliases", config.aliases.as_ref()),
        ("classes", config.classes.as_ref()),
        ("edges", config.edges.as_ref()),
        ("assignments", config.assignments.as_ref()),
        ("embeddings", config.embeddings.as_ref()),
    ];
    for (role, path) in named {
        let Some(path) = path else { continue };
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        inputs.push(InputHash {
            role,
            path: path.display().to_string(),
            blob_sha256: git_blob_sha256(&bytes),
        });
    }
    let manifest = Manifest {
        config,
        representation_used: data.representation.is_some(),
        seeds: (0..config.runs as u64)
            .map(|r| config.seed.wrapping_add(r))
            .collect(),
        checkpoints: &result.checkpoints,
        skipped_checkpoints: &result.skipped_checkpoints,
        filter_report: data.filter_report,
        train: data.dataset.train.len(),
        validation: data.dataset.validation.len(),
        test: data.dataset.test.len(),
        inputs,
    };
    let manifest_path = out.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&manifest_path, text + "\n").map_err(|e| Error::io(&manifest_path, e))?;

    Ok(ExperimentOutput {
        result,
        run_csvs,
        aggregate_csv,
        manifest: manifest_path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoint_parsing() {
        assert_eq!(
            parse_checkpoints("100, 1000,all").unwrap(),
            vec![
                Checkpoint::Count(100),
                Checkpoint::Count(1000),
                Checkpoint::All
            ]
        );
        assert!(parse_checkpoints("ten").is_err());
        assert!(parse_checkpoints(" , ").is_err());
    }

    #[test]
    fn checkpoints_beyond_training_are_skipped() {
        let list = parse_checkpoints("5000,100,all,100").unwrap();
        assert_eq!(
            resolve_checkpoints(&list, 700),
            (vec![100, 700], vec![5000])
        );
    }

    #[test]
    fn config_defaults_and_validation() {
        let cfg = ConfigFile::parse("dataset = \"d.jsonl\"\nvocab = \"v.tsv\"\n")
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!(cfg.runs, 4);
        assert_eq!(cfg.source_weight, 0.9);
        assert_eq!(cfg.learner, LearnerKind::Accumulative);
        assert_eq!(cfg.checkpoints.last(), Some(&Checkpoint::All));

        assert!(ConfigFile::parse("datset = \"x\"").is_err());
        let missing = ConfigFile::parse("vocab = \"v.tsv\"")
            .unwrap()
            .resolve()
            .unwrap_err();
        assert_eq!(missing.kind(), crate::error::ErrorKind::Config);
        let kg =
            ConfigFile::parse("dataset = \"d\"\nvocab = \"v\"\nrepresentation = \"one_hot_kg\"")
                .unwrap()
                .resolve();
        assert!(kg.is_err());
        let baseline_kg =
            ConfigFile::parse("dataset = \"d\"\nvocab = \"v\"\nrepresentation = \"one_hot_kg\"\nlearner = \"baseline\"")
                .unwrap()
                .resolve();
        assert!(baseline_kg.is_ok());
    }

    #[test]
    fn blob_hash_matches_git_framing() {
        // `git hash-object --object-format=sha256` of an empty file.
        assert_eq!(
            git_blob_sha256(b""),
            "473a0f4c3be8a93681a267e3b1e9a7dcda1185436fe141f7749120a303721813"
        );
    }
}
