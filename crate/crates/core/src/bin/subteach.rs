use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use subteach::knowledge::{self, ClassHierarchy, LinkOptions};
use subteach::runner::{parse_checkpoints, ConfigFile};
use subteach::synth::{self, SynthConfig};
use subteach::{run_experiment, Error, Split, Vocabulary};

#[derive(Parser)]
#[command(
    name = "subteach",
    version,
    about = "Incremental teaching simulator for ingredient substitution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a config file.
    Run(RunArgs),
    /// Generate a synthetic dataset with a known ground truth.
    Synth(SynthArgs),
    /// Link a vocabulary to a class hierarchy and write property assignments.
    Link(LinkArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    learner: Option<String>,
    #[arg(long = "repr")]
    representation: Option<String>,
    #[arg(long)]
    policy: Option<String>,
    #[arg(long)]
    source_weight: Option<f64>,
    /// Comma-separated example counts, `all` for the whole training split.
    #[arg(long)]
    checkpoints: Option<String>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 50)]
    ingredients: usize,
    #[arg(long, default_value_t = 10)]
    classes: usize,
    #[arg(long, default_value_t = 200)]
    recipes: usize,
    #[arg(long, default_value_t = 2858)]
    examples: usize,
    #[arg(long, default_value_t = 20)]
    rules: usize,
    #[arg(long, default_value_t = 1.0)]
    skew: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct LinkArgs {
    #[arg(long)]
    vocab: PathBuf,
    #[arg(long)]
    classes: PathBuf,
    #[arg(long)]
    edges: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = knowledge::DEFAULT_LINK_THRESHOLD)]
    threshold: f64,
    #[arg(long, default_value_t = knowledge::DEFAULT_MAX_HOPS)]
    max_hops: u32,
}

fn run(args: RunArgs) -> Result<(), Error> {
    let mut file = ConfigFile::load(&args.config)?;
    if let Some(c) = &args.checkpoints {
        parse_checkpoints(c)?;
    }
    file.learner = args.learner.or(file.learner);
    file.representation = args.representation.or(file.representation);
    file.policy = args.policy.or(file.policy);
    file.source_weight = args.source_weight.or(file.source_weight);
    file.checkpoints = args.checkpoints.or(file.checkpoints);
    file.runs = args.runs.or(file.runs);
    file.seed = args.seed.or(file.seed);
    file.out = args.out.or(file.out);
    let config = file.resolve()?;
    let output = run_experiment(&config)?;
    for row in output.result.aggregate(Split::Test)? {
        println!(
            "test @ {}: hit@1 {:.4} ± {:.4}  hit@10 {:.4} ± {:.4}  mrr {:.4} ± {:.4}",
            row.examples_seen,
            row.hit1_mean,
            row.hit1_std,
            row.hit10_mean,
            row.hit10_std,
            row.mrr_mean,
            row.mrr_std
        );
    }
    println!("wrote {}", output.aggregate_csv.display());
    Ok(())
}

fn synth(args: SynthArgs) -> Result<(), Error> {
    let data = synth::generate(&SynthConfig {
        n_ingredients: args.ingredients,
        n_classes: args.classes,
        n_recipes: args.recipes,
        n_examples: args.examples,
        n_rules: args.rules,
        skew: args.skew,
        seed: args.seed,
    })?;
    let files = data.write_files(&args.out)?;
    println!(
        "{} ingredients, {} train / {} validation / {} test examples in {}",
        data.vocab.len(),
        data.dataset.train.len(),
        data.dataset.validation.len(),
        data.dataset.test.len(),
        args.out.display()
    );
    println!("dataset: {}", files.dataset.display());
    Ok(())
}

fn link(args: LinkArgs) -> Result<(), Error> {
    let vocab = Vocabulary::load(&args.vocab)?;
    let hierarchy = ClassHierarchy::load(&args.classes, &args.edges)?;
    let options = LinkOptions {
        threshold: args.threshold,
        ..Default::default()
    };
    let assignments = knowledge::derive_properties(&vocab, &hierarchy, options, args.max_hops);
    knowledge::save_assignments(&args.out, &assignments)?;
    println!(
        "{} assignments written to {}",
        assignments.len(),
        args.out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_default_env()
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Synth(a) => synth(a),
        Command::Link(a) => link(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.kind().exit_code() as u8)
        }
    }
}
