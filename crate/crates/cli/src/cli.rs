use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use seqtag::corpus::{SourceFormat, SplitRatios};
use seqtag::nn::CellType;

#[derive(Debug, Parser)]
#[command(name = "seqtag", version, about = "Word embeddings and recurrent named-entity taggers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Learn word vectors from a whitespace-tokenized corpus, one sentence per line.
    TrainEmbeddings(EmbeddingArgs),
    /// Shuffle an annotated corpus into train/dev/test files.
    Split(SplitArgs),
    /// Train a recurrent tagger and keep the checkpoint with the best dev score.
    TrainNer(NerArgs),
    /// Print token-level and chunk-level precision, recall and F1.
    Evaluate(EvaluateArgs),
    /// Tag a corpus with a trained model and write a 4-column file.
    Predict(PredictArgs),
    /// Repeat the command recorded in a run manifest.
    Rerun(RerunArgs),
    /// Write the synthetic tagging task used by the acceptance suite.
    GenerateSynthetic(SyntheticArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Sgns,
    Glove,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Conll,
    Ssf,
}

impl From<Format> for SourceFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Conll => SourceFormat::Conll,
            Format::Ssf => SourceFormat::Ssf,
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Conll => "conll",
            Format::Ssf => "ssf",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Cell {
    Rnn,
    Lstm,
}

impl From<Cell> for CellType {
    fn from(c: Cell) -> Self {
        match c {
            Cell::Rnn => CellType::Rnn,
            Cell::Lstm => CellType::Lstm,
        }
    }
}

#[derive(Debug, Args)]
pub struct EmbeddingArgs {
    #[arg(long, value_enum, default_value = "sgns")]
    pub method: Method,
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 300)]
    pub dim: usize,
    #[arg(long, default_value_t = 5)]
    pub window: usize,
    /// Defaults to 5 for sgns and 25 for glove.
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Defaults to 0.025 for sgns and 0.05 for glove.
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub min_count: u64,
    #[arg(long, default_value_t = 5)]
    pub negatives: usize,
    /// Frequent-word subsampling threshold; 0 disables it.
    #[arg(long, default_value_t = 1e-4)]
    pub subsample: f64,
    /// Sample the effective window per center word (sgns only).
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub dynamic_window: bool,
    #[arg(long, default_value_t = 100.0)]
    pub x_max: f64,
    #[arg(long, default_value_t = 0.75)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Parallel workers. Results are only reproducible with 1.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Defaults to `<out>.run.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "conll")]
    pub format: Format,
    #[arg(long, default_value = "0.70,0.17,0.13", value_parser = parse_ratios)]
    pub ratios: SplitRatios,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: PathBuf,
}

fn parse_ratios(s: &str) -> Result<SplitRatios, String> {
    s.parse::<SplitRatios>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct NerArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub dev: PathBuf,
    #[arg(long, value_enum, default_value = "conll")]
    pub format: Format,
    /// Vector file, or `random` for seeded uniform initialization.
    #[arg(long, conflicts_with = "init")]
    pub embeddings: Option<String>,
    /// `random` is the same as `--embeddings random`.
    #[arg(long, value_parser = ["random"])]
    pub init: Option<String>,
    /// `key=value` lines; explicit flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub cell: Option<Cell>,
    #[arg(long, action = clap::ArgAction::Set)]
    pub bidirectional: Option<bool>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=2))]
    pub layers: Option<u64>,
    #[arg(long)]
    pub hidden: Option<usize>,
    /// Embedding width for random initialization.
    #[arg(long)]
    pub embed_dim: Option<usize>,
    #[arg(long)]
    pub dropout: Option<f64>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub patience: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, action = clap::ArgAction::Set)]
    pub freeze_embeddings: Option<bool>,
    /// Reject `I-X` tags that do not continue an `X` chunk instead of repairing them.
    #[arg(long)]
    pub strict_labels: bool,
    /// Checkpoint directory; also receives history.tsv and run.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// 4-column file: surface, POS, gold, predicted.
    #[arg(long, conflicts_with_all = ["model", "gold"])]
    pub interchange: Option<PathBuf>,
    #[arg(long, requires = "test")]
    pub model: Option<PathBuf>,
    #[arg(long, requires = "model")]
    pub test: Option<PathBuf>,
    #[arg(long, requires = "pred", conflicts_with = "model")]
    pub gold: Option<PathBuf>,
    #[arg(long, requires = "gold")]
    pub pred: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "conll")]
    pub format: Format,
    /// Tab-separated rows instead of aligned columns.
    #[arg(long)]
    pub machine: bool,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "conll")]
    pub format: Format,
    #[arg(long)]
    pub out: PathBuf,
    /// Defaults to `<out>.run.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RerunArgs {
    pub manifest: PathBuf,
    /// Fail unless the outputs match the digests recorded in the manifest.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct SyntheticArgs {
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub train: usize,
    #[arg(long, default_value_t = 200)]
    pub dev: usize,
    #[arg(long, default_value_t = 200)]
    pub test: usize,
    #[arg(long, default_value_t = 20_000)]
    pub unlabeled: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}
