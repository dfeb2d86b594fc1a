use std::collections::BTreeMap;
use std::time::Instant;

use log::info;
use seqtag::embed::{build_cooccurrence, save_vectors, train_glove, train_sgns, GloveConfig, SgnsConfig, TextCorpus};

use crate::cli::{EmbeddingArgs, Method};
use crate::error::{CliError, CliResult};
use crate::io::sidecar;
use crate::manifest::RunManifest;

pub fn run(argv: &[String], args: EmbeddingArgs) -> CliResult<()> {
    if !args.corpus.is_file() {
        return Err(CliError::data(format!("{}: corpus file not found", args.corpus.display())));
    }
    let (sgns, glove) = configs(&args);
    // Validate before touching the corpus so flag mistakes exit as usage errors.
    match args.method {
        Method::Sgns => sgns.validate()?,
        Method::Glove => glove.validate()?,
    }
    if args.min_count == 0 {
        return Err(CliError::usage("--min-count must be at least 1"));
    }

    let mut config = BTreeMap::new();
    config.insert("method".to_string(), format!("{:?}", args.method).to_lowercase());
    config.insert("min_count".to_string(), args.min_count.to_string());
    match args.method {
        Method::Sgns => config.extend(debug_fields(&format!("{sgns:?}"))),
        Method::Glove => config.extend(debug_fields(&format!("{glove:?}"))),
    }
    let manifest_path = args.manifest.clone().unwrap_or_else(|| sidecar(&args.out));
    let mut manifest = RunManifest::begin(argv, "train-embeddings", config, Some(args.seed), &[&args.corpus])?;
    manifest.write(&manifest_path)?;

    let start = Instant::now();
    let vocab = TextCorpus::scan_vocab(&args.corpus, args.min_count)?;
    info!("vocabulary: {} words (min_count {})", vocab.len(), args.min_count);
    let corpus = TextCorpus::new(&args.corpus, vocab.clone());
    let trained = match args.method {
        Method::Sgns => train_sgns(&corpus, &vocab, &sgns)?,
        Method::Glove => {
            let x = build_cooccurrence(&corpus, glove.window, glove.workers)?;
            info!("co-occurrence table: {} non-zero entries", x.len());
            train_glove(&x, &vocab, &glove)?
        }
    };
    save_vectors(&trained.table, &args.out)?;
    info!("wrote {} vectors to {} in {:.1}s", trained.table.rows(), args.out.display(), start.elapsed().as_secs_f64());
    manifest.finish(&manifest_path, &[args.out.clone()])
}

fn configs(args: &EmbeddingArgs) -> (SgnsConfig, GloveConfig) {
    let sd = SgnsConfig::default();
    let gd = GloveConfig::default();
    let sgns = SgnsConfig {
        dim: args.dim,
        window: args.window,
        negatives: args.negatives,
        subsample: (args.subsample > 0.0).then_some(args.subsample),
        epochs: args.epochs.unwrap_or(sd.epochs),
        learning_rate: args.learning_rate.unwrap_or(sd.learning_rate),
        dynamic_window: args.dynamic_window,
        seed: args.seed,
        workers: args.workers,
    };
    let glove = GloveConfig {
        dim: args.dim,
        window: args.window,
        x_max: args.x_max,
        alpha: args.alpha,
        epochs: args.epochs.unwrap_or(gd.epochs),
        learning_rate: args.learning_rate.unwrap_or(gd.learning_rate),
        seed: args.seed,
        workers: args.workers,
    };
    (sgns, glove)
}

/// `Name { a: 1, b: Some(2) }` into `a -> 1`, `b -> Some(2)`.
fn debug_fields(debug: &str) -> BTreeMap<String, String> {
    let inner = debug.split_once('{').map_or("", |(_, rest)| rest.trim_end_matches('}'));
    inner
        .split(", ")
        .filter_map(|kv| kv.split_once(": "))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}
