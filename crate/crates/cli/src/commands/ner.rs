use std::path::{Path, PathBuf};

use log::info;
use seqtag::corpus::{normalize_labels, Dataset, LabelMode, LabelScheme, SourceFormat};
use seqtag::embed::load_vectors;
use seqtag::nn::{NetworkConfig, Precision, Real};
use seqtag::train::{apply_config, render_config, train_ner, EmbeddingInit, TrainConfig};

use crate::cli::NerArgs;
use crate::error::{CliError, CliResult};
use crate::io::{read_dataset, read_text, write_text};
use crate::manifest::{config_map, RunManifest};

pub const PRECISION_ENV: &str = "SEQTAG_PRECISION";

/// Config file first, then explicit flags, then the precision override from the environment.
fn resolve(args: &NerArgs) -> CliResult<(NetworkConfig, TrainConfig)> {
    let mut net = NetworkConfig::default();
    let mut train = TrainConfig::default();
    if let Some(path) = &args.config {
        let text = read_text(path)?;
        apply_config(&text, &mut net, &mut train).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    }
    if let Some(c) = args.cell {
        net.cell = c.into();
    }
    if let Some(b) = args.bidirectional {
        net.bidirectional = b;
    }
    if let Some(l) = args.layers {
        net.layers = l as usize;
    }
    if let Some(h) = args.hidden {
        net.hidden = h;
    }
    if let Some(d) = args.embed_dim {
        net.embed_dim = d;
    }
    if let Some(p) = args.dropout {
        net.dropout = p;
    }
    if let Some(b) = args.batch_size {
        train.batch_size = b;
    }
    if let Some(lr) = args.learning_rate {
        train.learning_rate = lr;
    }
    if let Some(e) = args.epochs {
        train.max_epochs = e;
    }
    if let Some(p) = args.patience {
        train.patience = p;
    }
    if let Some(s) = args.seed {
        train.seed = s;
    }
    if let Some(f) = args.freeze_embeddings {
        train.freeze_embeddings = f;
    }
    if let Ok(p) = std::env::var(PRECISION_ENV) {
        train.precision = p
            .parse::<Precision>()
            .map_err(|_| CliError::usage(format!("{PRECISION_ENV} must be f32 or f64, got `{p}`")))?;
    }
    train.validate()?;
    // Layer count and widths are checked here; input sizes are filled in later.
    let mut probe = net.clone();
    probe.pos_count = 1;
    probe.classes = 2;
    probe.embed_dim = probe.embed_dim.max(1);
    probe.validate()?;
    Ok((net, train))
}

/// IOB input of any flavor is rewritten to IOB2; raw labels are kept.
fn prepare(dataset: Dataset, mode: LabelMode, path: &Path) -> CliResult<Dataset> {
    match dataset.tag_inventory().scheme() {
        LabelScheme::Raw => Ok(dataset),
        LabelScheme::Iob2 => normalize_labels(&dataset, LabelScheme::Iob2, mode)
            .map_err(|e| CliError::data(format!("{}: {e}", path.display()))),
    }
}

pub fn run(argv: &[String], args: NerArgs) -> CliResult<()> {
    let (net, cfg) = resolve(&args)?;
    let source = args.embeddings.clone().or(args.init.clone()).unwrap_or_else(|| "random".to_string());
    let vectors = (source != "random").then(|| PathBuf::from(&source));

    let format = SourceFormat::from(args.format);
    let mode = if args.strict_labels { LabelMode::Strict } else { LabelMode::Lenient };
    let train = prepare(read_dataset(&args.train, format)?, mode, &args.train)?;
    let dev = prepare(read_dataset(&args.dev, format)?, mode, &args.dev)?;

    let mut config = config_map(&render_config(&net, &cfg));
    config.insert("embeddings".to_string(), source.clone());
    config.insert("format".to_string(), args.format.extension().to_string());
    config.insert("strict_labels".to_string(), args.strict_labels.to_string());
    let mut inputs: Vec<&Path> = vec![&args.train, &args.dev];
    if let Some(v) = &vectors {
        inputs.push(v);
    }
    if let Some(c) = &args.config {
        inputs.push(c);
    }
    let manifest_path = args.out.join("run.json");
    let mut manifest = RunManifest::begin(argv, "train-ner", config, Some(cfg.seed), &inputs)?;
    manifest.write(&manifest_path)?;

    let init = match &vectors {
        None => EmbeddingInit::Random,
        Some(path) => {
            let table = load_vectors(path, None, cfg.seed).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
            info!("loaded {} vectors of dimension {}", table.rows(), table.dim());
            EmbeddingInit::Pretrained(table)
        }
    };
    info!(
        "training {} sentences, dev {} sentences, {} precision",
        train.len(),
        dev.len(),
        cfg.precision
    );
    let outputs = match cfg.precision {
        Precision::F32 => fit::<f32>(&train, &dev, &init, &net, &cfg, &args.out)?,
        Precision::F64 => fit::<f64>(&train, &dev, &init, &net, &cfg, &args.out)?,
    };
    manifest.finish(&manifest_path, &outputs)
}

fn fit<T: Real>(
    train: &Dataset,
    dev: &Dataset,
    init: &EmbeddingInit,
    net: &NetworkConfig,
    cfg: &TrainConfig,
    out: &Path,
) -> CliResult<Vec<PathBuf>> {
    let outcome = train_ner::<T>(train, dev, init, net, cfg)?;
    outcome.checkpoint.save(out)?;
    let history = out.join("history.tsv");
    write_text(&history, &outcome.history.to_tsv())?;
    match (outcome.history.best_epoch, outcome.best_dev_f1) {
        (Some(e), Some(f1)) => info!("best dev F1 {:.4} at epoch {e}", f1),
        _ => info!("no epochs run; saved the initial parameters"),
    }
    // The checkpoint is the reproducible output; history.tsv carries wall-clock times.
    let mut files: Vec<PathBuf> = std::fs::read_dir(out)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .filter(|p| !matches!(p.file_name().and_then(|n| n.to_str()), Some("history.tsv" | "run.json")))
        .collect();
    files.sort();
    Ok(files)
}
