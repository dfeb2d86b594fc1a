use std::collections::BTreeMap;
use std::time::Instant;

use log::info;

use super::{adam_step, batch_plan, encode_dataset, EpochRecord, TrainConfig, TrainHistory, MAX_SENTENCE_LEN};
use crate::corpus::{Dataset, LabelScheme, TagInventory, Vocabulary};
use crate::embed::{derive_seed, seeded_uniform, EmbeddingTable};
use crate::eval::{chunk_prf, token_prf};
use crate::nn::{Checkpoint, Matrix, Mode, Network, NetworkConfig, ParamStore, Real, Sequence, SequenceBatch};
use crate::{Error, Result};

/// Global gradient-norm ceiling applied before every update.
pub const CLIP_NORM: f64 = 5.0;

#[derive(Debug, Clone)]
pub enum EmbeddingInit {
    /// Seeded uniform draw in `±0.5/d` with `d = NetworkConfig::embed_dim`.
    Random,
    Pretrained(EmbeddingTable),
}

#[derive(Debug, Clone)]
pub struct TrainOutcome<T> {
    /// Parameters of the epoch with the best dev score.
    pub checkpoint: Checkpoint<T>,
    pub history: TrainHistory,
    /// Dev score of the selected epoch under the scheme's selection metric.
    pub best_dev_f1: Option<f64>,
    /// Parameters after the last completed epoch.
    pub final_params: ParamStore<T>,
}

struct DevSet {
    batches: Vec<SequenceBatch>,
    gold: Vec<Vec<String>>,
}

fn check_dev_labels(train: &TagInventory, dev: &Dataset) -> Result<()> {
    for label in dev.tag_inventory().ne_labels() {
        if train.label_id(label).is_none() {
            return Err(Error::data(format!(
                "tag mismatch: dev label `{label}` does not occur in the training data"
            )));
        }
    }
    Ok(())
}

/// Trains a tagger on `train`, selecting the epoch with the best dev score.
/// `net` supplies the architecture; its `embed_dim`, `pos_count` and
/// `classes` are filled in from the embeddings and the training data.
pub fn train_ner<T: Real>(
    train: &Dataset,
    dev: &Dataset,
    init: &EmbeddingInit,
    net: &NetworkConfig,
    cfg: &TrainConfig,
) -> Result<TrainOutcome<T>> {
    cfg.validate()?;
    if train.is_empty() {
        return Err(Error::data("training set is empty"));
    }
    if dev.is_empty() {
        return Err(Error::data("dev set is empty"));
    }
    let tags = train.tag_inventory().clone();
    check_dev_labels(&tags, dev)?;
    for (name, ds) in [("training", train), ("dev", dev)] {
        if let Some((i, s)) = ds.sentences().iter().enumerate().find(|(_, s)| s.len() > MAX_SENTENCE_LEN) {
            return Err(Error::data(format!(
                "{name} sentence {} has {} tokens, the limit is {MAX_SENTENCE_LEN}",
                i + 1,
                s.len()
            )));
        }
    }

    let train_vocab = Vocabulary::from_dataset(train, 1)?;
    let (vocab, dim, emb_values) = match init {
        EmbeddingInit::Random => {
            let dim = net.embed_dim;
            if dim == 0 {
                return Err(Error::config("embedding dimension must be positive"));
            }
            let values = seeded_uniform(train_vocab.len(), dim, cfg.seed);
            (train_vocab, dim, values)
        }
        EmbeddingInit::Pretrained(table) => {
            // Training words missing from the pretrained table get rows of their
            // own; the trainable embedding can then still learn them.
            let vocab = table.vocab().extended_with(&train_vocab);
            let dim = table.dim();
            let mut values = seeded_uniform(vocab.len(), dim, cfg.seed);
            values[..table.as_slice().len()].copy_from_slice(table.as_slice());
            values[..dim].fill(0.0);
            (vocab, dim, values)
        }
    };

    let mut config = net.clone();
    config.embed_dim = dim;
    config.pos_count = tags.pos_count();
    config.classes = tags.label_count();
    config.validate()?;

    let emb = Matrix::from_vec(vocab.len(), dim, emb_values.iter().map(|&x| T::lit(x)).collect())?;
    let (network, mut store) = Network::init(config.clone(), emb, cfg.seed)?;
    store.set_frozen(network.embedding_id(), cfg.freeze_embeddings);

    let train_seqs = encode_dataset(train, &vocab, &tags, true)?;
    let lengths: Vec<usize> = train_seqs.iter().map(Sequence::len).collect();
    let dev_seqs = encode_dataset(dev, &vocab, &tags, true)?;
    let dev_set = DevSet {
        batches: dev_seqs
            .chunks(cfg.batch_size)
            .map(SequenceBatch::new)
            .collect::<Result<_>>()?,
        gold: dev.labels(),
    };
    let scheme = tags.scheme();

    let mut metadata = BTreeMap::new();
    metadata.insert("label_scheme".to_string(), scheme.as_str().to_string());
    metadata.insert("seed".to_string(), cfg.seed.to_string());
    metadata.insert(
        "embeddings".to_string(),
        match init {
            EmbeddingInit::Random => "random",
            EmbeddingInit::Pretrained(_) => "pretrained",
        }
        .to_string(),
    );
    metadata.insert(
        "selection_metric".to_string(),
        match scheme {
            LabelScheme::Iob2 => "chunk_f1",
            LabelScheme::Raw => "token_f1",
        }
        .to_string(),
    );

    let mut history = TrainHistory::default();
    let mut best: Option<(f64, ParamStore<T>)> = None;
    let mut since_best = 0;
    let adam = cfg.adam();

    for epoch in 1..=cfg.max_epochs {
        let start = Instant::now();
        let plan = batch_plan(&lengths, cfg.batch_size, derive_seed(cfg.seed, epoch as u64, 0xba7c));
        let mut loss_sum = 0.0;
        let mut tokens = 0usize;
        for (bi, idx) in plan.iter().enumerate() {
            let group: Vec<Sequence> = idx.iter().map(|&i| train_seqs[i].clone()).collect();
            let batch = SequenceBatch::new(&group)?;
            let out = network.forward_backward(
                &mut store,
                &batch,
                Mode::Train,
                derive_seed(cfg.seed, epoch as u64, bi as u64 + 1),
            )?;
            loss_sum += out.loss * out.tokens as f64;
            tokens += out.tokens;
            store.clip_grad_norm(CLIP_NORM);
            adam_step(&mut store, &adam)?;
        }
        let (token_f1, chunk_f1) = evaluate_dev(&network, &store, &dev_set, &tags)?;
        let record = EpochRecord {
            epoch,
            train_loss: loss_sum / tokens.max(1) as f64,
            dev_token_f1: token_f1,
            dev_chunk_f1: chunk_f1,
            seconds: start.elapsed().as_secs_f64(),
        };
        info!(
            "epoch {epoch}: loss {:.5}, dev token F1 {:.4}, dev chunk F1 {}",
            record.train_loss,
            token_f1,
            chunk_f1.map_or("NA".to_string(), |f| format!("{f:.4}"))
        );
        history.records.push(record);

        let score = chunk_f1.unwrap_or(token_f1);
        if best.as_ref().map_or(true, |(b, _)| score > *b) {
            best = Some((score, store.clone()));
            history.best_epoch = Some(epoch);
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= cfg.patience {
                info!("no dev improvement for {} epochs, stopping", cfg.patience);
                break;
            }
        }
    }

    let best_dev_f1 = best.as_ref().map(|(s, _)| *s);
    let best_store = best.map_or_else(|| store.clone(), |(_, s)| s);
    if let Some(e) = history.best_epoch {
        metadata.insert("best_epoch".to_string(), e.to_string());
    }
    let checkpoint = Checkpoint {
        config,
        store: best_store,
        vocab,
        tags,
        metadata,
    };
    Ok(TrainOutcome {
        checkpoint,
        history,
        best_dev_f1,
        final_params: store,
    })
}

fn evaluate_dev<T: Real>(
    network: &Network,
    store: &ParamStore<T>,
    dev: &DevSet,
    tags: &TagInventory,
) -> Result<(f64, Option<f64>)> {
    let mut pred: Vec<Vec<String>> = Vec::with_capacity(dev.gold.len());
    for batch in &dev.batches {
        for row in network.predict(store, batch)? {
            pred.push(row.into_iter().map(|id| tags.label(id).to_string()).collect());
        }
    }
    let token = token_prf(&dev.gold, &pred)?.total.f1;
    let chunk = match tags.scheme() {
        LabelScheme::Iob2 => Some(chunk_prf(&dev.gold, &pred)?.total.f1),
        LabelScheme::Raw => None,
    };
    Ok((token, chunk))
}
