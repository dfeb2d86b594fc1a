use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::hogwild::{derive_seed, SharedTable};
use super::table::{seeded_uniform, EmbeddingTable};
use super::{CooccurrenceTable, TrainedEmbeddings};
use crate::corpus::Vocabulary;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GloveConfig {
    pub dim: usize,
    /// Window used when the co-occurrence table is built.
    pub window: usize,
    pub x_max: f64,
    pub alpha: f64,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for GloveConfig {
    fn default() -> Self {
        GloveConfig {
            dim: 300,
            window: 5,
            x_max: 100.0,
            alpha: 0.75,
            epochs: 25,
            learning_rate: 0.05,
            seed: 1,
            workers: 1,
        }
    }
}

impl GloveConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::config("dim must be at least 1"));
        }
        if self.window == 0 {
            return Err(Error::config("window must be at least 1"));
        }
        if !(self.x_max > 0.0) {
            return Err(Error::config("x_max must be positive"));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::config("alpha must lie in (0, 1]"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::config("learning rate must be positive"));
        }
        if self.workers == 0 {
            return Err(Error::config("workers must be at least 1"));
        }
        Ok(())
    }
}

/// `(x / x_max)^alpha` below `x_max`, 1 from there on.
pub fn glove_weight(x: f64, x_max: f64, alpha: f64) -> f64 {
    if x < x_max {
        (x / x_max).powf(alpha)
    } else {
        1.0
    }
}

/// Word vectors, context vectors and both bias vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct GloveParams {
    pub dim: usize,
    pub word: Vec<f64>,
    pub context: Vec<f64>,
    pub word_bias: Vec<f64>,
    pub context_bias: Vec<f64>,
}

impl GloveParams {
    /// Seeded uniform vectors (see [`seeded_uniform`]), zero biases.
    pub fn init(rows: usize, dim: usize, seed: u64) -> Self {
        GloveParams {
            dim,
            word: seeded_uniform(rows, dim, seed),
            context: seeded_uniform(rows, dim, derive_seed(seed, 0, 1)),
            word_bias: vec![0.0; rows],
            context_bias: vec![0.0; rows],
        }
    }

    /// Exported table rows: `word + context`.
    pub fn summed(&self) -> Vec<f64> {
        self.word.iter().zip(&self.context).map(|(a, b)| a + b).collect()
    }
}

/// `sum f(X_ij) (w_i . w~_j + b_i + b~_j - ln X_ij)^2` over the non-zero entries.
pub fn glove_objective(x: &CooccurrenceTable, params: &GloveParams, cfg: &GloveConfig) -> f64 {
    let d = params.dim;
    x.sorted_entries()
        .into_iter()
        .filter(|e| e.2 > 0.0)
        .map(|(i, j, v)| {
            let (i, j) = (i as usize, j as usize);
            let dot: f64 = (0..d).map(|k| params.word[i * d + k] * params.context[j * d + k]).sum();
            let diff = dot + params.word_bias[i] + params.context_bias[j] - v.ln();
            glove_weight(v, cfg.x_max, cfg.alpha) * diff * diff
        })
        .sum()
}

struct Shared {
    word: SharedTable,
    context: SharedTable,
    word_bias: SharedTable,
    context_bias: SharedTable,
    word_sq: SharedTable,
    context_sq: SharedTable,
    word_bias_sq: SharedTable,
    context_bias_sq: SharedTable,
}

impl Shared {
    fn new(p: GloveParams) -> Self {
        let (n_vec, n_bias) = (p.word.len(), p.word_bias.len());
        Shared {
            word: SharedTable::from_vec(p.word),
            context: SharedTable::from_vec(p.context),
            word_bias: SharedTable::from_vec(p.word_bias),
            context_bias: SharedTable::from_vec(p.context_bias),
            word_sq: SharedTable::from_vec(vec![1.0; n_vec]),
            context_sq: SharedTable::from_vec(vec![1.0; n_vec]),
            word_bias_sq: SharedTable::from_vec(vec![1.0; n_bias]),
            context_bias_sq: SharedTable::from_vec(vec![1.0; n_bias]),
        }
    }

    fn snapshot(&self, dim: usize, rows: usize) -> GloveParams {
        let read = |t: &SharedTable, n: usize| (0..n).map(|i| t.get(i)).collect();
        GloveParams {
            dim,
            word: read(&self.word, rows * dim),
            context: read(&self.context, rows * dim),
            word_bias: read(&self.word_bias, rows),
            context_bias: read(&self.context_bias, rows),
        }
    }

    /// Adaptive-gradient step on one entry.
    fn step(&self, i: usize, j: usize, value: f64, dim: usize, cfg: &GloveConfig) {
        let (wi, cj) = (i * dim, j * dim);
        let dot = self.word.dot(wi, &self.context, cj, dim);
        let diff = dot + self.word_bias.get(i) + self.context_bias.get(j) - value.ln();
        let fdiff = glove_weight(value, cfg.x_max, cfg.alpha) * diff;
        let lr = cfg.learning_rate;
        for k in 0..dim {
            let gw = fdiff * self.context.get(cj + k);
            let gc = fdiff * self.word.get(wi + k);
            self.word.add(wi + k, -lr * gw / self.word_sq.get(wi + k).sqrt());
            self.context.add(cj + k, -lr * gc / self.context_sq.get(cj + k).sqrt());
            self.word_sq.add(wi + k, gw * gw);
            self.context_sq.add(cj + k, gc * gc);
        }
        self.word_bias.add(i, -lr * fdiff / self.word_bias_sq.get(i).sqrt());
        self.context_bias.add(j, -lr * fdiff / self.context_bias_sq.get(j).sqrt());
        self.word_bias_sq.add(i, fdiff * fdiff);
        self.context_bias_sq.add(j, fdiff * fdiff);
    }
}

/// Weighted least squares on the non-zero entries of `x`, one shuffled pass per
/// epoch. `epoch_losses` holds the exact objective after every epoch. The
/// exported rows are `word + context` with a zero PAD row.
pub fn train_glove(x: &CooccurrenceTable, vocab: &Vocabulary, cfg: &GloveConfig) -> Result<TrainedEmbeddings> {
    cfg.validate()?;
    let mut entries: Vec<(u32, u32, f64)> = x.sorted_entries().into_iter().filter(|e| e.2 > 0.0).collect();
    if entries.is_empty() {
        return Err(Error::data("co-occurrence table is empty"));
    }
    let rows = vocab.len();
    if let Some(&(i, j, _)) = entries.iter().find(|e| e.0 as usize >= rows || e.1 as usize >= rows) {
        return Err(Error::data(format!("co-occurrence entry ({i}, {j}) is outside the vocabulary")));
    }
    let dim = cfg.dim;
    let params = GloveParams::init(rows, dim, cfg.seed);
    let shared = Shared::new(params);
    let mut epoch_losses = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        entries.shuffle(&mut ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, epoch as u64 + 1, 0)));
        let chunk = entries.len().div_ceil(cfg.workers);
        if cfg.workers == 1 {
            for &(i, j, v) in &entries {
                shared.step(i as usize, j as usize, v, dim, cfg);
            }
        } else {
            std::thread::scope(|scope| {
                for part in entries.chunks(chunk) {
                    let shared = &shared;
                    scope.spawn(move || {
                        for &(i, j, v) in part {
                            shared.step(i as usize, j as usize, v, dim, cfg);
                        }
                    });
                }
            });
        }
        let objective = glove_objective(x, &shared.snapshot(dim, rows), cfg);
        if !objective.is_finite() {
            return Err(Error::NumericalOverflow(format!("GloVe objective diverged in epoch {}", epoch + 1)));
        }
        log::info!("glove epoch {}: objective {objective:.5}", epoch + 1);
        epoch_losses.push(objective);
    }

    let mut table = EmbeddingTable::new(vocab.clone(), dim, shared.snapshot(dim, rows).summed())?;
    table.zero_pad_row();
    Ok(TrainedEmbeddings { table, epoch_losses })
}
