use std::sync::atomic::{AtomicU64, Ordering};

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hogwild::{derive_seed, SharedTable};
use super::table::{seeded_uniform, EmbeddingTable};
use super::{CorpusSource, TrainedEmbeddings};
use crate::corpus::Vocabulary;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SgnsConfig {
    pub dim: usize,
    pub window: usize,
    /// Noise words per positive pair.
    pub negatives: usize,
    /// Frequent-word subsampling threshold `t`; `None` disables subsampling.
    pub subsample: Option<f64>,
    pub epochs: usize,
    /// Starting learning rate, decayed linearly to 1e-4 of itself.
    pub learning_rate: f64,
    /// Sample the effective window per center word from `1..=window`.
    pub dynamic_window: bool,
    pub seed: u64,
    pub workers: usize,
}

impl Default for SgnsConfig {
    fn default() -> Self {
        SgnsConfig {
            dim: 300,
            window: 5,
            negatives: 5,
            subsample: Some(1e-4),
            epochs: 5,
            learning_rate: 0.025,
            dynamic_window: true,
            seed: 1,
            workers: 1,
        }
    }
}

impl SgnsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::config("dim must be at least 1"));
        }
        if self.window == 0 {
            return Err(Error::config("window must be at least 1"));
        }
        if self.negatives == 0 {
            return Err(Error::config("negatives must be at least 1"));
        }
        if let Some(t) = self.subsample {
            if !(t > 0.0 && t <= 1.0) {
                return Err(Error::config("subsample threshold must lie in (0, 1]"));
            }
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

/// Keep probabilities `min(1, sqrt(t / f(w)))` with `f` the relative frequency.
#[derive(Debug, Clone)]
pub struct Subsampler {
    keep: Vec<f64>,
}

impl Subsampler {
    pub fn new(counts: &[u64], threshold: f64) -> Self {
        let total: u64 = counts.iter().sum();
        let keep = counts
            .iter()
            .map(|&c| {
                if c == 0 || total == 0 {
                    1.0
                } else {
                    let f = c as f64 / total as f64;
                    (threshold / f).sqrt().min(1.0)
                }
            })
            .collect();
        Subsampler { keep }
    }

    pub fn keep_probability(&self, id: u32) -> f64 {
        self.keep.get(id as usize).copied().unwrap_or(1.0)
    }

    fn keep<R: Rng>(&self, id: u32, rng: &mut R) -> bool {
        let p = self.keep_probability(id);
        p >= 1.0 || rng.gen::<f64>() < p
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PairOptions<'a> {
    pub window: usize,
    pub dynamic_window: bool,
    pub subsampler: Option<&'a Subsampler>,
}

/// (center, context) pairs of one sentence. Subsampled tokens are removed
/// before windowing; with `dynamic_window` each center draws its reach from
/// `1..=window`.
pub fn generate_skipgram_pairs<R: Rng>(sentence: &[u32], opts: &PairOptions<'_>, rng: &mut R) -> Vec<(u32, u32)> {
    let kept: Vec<u32> = match opts.subsampler {
        Some(s) => sentence.iter().copied().filter(|&id| s.keep(id, rng)).collect(),
        None => sentence.to_vec(),
    };
    let mut pairs = Vec::new();
    let n = kept.len();
    for i in 0..n {
        let reach = if opts.dynamic_window {
            rng.gen_range(1..=opts.window.max(1))
        } else {
            opts.window
        };
        let lo = i.saturating_sub(reach);
        let hi = (i + reach).min(n.saturating_sub(1));
        for j in lo..=hi {
            if j != i {
                pairs.push((kept[i], kept[j]));
            }
        }
    }
    pairs
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

struct SgnsModel {
    input: SharedTable,
    output: SharedTable,
    dim: usize,
}

impl SgnsModel {
    /// One stochastic step on a positive pair and its noise words; returns the loss.
    fn step(&self, center: u32, context: u32, noise: &[u32], lr: f64, grad: &mut [f64]) -> f64 {
        let dim = self.dim;
        let w = center as usize * dim;
        grad.fill(0.0);
        let mut loss = 0.0;
        let targets = std::iter::once((context, 1.0)).chain(
            noise.iter().filter(|&&n| n != context).map(|&n| (n, 0.0)),
        );
        for (target, label) in targets {
            let u = target as usize * dim;
            let score = self.input.dot(w, &self.output, u, dim);
            loss += if label > 0.0 { softplus(-score) } else { softplus(score) };
            let g = (label - sigmoid(score)) * lr;
            for k in 0..dim {
                grad[k] += g * self.output.get(u + k);
                self.output.add(u + k, g * self.input.get(w + k));
            }
        }
        for (k, g) in grad.iter().enumerate() {
            self.input.add(w + k, *g);
        }
        loss
    }
}

/// Skip-gram with negative sampling. Noise words are drawn from the unigram
/// distribution raised to 0.75; reserved ids never take part in training.
/// Returns the input (center) vectors with a zero PAD row.
pub fn train_sgns<C: CorpusSource + ?Sized>(corpus: &C, vocab: &Vocabulary, cfg: &SgnsConfig) -> Result<TrainedEmbeddings> {
    cfg.validate()?;
    let real_words = vocab.len().saturating_sub(2);
    if real_words < cfg.negatives + 1 {
        return Err(Error::data("too few words for negative sampling"));
    }

    let dim = cfg.dim;
    let rows = vocab.len();
    let init = seeded_uniform(rows, dim, cfg.seed);
    if cfg.epochs == 0 {
        return Ok(TrainedEmbeddings {
            table: EmbeddingTable::new(vocab.clone(), dim, init)?,
            epoch_losses: Vec::new(),
        });
    }

    let weights: Vec<f64> = vocab.counts()[2..].iter().map(|&c| (c.max(1) as f64).powf(0.75)).collect();
    let noise = WeightedIndex::new(&weights).map_err(|e| Error::data(format!("noise distribution: {e}")))?;
    let subsampler = cfg.subsample.map(|t| Subsampler::new(vocab.counts(), t));

    let mut total_words = 0u64;
    corpus.visit_all(&mut |s| total_words += s.iter().filter(|&&id| !Vocabulary::is_reserved(id)).count() as u64)?;
    if total_words == 0 {
        return Err(Error::data("corpus contains no in-vocabulary words"));
    }
    let planned = (total_words * cfg.epochs as u64) as f64;

    let model = SgnsModel {
        input: SharedTable::from_vec(init),
        output: SharedTable::from_vec(vec![0.0; rows * dim]),
        dim,
    };
    let processed = AtomicU64::new(0);
    let mut epoch_losses = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        let run_worker = |worker: usize| -> Result<(f64, u64)> {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, epoch as u64 + 1, worker as u64));
            let opts = PairOptions {
                window: cfg.window,
                dynamic_window: cfg.dynamic_window,
                subsampler: subsampler.as_ref(),
            };
            let mut grad = vec![0.0; dim];
            let mut negatives = vec![0u32; cfg.negatives];
            let mut words = Vec::new();
            let (mut loss, mut pairs) = (0.0, 0u64);
            corpus.visit(worker, cfg.workers, &mut |sentence| {
                words.clear();
                words.extend(sentence.iter().copied().filter(|&id| !Vocabulary::is_reserved(id)));
                let done = processed.fetch_add(words.len() as u64, Ordering::Relaxed) as f64;
                let lr = cfg.learning_rate * (1.0 - done / planned).max(1e-4);
                for (center, context) in generate_skipgram_pairs(&words, &opts, &mut rng) {
                    for n in negatives.iter_mut() {
                        *n = noise.sample(&mut rng) as u32 + 2;
                    }
                    loss += model.step(center, context, &negatives, lr, &mut grad);
                    pairs += 1;
                }
            })?;
            Ok((loss, pairs))
        };

        let results: Vec<Result<(f64, u64)>> = if cfg.workers == 1 {
            vec![run_worker(0)]
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..cfg.workers).map(|w| scope.spawn(move || run_worker(w))).collect();
                handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
            })
        };
        let (mut loss, mut pairs) = (0.0, 0u64);
        for r in results {
            let (l, p) = r?;
            loss += l;
            pairs += p;
        }
        let mean = if pairs == 0 { 0.0 } else { loss / pairs as f64 };
        log::info!("sgns epoch {}: mean loss {mean:.5} over {pairs} pairs", epoch + 1);
        epoch_losses.push(mean);
    }

    let mut table = EmbeddingTable::new(vocab.clone(), dim, model.input.into_vec())?;
    table.zero_pad_row();
    Ok(TrainedEmbeddings { table, epoch_losses })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixed(window: usize) -> PairOptions<'static> {
        PairOptions {
            window,
            dynamic_window: false,
            subsampler: None,
        }
    }

    #[test]
    fn window_one_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let pairs = generate_skipgram_pairs(&[1, 2, 3], &fixed(1), &mut rng);
        assert_eq!(pairs, vec![(1, 2), (2, 1), (2, 3), (3, 2)]);
    }

    #[test]
    fn single_token_has_no_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(generate_skipgram_pairs(&[4], &fixed(3), &mut rng).is_empty());
        assert!(generate_skipgram_pairs(&[], &fixed(3), &mut rng).is_empty());
    }

    #[test]
    fn dynamic_window_stays_within_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let sentence: Vec<u32> = (0..20).collect();
        let opts = PairOptions {
            window: 3,
            dynamic_window: true,
            subsampler: None,
        };
        let pairs = generate_skipgram_pairs(&sentence, &opts, &mut rng);
        assert!(pairs.iter().all(|&(a, b)| a != b && (a as i64 - b as i64).abs() <= 3));
        assert!(pairs.len() < generate_skipgram_pairs(&sentence, &fixed(3), &mut rng).len());
    }

    #[test]
    fn subsampling_keep_probability() {
        let s = Subsampler::new(&[0, 0, 90, 10], 0.01);
        assert!((s.keep_probability(2) - (0.01f64 / 0.9).sqrt()).abs() < 1e-12);
        assert!((s.keep_probability(3) - (0.1f64).sqrt()).abs() < 1e-12);
        assert_eq!(s.keep_probability(0), 1.0);
    }

    #[test]
    fn softplus_is_stable() {
        assert!((softplus(0.0) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(softplus(1000.0), 1000.0);
        assert!(softplus(-1000.0) >= 0.0);
    }

    #[test]
    fn config_validation() {
        let bad = SgnsConfig { window: 0, ..SgnsConfig::default() };
        assert!(bad.validate().is_err());
        let bad = SgnsConfig { subsample: Some(0.0), ..SgnsConfig::default() };
        assert!(bad.validate().is_err());
    }
}
