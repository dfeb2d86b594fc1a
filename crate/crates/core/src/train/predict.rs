use std::path::Path;

use super::encode_sentence;
use crate::corpus::{Dataset, Sentence};
use crate::nn::{Checkpoint, Network, Real, Sequence, SequenceBatch};
use crate::Result;

/// Sentences tagged per forward pass.
const PREDICT_BATCH: usize = 64;

/// A loaded model ready to label sentences.
#[derive(Debug, Clone)]
pub struct Tagger<T> {
    checkpoint: Checkpoint<T>,
    network: Network,
}

impl<T: Real> Tagger<T> {
    pub fn new(checkpoint: Checkpoint<T>) -> Result<Self> {
        let network = checkpoint.network()?;
        Ok(Tagger { checkpoint, network })
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        Self::new(Checkpoint::load(dir)?)
    }

    pub fn checkpoint(&self) -> &Checkpoint<T> {
        &self.checkpoint
    }

    /// Argmax label per token. Gold labels on the input are ignored.
    pub fn predict(&self, sentences: &[Sentence]) -> Result<Vec<Vec<String>>> {
        let ck = &self.checkpoint;
        let seqs: Vec<Sequence> = sentences
            .iter()
            .map(|s| encode_sentence(s, &ck.vocab, &ck.tags, false))
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(seqs.len());
        for group in seqs.chunks(PREDICT_BATCH) {
            let batch = SequenceBatch::new(group)?;
            for row in self.network.predict(&ck.store, &batch)? {
                out.push(row.into_iter().map(|id| ck.tags.label(id).to_string()).collect());
            }
        }
        Ok(out)
    }

    /// The dataset with every label replaced by the prediction.
    pub fn predict_dataset(&self, dataset: &Dataset) -> Result<Dataset> {
        dataset.with_labels(&self.predict(dataset.sentences())?)
    }
}
