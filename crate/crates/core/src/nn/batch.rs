use crate::corpus::PAD_ID;
use crate::{Error, Result};

/// POS id for tags outside the training inventory; encoded as an all-zero block.
pub const NO_POS: usize = usize::MAX;

/// One encoded sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub words: Vec<u32>,
    pub pos: Vec<usize>,
    pub labels: Vec<usize>,
}

impl Sequence {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// `B × T` id matrices, right-padded with PAD. Rows are laid out `b * T + t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceBatch {
    batch: usize,
    steps: usize,
    words: Vec<u32>,
    pos: Vec<usize>,
    labels: Vec<usize>,
    mask: Vec<bool>,
    lengths: Vec<usize>,
}

impl SequenceBatch {
    pub fn new(sequences: &[Sequence]) -> Result<Self> {
        if sequences.is_empty() {
            return Err(Error::data("empty batch"));
        }
        let steps = sequences.iter().map(Sequence::len).max().unwrap_or(0);
        let batch = sequences.len();
        let n = batch * steps;
        let mut words = vec![PAD_ID; n];
        let mut pos = vec![0; n];
        let mut labels = vec![0; n];
        let mut mask = vec![false; n];
        let mut lengths = Vec::with_capacity(batch);
        for (b, seq) in sequences.iter().enumerate() {
            if seq.is_empty() {
                return Err(Error::data(format!("sequence {b} in batch is empty")));
            }
            if seq.pos.len() != seq.len() || seq.labels.len() != seq.len() {
                return Err(Error::Shape(format!("sequence {b}: word, POS and label lengths differ")));
            }
            if let Some(t) = seq.words.iter().position(|&w| w == PAD_ID) {
                return Err(Error::data(format!("sequence {b} uses the padding id at position {t}")));
            }
            let base = b * steps;
            words[base..base + seq.len()].copy_from_slice(&seq.words);
            pos[base..base + seq.len()].copy_from_slice(&seq.pos);
            labels[base..base + seq.len()].copy_from_slice(&seq.labels);
            mask[base..base + seq.len()].fill(true);
            lengths.push(seq.len());
        }
        Ok(SequenceBatch {
            batch,
            steps,
            words,
            pos,
            labels,
            mask,
            lengths,
        })
    }

    pub fn batch_size(&self) -> usize {
        self.batch
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn words(&self) -> &[u32] {
        &self.words
    }

    pub fn pos(&self) -> &[usize] {
        &self.pos
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn token_count(&self) -> usize {
        self.lengths.iter().sum()
    }

    /// Overwrites the ids stored at a padded position. Used to check that
    /// nothing downstream reads them.
    pub fn scribble_padding(&mut self, word: u32, pos: usize, label: usize) {
        for i in 0..self.mask.len() {
            if !self.mask[i] {
                self.words[i] = word;
                self.pos[i] = pos;
                self.labels[i] = label;
            }
        }
    }
}
