use std::collections::HashMap;

use super::Dataset;
use crate::{Error, Result};

pub const PAD: &str = "<pad>";
pub const UNK: &str = "<unk>";
pub const PAD_ID: u32 = 0;
pub const UNK_ID: u32 = 1;

/// Word ↔ id map. Ids 0 and 1 are the reserved `PAD` and `UNK` symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
    counts: Vec<u64>,
    index: HashMap<String, u32>,
    min_count: u64,
}

/// Counts `tokens` and keeps words seen at least `min_count` times, ordered by
/// descending frequency with lexicographic tie-breaking.
pub fn build_vocab<I>(tokens: I, min_count: u64) -> Result<Vocabulary>
where
    I: IntoIterator,
    I::Item: AsRef<str>,
{
    if min_count < 1 {
        return Err(Error::config("min_count must be at least 1"));
    }
    let mut counts: HashMap<String, u64> = HashMap::new();
    let mut seen = 0usize;
    for token in tokens {
        seen += 1;
        let token = token.as_ref();
        if token == PAD || token == UNK {
            continue;
        }
        match counts.get_mut(token) {
            Some(c) => *c += 1,
            None => {
                counts.insert(token.to_string(), 1);
            }
        }
    }
    if seen == 0 {
        return Err(Error::data("cannot build a vocabulary from empty input"));
    }
    Vocabulary::from_counts(counts, min_count)
}

impl Vocabulary {
    /// Applies the `min_count` filter and the frequency/lexicographic ordering
    /// to precomputed counts.
    pub fn from_counts(counts: HashMap<String, u64>, min_count: u64) -> Result<Self> {
        if min_count < 1 {
            return Err(Error::config("min_count must be at least 1"));
        }
        let mut entries: Vec<(String, u64)> = counts
            .into_iter()
            .filter(|(w, c)| *c >= min_count && w != PAD && w != UNK)
            .collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        Ok(Vocabulary::from_entries(entries, min_count))
    }

    fn from_entries(entries: Vec<(String, u64)>, min_count: u64) -> Self {
        let mut words = vec![PAD.to_string(), UNK.to_string()];
        let mut counts = vec![0, 0];
        for (w, c) in entries {
            words.push(w);
            counts.push(c);
        }
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        Vocabulary {
            words,
            counts,
            index,
            min_count,
        }
    }

    pub fn from_dataset(dataset: &Dataset, min_count: u64) -> Result<Self> {
        build_vocab(
            dataset.sentences().iter().flat_map(|s| s.tokens().iter().map(|t| t.surface.as_str())),
            min_count,
        )
    }

    /// Builds a vocabulary that keeps the given word order after the reserved ids.
    /// Frequencies are unknown, so every word gets count 1. Reserved symbols and
    /// duplicates in `words` are skipped.
    pub fn from_ordered<I>(words: I) -> Self
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        let mut seen = std::collections::HashSet::new();
        let entries = words
            .into_iter()
            .filter_map(|w| {
                let w = w.as_ref();
                (w != PAD && w != UNK && seen.insert(w.to_string())).then(|| (w.to_string(), 1))
            })
            .collect();
        Self::from_entries(entries, 1)
    }

    /// Rebuilds a vocabulary from `(word, count)` pairs in id order, reserved ids
    /// excluded. Used when restoring a saved model.
    pub fn from_parts(entries: Vec<(String, u64)>, min_count: u64) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (w, _) in &entries {
            if w == PAD || w == UNK {
                return Err(Error::data(format!("reserved symbol `{w}` listed as a word")));
            }
            if !seen.insert(w.as_str()) {
                return Err(Error::data(format!("duplicate vocabulary entry `{w}`")));
            }
        }
        Ok(Self::from_entries(entries, min_count))
    }

    /// This vocabulary followed by the words of `other` it lacks.
    pub fn extended_with(&self, other: &Vocabulary) -> Vocabulary {
        let mut entries: Vec<(String, u64)> = self.words[2..]
            .iter()
            .cloned()
            .zip(self.counts[2..].iter().copied())
            .collect();
        for (w, c) in other.words[2..].iter().zip(&other.counts[2..]) {
            if !self.index.contains_key(w) {
                entries.push((w.clone(), *c));
            }
        }
        Self::from_entries(entries, self.min_count.min(other.min_count))
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.len() <= 2
    }

    pub fn id(&self, word: &str) -> Option<u32> {
        self.index.get(word).copied()
    }

    /// Id of `word`, or `UNK_ID` when absent.
    pub fn lookup(&self, word: &str) -> u32 {
        self.id(word).unwrap_or(UNK_ID)
    }

    pub fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn count(&self, id: u32) -> u64 {
        self.counts[id as usize]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn min_count(&self) -> u64 {
        self.min_count
    }

    pub fn is_reserved(id: u32) -> bool {
        id == PAD_ID || id == UNK_ID
    }

    /// Maps whitespace-separated `text` to ids, unknown words to `UNK_ID`.
    pub fn encode(&self, text: &str) -> Vec<u32> {
        text.split_whitespace().map(|w| self.lookup(w)).collect()
    }
}
