use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use crate::corpus::Vocabulary;
use crate::{Error, Result};

/// A re-readable stream of sentences of word ids. Trainers make one pass per
/// epoch and never hold more than one sentence at a time.
pub trait CorpusSource: Sync {
    /// Visits the sentences with `index % shards == shard`, in order.
    fn visit(&self, shard: usize, shards: usize, f: &mut dyn FnMut(&[u32])) -> Result<()>;

    fn visit_all(&self, f: &mut dyn FnMut(&[u32])) -> Result<()> {
        self.visit(0, 1, f)
    }
}

impl CorpusSource for [Vec<u32>] {
    fn visit(&self, shard: usize, shards: usize, f: &mut dyn FnMut(&[u32])) -> Result<()> {
        for sentence in self.iter().skip(shard).step_by(shards.max(1)) {
            f(sentence);
        }
        Ok(())
    }
}

impl CorpusSource for Vec<Vec<u32>> {
    fn visit(&self, shard: usize, shards: usize, f: &mut dyn FnMut(&[u32])) -> Result<()> {
        self.as_slice().visit(shard, shards, f)
    }
}

/// Whitespace-tokenized text file, one sentence per line, encoded on the fly.
#[derive(Debug, Clone)]
pub struct TextCorpus {
    path: PathBuf,
    vocab: Vocabulary,
}

impl TextCorpus {
    pub fn new(path: impl Into<PathBuf>, vocab: Vocabulary) -> Self {
        TextCorpus {
            path: path.into(),
            vocab,
        }
    }

    /// Streams the file once to count words.
    pub fn scan_vocab(path: impl AsRef<Path>, min_count: u64) -> Result<Vocabulary> {
        let reader = BufReader::new(File::open(path)?);
        let mut counts: HashMap<String, u64> = HashMap::new();
        for line in reader.lines() {
            for w in line?.split_whitespace() {
                match counts.get_mut(w) {
                    Some(c) => *c += 1,
                    None => {
                        counts.insert(w.to_string(), 1);
                    }
                }
            }
        }
        if counts.is_empty() {
            return Err(Error::data("corpus is empty"));
        }
        Vocabulary::from_counts(counts, min_count)
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }
}

impl CorpusSource for TextCorpus {
    fn visit(&self, shard: usize, shards: usize, f: &mut dyn FnMut(&[u32])) -> Result<()> {
        let reader = BufReader::new(File::open(&self.path)?);
        let mut ids = Vec::new();
        let mut index = 0usize;
        for line in reader.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            if index % shards.max(1) == shard {
                ids.clear();
                ids.extend(line.split_whitespace().map(|w| self.vocab.lookup(w)));
                f(&ids);
            }
            index += 1;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sharding_partitions_sentences() {
        let corpus: Vec<Vec<u32>> = (0..7).map(|i| vec![i]).collect();
        let mut seen = Vec::new();
        for shard in 0..3 {
            corpus.visit(shard, 3, &mut |s| seen.push(s[0])).unwrap();
        }
        seen.sort();
        assert_eq!(seen, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn text_corpus_streams_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        std::fs::write(&path, "a b a\n\nc a\n").unwrap();
        let vocab = TextCorpus::scan_vocab(&path, 1).unwrap();
        assert_eq!(vocab.words()[2], "a");
        let corpus = TextCorpus::new(&path, vocab.clone());
        let mut lens = Vec::new();
        corpus.visit_all(&mut |s| lens.push(s.len())).unwrap();
        assert_eq!(lens, vec![3, 2]);
    }
}
