use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Dataset, Sentence, TagInventory, Vocabulary, PAD_ID, UNK_ID};
use crate::nn::{Sequence, SequenceBatch, NO_POS};
use crate::{Error, Result};

/// Longest sentence accepted for training.
pub const MAX_SENTENCE_LEN: usize = 512;

/// Maps surface forms, POS tags and labels to ids. Unknown words become UNK and
/// unknown POS tags [`NO_POS`]. Unknown labels are an error when
/// `require_labels` is set and map to `O` otherwise.
pub fn encode_sentence(
    sentence: &Sentence,
    vocab: &Vocabulary,
    tags: &TagInventory,
    require_labels: bool,
) -> Result<Sequence> {
    let mut seq = Sequence {
        words: Vec::with_capacity(sentence.len()),
        pos: Vec::with_capacity(sentence.len()),
        labels: Vec::with_capacity(sentence.len()),
    };
    for token in sentence.tokens() {
        let id = vocab.lookup(&token.surface);
        seq.words.push(if id == PAD_ID { UNK_ID } else { id });
        seq.pos.push(tags.pos_id(&token.pos).unwrap_or(NO_POS));
        let label = match tags.label_id(&token.label) {
            Some(l) => l,
            None if require_labels => {
                return Err(Error::data(format!(
                    "label `{}` is not in the training label set",
                    token.label
                )))
            }
            None => tags.outside_id(),
        };
        seq.labels.push(label);
    }
    Ok(seq)
}

pub fn encode_dataset(
    dataset: &Dataset,
    vocab: &Vocabulary,
    tags: &TagInventory,
    require_labels: bool,
) -> Result<Vec<Sequence>> {
    dataset
        .sentences()
        .iter()
        .map(|s| encode_sentence(s, vocab, tags, require_labels))
        .collect()
}

/// Sentence indices per batch. Sentences are shuffled, sorted by length inside
/// windows of `4 * batch_size`, and cut into batches. Full batches are then
/// shuffled; a smaller remainder batch always comes last.
pub fn batch_plan(lengths: &[usize], batch_size: usize, seed: u64) -> Vec<Vec<usize>> {
    assert!(batch_size >= 1, "batch size must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.shuffle(&mut rng);
    for window in order.chunks_mut(4 * batch_size) {
        window.sort_by_key(|&i| lengths[i]);
    }
    let mut batches: Vec<Vec<usize>> = order.chunks(batch_size).map(<[usize]>::to_vec).collect();
    let remainder = match batches.last() {
        Some(b) if b.len() < batch_size => batches.pop(),
        _ => None,
    };
    batches.shuffle(&mut rng);
    batches.extend(remainder);
    batches
}

pub fn make_batches(
    dataset: &Dataset,
    vocab: &Vocabulary,
    tags: &TagInventory,
    batch_size: usize,
    seed: u64,
) -> Result<Vec<SequenceBatch>> {
    if batch_size == 0 {
        return Err(Error::config("batch_size must be at least 1"));
    }
    for (i, s) in dataset.sentences().iter().enumerate() {
        if s.len() > MAX_SENTENCE_LEN {
            return Err(Error::data(format!(
                "sentence {} has {} tokens, the limit is {MAX_SENTENCE_LEN}",
                i + 1,
                s.len()
            )));
        }
    }
    let seqs = encode_dataset(dataset, vocab, tags, true)?;
    let lengths: Vec<usize> = seqs.iter().map(Sequence::len).collect();
    batch_plan(&lengths, batch_size, seed)
        .into_iter()
        .map(|idx| {
            let group: Vec<Sequence> = idx.iter().map(|&i| seqs[i].clone()).collect();
            SequenceBatch::new(&group)
        })
        .collect()
}
