use crate::corpus::{split_prefix, ChunkPrefix, OUTSIDE};
use crate::{Error, Result};

/// Entity mention covering tokens `start..end`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chunk {
    pub kind: String,
    pub start: usize,
    pub end: usize,
}

/// Maximal `B-X (I-X)*` runs. An `I-X` that does not continue an `X` chunk
/// opens a new one, as the CoNLL scorer does.
pub fn extract_chunks<S: AsRef<str>>(labels: &[S]) -> Result<Vec<Chunk>> {
    let mut chunks = Vec::new();
    let mut open: Option<(&str, usize)> = None;
    for (i, label) in labels.iter().enumerate() {
        let label = label.as_ref();
        if label == OUTSIDE {
            if let Some((kind, start)) = open.take() {
                chunks.push(Chunk { kind: kind.to_string(), start, end: i });
            }
            continue;
        }
        let (prefix, kind) = match split_prefix(label) {
            (Some(p), k) => (p, k),
            (None, _) => return Err(Error::data("chunk extraction requires IOB2")),
        };
        let continues = prefix == ChunkPrefix::Inside && matches!(open, Some((k, _)) if k == kind);
        if !continues {
            if let Some((k, start)) = open.take() {
                chunks.push(Chunk { kind: k.to_string(), start, end: i });
            }
            open = Some((kind, i));
        }
    }
    if let Some((kind, start)) = open {
        chunks.push(Chunk { kind: kind.to_string(), start, end: labels.len() });
    }
    Ok(chunks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chunk(kind: &str, start: usize, end: usize) -> Chunk {
        Chunk { kind: kind.into(), start, end }
    }

    #[test]
    fn basic_runs() {
        let c = extract_chunks(&["B-PER", "I-PER", "O", "B-LOC"]).unwrap();
        assert_eq!(c, vec![chunk("PER", 0, 2), chunk("LOC", 3, 4)]);
    }

    #[test]
    fn all_outside() {
        assert!(extract_chunks(&["O", "O"]).unwrap().is_empty());
        assert!(extract_chunks::<&str>(&[]).unwrap().is_empty());
    }

    #[test]
    fn adjacent_begins_split() {
        let c = extract_chunks(&["B-PER", "B-PER", "I-PER"]).unwrap();
        assert_eq!(c, vec![chunk("PER", 0, 1), chunk("PER", 1, 3)]);
    }

    #[test]
    fn raw_input_rejected() {
        let err = extract_chunks(&["PER", "O"]).unwrap_err();
        assert_eq!(err.to_string(), "chunk extraction requires IOB2");
    }
}
