use super::{split_prefix, ChunkPrefix, Dataset, LabelScheme, OUTSIDE};
use crate::{Error, Result};

/// How IOB conversion treats an `I-X` that does not continue an `X` chunk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelMode {
    /// Rewrite it to `B-X`.
    #[default]
    Lenient,
    /// Reject the input.
    Strict,
}

/// Rewrites every label into `target`. Unprefixed labels and orphan `I-X`
/// tags open a new chunk when the previous token is not of the same type.
pub fn normalize_labels(dataset: &Dataset, target: LabelScheme, mode: LabelMode) -> Result<Dataset> {
    let mut labels = Vec::with_capacity(dataset.len());
    for (s, sentence) in dataset.sentences().iter().enumerate() {
        let row = sentence.labels();
        let converted = match target {
            LabelScheme::Raw => to_raw(&row),
            LabelScheme::Iob2 => to_iob2(&row, mode)
                .map_err(|(t, msg)| Error::data(format!("sentence {}, token {}: {msg}", s + 1, t + 1)))?,
        };
        labels.push(converted);
    }
    dataset.with_labels(&labels)
}

pub(crate) fn to_raw<S: AsRef<str>>(labels: &[S]) -> Vec<String> {
    labels.iter().map(|l| split_prefix(l.as_ref()).1.to_string()).collect()
}

pub(crate) fn to_iob2<S: AsRef<str>>(labels: &[S], mode: LabelMode) -> std::result::Result<Vec<String>, (usize, String)> {
    let mut out = Vec::with_capacity(labels.len());
    let mut prev: Option<&str> = None;
    for (i, label) in labels.iter().enumerate() {
        let label = label.as_ref();
        if label == OUTSIDE {
            out.push(OUTSIDE.to_string());
            prev = None;
            continue;
        }
        let (prefix, kind) = split_prefix(label);
        let continues = prev == Some(kind);
        let begin = match prefix {
            Some(ChunkPrefix::Begin) => true,
            Some(ChunkPrefix::Inside) => {
                if !continues && mode == LabelMode::Strict {
                    return Err((i, format!("`{label}` does not continue a {kind} chunk")));
                }
                !continues
            }
            None => !continues,
        };
        out.push(format!("{}-{kind}", if begin { "B" } else { "I" }));
        prev = Some(kind);
    }
    Ok(out)
}
