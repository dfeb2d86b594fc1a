use std::collections::{BTreeMap, HashSet};

use super::chunks::{extract_chunks, Chunk};
use crate::corpus::{split_prefix, OUTSIDE};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalLevel {
    Token,
    Chunk,
}

impl EvalLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            EvalLevel::Token => "token",
            EvalLevel::Chunk => "chunk",
        }
    }
}

/// Counts and derived ratios. Ratios with a zero denominator are 0.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Scores {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Scores {
    pub fn from_counts(tp: u64, fp: u64, fn_: u64) -> Self {
        let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Scores {
            tp,
            fp,
            fn_,
            precision,
            recall,
            f1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub level: EvalLevel,
    /// One row per entity type; `O` never appears.
    pub rows: BTreeMap<String, Scores>,
    /// Micro average over all types.
    pub total: Scores,
}

#[derive(Default)]
struct Tally {
    counts: BTreeMap<String, (u64, u64, u64)>,
}

impl Tally {
    fn entry(&mut self, kind: &str) -> &mut (u64, u64, u64) {
        self.counts.entry(kind.to_string()).or_default()
    }

    fn into_report(self, level: EvalLevel) -> EvalReport {
        let (mut tp, mut fp, mut fn_) = (0, 0, 0);
        let rows = self
            .counts
            .into_iter()
            .map(|(kind, (t, p, n))| {
                tp += t;
                fp += p;
                fn_ += n;
                (kind, Scores::from_counts(t, p, n))
            })
            .collect();
        EvalReport {
            level,
            rows,
            total: Scores::from_counts(tp, fp, fn_),
        }
    }
}

fn check_aligned<S: AsRef<str>>(gold: &[Vec<S>], pred: &[Vec<S>]) -> Result<()> {
    if gold.len() != pred.len() {
        return Err(Error::data(format!(
            "misaligned inputs: {} gold sentences, {} predicted",
            gold.len(),
            pred.len()
        )));
    }
    for (i, (g, p)) in gold.iter().zip(pred).enumerate() {
        if g.len() != p.len() {
            return Err(Error::data(format!(
                "misaligned inputs: sentence {} has {} gold and {} predicted labels",
                i + 1,
                g.len(),
                p.len()
            )));
        }
    }
    Ok(())
}

/// Exact-match chunk scoring: a predicted chunk counts only when a gold chunk
/// has the same type, start and end.
pub fn chunk_prf<S: AsRef<str>>(gold: &[Vec<S>], pred: &[Vec<S>]) -> Result<EvalReport> {
    check_aligned(gold, pred)?;
    let mut tally = Tally::default();
    for (g, p) in gold.iter().zip(pred) {
        let gold_chunks: HashSet<Chunk> = extract_chunks(g)?.into_iter().collect();
        let pred_chunks: HashSet<Chunk> = extract_chunks(p)?.into_iter().collect();
        for c in &pred_chunks {
            if gold_chunks.contains(c) {
                tally.entry(&c.kind).0 += 1;
            } else {
                tally.entry(&c.kind).1 += 1;
            }
        }
        for c in gold_chunks.difference(&pred_chunks) {
            tally.entry(&c.kind).2 += 1;
        }
    }
    Ok(tally.into_report(EvalLevel::Chunk))
}

/// Per-position scoring of entity types; IOB prefixes are ignored.
pub fn token_prf<S: AsRef<str>>(gold: &[Vec<S>], pred: &[Vec<S>]) -> Result<EvalReport> {
    check_aligned(gold, pred)?;
    let mut tally = Tally::default();
    for (g, p) in gold.iter().zip(pred) {
        for (g, p) in g.iter().zip(p) {
            let g = split_prefix(g.as_ref()).1;
            let p = split_prefix(p.as_ref()).1;
            if g == p {
                if g != OUTSIDE {
                    tally.entry(g).0 += 1;
                }
                continue;
            }
            if p != OUTSIDE {
                tally.entry(p).1 += 1;
            }
            if g != OUTSIDE {
                tally.entry(g).2 += 1;
            }
        }
    }
    Ok(tally.into_report(EvalLevel::Token))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(labels: &[&str]) -> Vec<String> {
        labels.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn perfect_prediction() {
        let gold = vec![v(&["B-PER", "I-PER", "O", "B-LOC"])];
        for r in [chunk_prf(&gold, &gold).unwrap(), token_prf(&gold, &gold).unwrap()] {
            assert_eq!(r.total.f1, 1.0);
            assert!(r.rows.values().all(|s| s.f1 == 1.0));
            assert!(!r.rows.contains_key("O"));
        }
    }

    #[test]
    fn boundary_mismatch_scores_zero() {
        let r = chunk_prf(&[v(&["B-PER", "I-PER", "O"])], &[v(&["B-PER", "O", "O"])]).unwrap();
        let per = r.rows["PER"];
        assert_eq!((per.tp, per.fp, per.fn_), (0, 1, 1));
        assert_eq!((per.precision, per.recall, per.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn no_predictions() {
        let r = chunk_prf(&[v(&["B-PER", "O"])], &[v(&["O", "O"])]).unwrap();
        assert_eq!((r.total.precision, r.total.recall, r.total.f1), (0.0, 0.0, 0.0));
        assert_eq!(r.total.fn_, 1);
    }

    #[test]
    fn token_level_hand_count() {
        let r = token_prf(&[v(&["PER", "O", "LOC"])], &[v(&["PER", "PER", "O"])]).unwrap();
        assert_eq!((r.total.tp, r.total.fp, r.total.fn_), (1, 1, 1));
        assert_eq!((r.total.precision, r.total.recall, r.total.f1), (0.5, 0.5, 0.5));
    }

    #[test]
    fn misaligned() {
        assert!(token_prf(&[v(&["O"])], &[v(&["O", "O"])]).is_err());
        assert!(chunk_prf(&[v(&["O"])], &[]).is_err());
    }

    #[test]
    fn chunk_metric_needs_iob() {
        assert!(chunk_prf(&[v(&["PER"])], &[v(&["PER"])]).is_err());
    }
}
