use std::collections::HashMap;
use std::io::{Read, Write};

use super::CorpusSource;
use crate::corpus::Vocabulary;
use crate::{Error, Result};

/// Sparse distance-weighted co-occurrence counts.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceTable {
    entries: HashMap<(u32, u32), f64>,
    window: usize,
    symmetric: bool,
}

impl CooccurrenceTable {
    pub fn new(window: usize) -> Self {
        CooccurrenceTable {
            entries: HashMap::new(),
            window,
            symmetric: true,
        }
    }

    pub fn add(&mut self, center: u32, context: u32, weight: f64) {
        *self.entries.entry((center, context)).or_insert(0.0) += weight;
    }

    pub fn get(&self, center: u32, context: u32) -> f64 {
        self.entries.get(&(center, context)).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Non-zero entries ordered by (center, context).
    pub fn sorted_entries(&self) -> Vec<(u32, u32, f64)> {
        let mut out: Vec<(u32, u32, f64)> = self.entries.iter().map(|(&(i, j), &x)| (i, j, x)).collect();
        out.sort_by_key(|&(i, j, _)| (i, j));
        out
    }

    pub fn total_mass(&self) -> f64 {
        self.sorted_entries().iter().map(|e| e.2).sum()
    }

    /// Adds every entry of `other` into `self`.
    pub fn merge(&mut self, other: &CooccurrenceTable) {
        for (i, j, x) in other.sorted_entries() {
            self.add(i, j, x);
        }
        self.symmetric &= other.symmetric;
    }
}

/// Every ordered pair at distance `d <= window` inside a sentence adds `1/d`
/// to both `X[a, b]` and `X[b, a]`. Reserved ids keep their position but form
/// no pairs.
pub fn build_cooccurrence<C: CorpusSource + ?Sized>(corpus: &C, window: usize, workers: usize) -> Result<CooccurrenceTable> {
    if window == 0 {
        return Err(Error::config("window must be at least 1"));
    }
    let workers = workers.max(1);
    let shard = |w: usize| -> Result<CooccurrenceTable> {
        let mut table = CooccurrenceTable::new(window);
        corpus.visit(w, workers, &mut |sentence| {
            for (i, &a) in sentence.iter().enumerate() {
                if Vocabulary::is_reserved(a) {
                    continue;
                }
                for d in 1..=window {
                    let Some(&b) = sentence.get(i + d) else { break };
                    if Vocabulary::is_reserved(b) {
                        continue;
                    }
                    let weight = 1.0 / d as f64;
                    table.add(a, b, weight);
                    table.add(b, a, weight);
                }
            }
        })?;
        Ok(table)
    };
    let shards: Vec<Result<CooccurrenceTable>> = if workers == 1 {
        vec![shard(0)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers).map(|w| scope.spawn(move || shard(w))).collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    let mut merged = CooccurrenceTable::new(window);
    for s in shards {
        merged.merge(&s?);
    }
    Ok(merged)
}

/// Binary records `(u32 center, u32 context, f64 weight)`, little-endian.
pub fn write_spill<W: Write>(table: &CooccurrenceTable, mut out: W) -> Result<()> {
    for (i, j, x) in table.sorted_entries() {
        out.write_all(&i.to_le_bytes())?;
        out.write_all(&j.to_le_bytes())?;
        out.write_all(&x.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

/// Reads spill records, summing repeated (center, context) keys.
pub fn read_spill<R: Read>(mut input: R, window: usize) -> Result<CooccurrenceTable> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() % 16 != 0 {
        return Err(Error::data(format!("spill length {} is not a multiple of 16", bytes.len())));
    }
    let mut table = CooccurrenceTable::new(window);
    for rec in bytes.chunks_exact(16) {
        let i = u32::from_le_bytes(rec[0..4].try_into().unwrap());
        let j = u32::from_le_bytes(rec[4..8].try_into().unwrap());
        let x = f64::from_le_bytes(rec[8..16].try_into().unwrap());
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::data(format!("invalid co-occurrence weight {x}")));
        }
        table.add(i, j, x);
    }
    let mut symmetric = true;
    for (i, j, x) in table.sorted_entries() {
        if table.get(j, i) != x {
            symmetric = false;
            break;
        }
    }
    table.symmetric = symmetric;
    Ok(table)
}
