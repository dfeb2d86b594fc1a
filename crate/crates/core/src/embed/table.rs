use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Vocabulary, PAD_ID, UNK_ID};
use crate::{Error, Result};

/// `|V| × dim` matrix whose rows follow the ids of `vocab`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    vocab: Vocabulary,
    dim: usize,
    data: Vec<f64>,
}

impl EmbeddingTable {
    pub fn new(vocab: Vocabulary, dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::config("embedding dimension must be positive"));
        }
        if data.len() != vocab.len() * dim {
            return Err(Error::Shape(format!(
                "{} values for {} rows of dimension {dim}",
                data.len(),
                vocab.len()
            )));
        }
        if let Some(i) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::data(format!("non-finite embedding entry in row {}", i / dim)));
        }
        Ok(EmbeddingTable { vocab, dim, data })
    }

    /// Seeded uniform initialization in `[-0.5/dim, 0.5/dim]` with a zero PAD row.
    pub fn random(vocab: Vocabulary, dim: usize, seed: u64) -> Result<Self> {
        let data = seeded_uniform(vocab.len(), dim, seed);
        EmbeddingTable::new(vocab, dim, data)
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> usize {
        self.vocab.len()
    }

    pub fn row(&self, id: u32) -> &[f64] {
        let start = id as usize * self.dim;
        &self.data[start..start + self.dim]
    }

    pub fn row_mut(&mut self, id: u32) -> &mut [f64] {
        let start = id as usize * self.dim;
        &mut self.data[start..start + self.dim]
    }

    pub fn vector(&self, word: &str) -> Option<&[f64]> {
        self.vocab.id(word).map(|id| self.row(id))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn zero_pad_row(&mut self) {
        self.row_mut(PAD_ID).fill(0.0);
    }

    /// Cosine similarity of two rows; 0 when either row is all zeros.
    pub fn cosine(&self, a: u32, b: u32) -> f64 {
        cosine(self.row(a), self.row(b))
    }
}

pub(crate) fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// `rows × dim` values drawn in row-major order from ChaCha8 seeded with `seed`,
/// uniform in `[-0.5/dim, 0.5/dim)`. Row 0 (PAD) is zeroed after drawing.
pub fn seeded_uniform(rows: usize, dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = 0.5 / dim as f64;
    let mut data: Vec<f64> = (0..rows * dim).map(|_| rng.gen_range(-bound..bound)).collect();
    if rows > 0 {
        data[..dim].fill(0.0);
    }
    data
}

/// Text format: a `count dim` header, then `word v1 ... vdim` per row.
pub fn write_vectors<W: Write>(table: &EmbeddingTable, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{} {}", table.rows(), table.dim())?;
    for (id, word) in table.vocab().words().iter().enumerate() {
        out.write_all(word.as_bytes())?;
        for x in table.row(id as u32) {
            write!(out, " {x}")?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn save_vectors(table: &EmbeddingTable, path: impl AsRef<Path>) -> Result<()> {
    write_vectors(table, File::create(path)?)
}

pub fn load_vectors(path: impl AsRef<Path>, vocab: Option<&Vocabulary>, seed: u64) -> Result<EmbeddingTable> {
    read_vectors(BufReader::new(File::open(path)?), vocab, seed)
}

/// Reads a vector file. Without `vocab` the table's vocabulary is the file's
/// words in file order (PAD/UNK get zero rows unless the file has them). With
/// `vocab`, rows are aligned by word: words missing from the file keep the
/// [`seeded_uniform`] values for `seed`, and words not in `vocab` are skipped.
pub fn read_vectors<R: BufRead>(input: R, vocab: Option<&Vocabulary>, seed: u64) -> Result<EmbeddingTable> {
    let mut dim: Option<usize> = None;
    let mut entries: Vec<(String, Vec<f64>)> = Vec::new();

    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if i == 0 && fields.len() == 2 {
            if let (Ok(_), Ok(d)) = (fields[0].parse::<usize>(), fields[1].parse::<usize>()) {
                if d == 0 {
                    return Err(Error::parse(line_no, "header declares dimension 0"));
                }
                dim = Some(d);
                continue;
            }
        }
        let values = fields[1..]
            .iter()
            .map(|f| match f.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => Err(Error::parse(line_no, format!("non-numeric field `{f}`"))),
            })
            .collect::<Result<Vec<f64>>>()?;
        match dim {
            None if values.is_empty() => return Err(Error::parse(line_no, "vector has no components")),
            None => dim = Some(values.len()),
            Some(d) if d != values.len() => {
                return Err(Error::parse(
                    line_no,
                    format!("dimension mismatch: expected {d} values, found {}", values.len()),
                ));
            }
            Some(_) => {}
        }
        entries.push((fields[0].to_string(), values));
    }

    let dim = dim.ok_or_else(|| Error::data("vector file contains no vectors"))?;
    match vocab {
        Some(vocab) => {
            let mut table = EmbeddingTable::random(vocab.clone(), dim, seed)?;
            let mut filled = vec![false; vocab.len()];
            for (word, values) in entries {
                if let Some(id) = vocab.id(&word) {
                    if !filled[id as usize] {
                        table.row_mut(id).copy_from_slice(&values);
                        filled[id as usize] = true;
                    }
                }
            }
            table.zero_pad_row();
            Ok(table)
        }
        None => {
            let vocab = Vocabulary::from_ordered(entries.iter().map(|(w, _)| w.as_str()));
            let mut data = vec![0.0; vocab.len() * dim];
            let mut filled = vec![false; vocab.len()];
            for (word, values) in &entries {
                let id = vocab.id(word).expect("word comes from the file") as usize;
                if !filled[id] {
                    data[id * dim..(id + 1) * dim].copy_from_slice(values);
                    filled[id] = true;
                }
            }
            EmbeddingTable::new(vocab, dim, data)
        }
    }
}

/// Top-`k` words by cosine similarity to `word`, excluding the word itself and
/// the reserved symbols. Equal similarities are ordered lexicographically.
pub fn nearest_neighbors(table: &EmbeddingTable, word: &str, k: usize) -> Result<Vec<(String, f64)>> {
    if k == 0 {
        return Err(Error::config("k must be at least 1"));
    }
    let query = table
        .vocab()
        .id(word)
        .ok_or_else(|| Error::data(format!("unknown word `{word}`")))?;
    if query == PAD_ID || query == UNK_ID {
        return Err(Error::data(format!("`{word}` is a reserved symbol")));
    }
    let mut scored: Vec<(String, f64)> = (2..table.rows() as u32)
        .filter(|&id| id != query)
        .map(|id| (table.vocab().word(id).to_string(), table.cosine(query, id)))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    scored.truncate(k);
    Ok(scored)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::build_vocab;

    fn table(words: &[&str], rows: &[&[f64]]) -> EmbeddingTable {
        let vocab = Vocabulary::from_ordered(words.iter().copied());
        let dim = rows[0].len();
        let mut data = vec![0.0; 2 * dim];
        for r in rows {
            data.extend_from_slice(r);
        }
        EmbeddingTable::new(vocab, dim, data).unwrap()
    }

    #[test]
    fn save_load_round_trip() {
        let vocab = build_vocab("a b c a".split_whitespace(), 1).unwrap();
        let t = EmbeddingTable::random(vocab, 5, 11).unwrap();
        let mut buf = Vec::new();
        write_vectors(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("5 5\n"));
        let back = read_vectors(&buf[..], None, 0).unwrap();
        assert_eq!(back.vocab().words(), t.vocab().words());
        for (x, y) in back.as_slice().iter().zip(t.as_slice()) {
            assert!((x - y).abs() <= 1e-6);
        }
    }

    #[test]
    fn dimension_mismatch_names_line() {
        let text = "x 1 2 3\ny 1 2\n";
        let err = read_vectors(text.as_bytes(), None, 0).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let text = "2 3\nx 1 2 3\ny 1 2\n";
        assert!(matches!(read_vectors(text.as_bytes(), None, 0), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn non_numeric_field() {
        let err = read_vectors("x 1 abc\n".as_bytes(), None, 0).unwrap_err();
        assert!(err.to_string().contains("non-numeric"), "{err}");
    }

    #[test]
    fn foreign_file_gets_reserved_rows() {
        let t = read_vectors("cat 1 0\ndog 0 1\n".as_bytes(), None, 0).unwrap();
        assert_eq!(t.rows(), 4);
        assert_eq!(t.row(PAD_ID), &[0.0, 0.0]);
        assert_eq!(t.vector("dog").unwrap(), &[0.0, 1.0]);
    }

    #[test]
    fn neighbors_basic() {
        let t = table(&["u", "v", "w"], &[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let nn = nearest_neighbors(&t, "u", 2).unwrap();
        assert_eq!(nn[0], ("v".to_string(), 1.0));
        assert_eq!(nn[1], ("w".to_string(), 0.0));
        assert!(nearest_neighbors(&t, "zzz", 1).is_err());
        assert!(nearest_neighbors(&t, "u", 0).is_err());
    }

    #[test]
    fn neighbor_ties_are_lexicographic() {
        let t = table(&["q", "b", "a"], &[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 2.0]]);
        let nn = nearest_neighbors(&t, "q", 2).unwrap();
        assert_eq!(nn[0].0, "a");
        assert_eq!(nn[1].0, "b");
    }
}
