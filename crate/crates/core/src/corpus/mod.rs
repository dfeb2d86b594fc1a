//! Annotated corpora: CoNLL and SSF readers/writers, label schemes, splits and
//! the dense id spaces used by the embedding trainers and the tagger.

mod conll;
mod labels;
mod split;
mod ssf;
mod vocab;

use std::collections::{BTreeSet, HashMap};

pub use conll::{parse_conll, parse_conll_input, write_conll};
pub use labels::{normalize_labels, LabelMode};
pub use split::{random_split, read_split_manifest, write_split_manifest, SplitIndices, SplitRatios};
pub use ssf::{parse_ssf, write_ssf};
pub use vocab::{build_vocab, Vocabulary, PAD, PAD_ID, UNK, UNK_ID};

use crate::{Error, Result};

/// Label for tokens outside every entity.
pub const OUTSIDE: &str = "O";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub surface: String,
    pub pos: String,
    pub label: String,
}

impl Token {
    pub fn new(surface: &str, pos: &str, label: &str) -> Result<Self> {
        for (what, value) in [("surface", surface), ("POS tag", pos), ("label", label)] {
            if value.trim().is_empty() {
                return Err(Error::data(format!("token {what} is empty")));
            }
            if value.chars().any(char::is_whitespace) {
                return Err(Error::data(format!("token {what} `{value}` contains whitespace")));
            }
        }
        Ok(Token {
            surface: surface.to_string(),
            pos: pos.to_string(),
            label: label.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sentence {
    tokens: Vec<Token>,
}

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::data("sentence has no tokens"));
        }
        Ok(Sentence { tokens })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.tokens.iter().map(|t| t.label.clone()).collect()
    }

    pub(crate) fn tokens_mut(&mut self) -> &mut [Token] {
        &mut self.tokens
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceFormat {
    Conll,
    Ssf,
}

impl std::str::FromStr for SourceFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "conll" => Ok(SourceFormat::Conll),
            "ssf" => Ok(SourceFormat::Ssf),
            other => Err(Error::config(format!("unknown corpus format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabelScheme {
    /// One entity type per token, no chunk prefixes.
    Raw,
    /// `B-X` opens every chunk, `I-X` continues it.
    Iob2,
}

impl LabelScheme {
    /// Labels carrying `B-`/`I-` prefixes mark the IOB family; anything else is raw.
    pub fn detect<'a>(labels: impl IntoIterator<Item = &'a str>) -> Self {
        if labels.into_iter().any(|l| split_prefix(l).0.is_some()) {
            LabelScheme::Iob2
        } else {
            LabelScheme::Raw
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LabelScheme::Raw => "RAW",
            LabelScheme::Iob2 => "IOB2",
        }
    }
}

impl std::str::FromStr for LabelScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "RAW" => Ok(LabelScheme::Raw),
            "IOB2" => Ok(LabelScheme::Iob2),
            other => Err(Error::config(format!("unknown label scheme `{other}`"))),
        }
    }
}

/// Chunk prefix of an IOB label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChunkPrefix {
    Begin,
    Inside,
}

/// Splits `B-PER` into (`Begin`, `PER`). Raw labels and `O` come back without prefix.
pub fn split_prefix(label: &str) -> (Option<ChunkPrefix>, &str) {
    if let Some(rest) = label.strip_prefix("B-") {
        if !rest.is_empty() {
            return (Some(ChunkPrefix::Begin), rest);
        }
    }
    if let Some(rest) = label.strip_prefix("I-") {
        if !rest.is_empty() {
            return (Some(ChunkPrefix::Inside), rest);
        }
    }
    (None, label)
}

/// Dense id spaces for POS tags and entity labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagInventory {
    pos_tags: Vec<String>,
    ne_labels: Vec<String>,
    pos_index: HashMap<String, usize>,
    label_index: HashMap<String, usize>,
    scheme: LabelScheme,
}

impl TagInventory {
    /// Ids are assigned in lexicographic order; `O` is always present.
    pub fn new<P, L>(pos_tags: P, ne_labels: L) -> Self
    where
        P: IntoIterator,
        P::Item: AsRef<str>,
        L: IntoIterator,
        L::Item: AsRef<str>,
    {
        let pos: BTreeSet<String> = pos_tags.into_iter().map(|p| p.as_ref().to_string()).collect();
        let mut labels: BTreeSet<String> =
            ne_labels.into_iter().map(|l| l.as_ref().to_string()).collect();
        labels.insert(OUTSIDE.to_string());
        Self::from_ordered(pos.into_iter().collect(), labels.into_iter().collect())
    }

    /// Keeps the given id order. Used when restoring a saved model.
    pub fn from_ordered(pos_tags: Vec<String>, mut ne_labels: Vec<String>) -> Self {
        if !ne_labels.iter().any(|l| l == OUTSIDE) {
            ne_labels.push(OUTSIDE.to_string());
        }
        let pos_index = pos_tags.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let label_index = ne_labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let scheme = LabelScheme::detect(ne_labels.iter().map(String::as_str));
        TagInventory {
            pos_tags,
            ne_labels,
            pos_index,
            label_index,
            scheme,
        }
    }

    pub fn from_sentences(sentences: &[Sentence]) -> Self {
        let tokens = sentences.iter().flat_map(|s| s.tokens().iter());
        let (pos, labels): (Vec<&str>, Vec<&str>) =
            tokens.map(|t| (t.pos.as_str(), t.label.as_str())).unzip();
        Self::new(pos, labels)
    }

    pub fn pos_id(&self, pos: &str) -> Option<usize> {
        self.pos_index.get(pos).copied()
    }

    pub fn label_id(&self, label: &str) -> Option<usize> {
        self.label_index.get(label).copied()
    }

    pub fn outside_id(&self) -> usize {
        self.label_index[OUTSIDE]
    }

    pub fn pos_tags(&self) -> &[String] {
        &self.pos_tags
    }

    pub fn ne_labels(&self) -> &[String] {
        &self.ne_labels
    }

    pub fn label(&self, id: usize) -> &str {
        &self.ne_labels[id]
    }

    pub fn pos_count(&self) -> usize {
        self.pos_tags.len()
    }

    pub fn label_count(&self) -> usize {
        self.ne_labels.len()
    }

    pub fn scheme(&self) -> LabelScheme {
        self.scheme
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    sentences: Vec<Sentence>,
    tags: TagInventory,
    source_format: SourceFormat,
}

impl Dataset {
    pub fn new(sentences: Vec<Sentence>, source_format: SourceFormat) -> Self {
        let tags = TagInventory::from_sentences(&sentences);
        Dataset {
            sentences,
            tags,
            source_format,
        }
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn tag_inventory(&self) -> &TagInventory {
        &self.tags
    }

    pub fn source_format(&self) -> SourceFormat {
        self.source_format
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }

    pub fn labels(&self) -> Vec<Vec<String>> {
        self.sentences.iter().map(Sentence::labels).collect()
    }

    /// (surface, pos, label) triples per sentence; the format-independent content.
    pub fn triples(&self) -> Vec<Vec<(String, String, String)>> {
        self.sentences
            .iter()
            .map(|s| {
                s.tokens()
                    .iter()
                    .map(|t| (t.surface.clone(), t.pos.clone(), t.label.clone()))
                    .collect()
            })
            .collect()
    }

    /// Same sentences with the label of every token replaced.
    pub fn with_labels(&self, labels: &[Vec<String>]) -> Result<Dataset> {
        if labels.len() != self.sentences.len() {
            return Err(Error::data(format!(
                "label set covers {} sentences, dataset has {}",
                labels.len(),
                self.sentences.len()
            )));
        }
        let mut sentences = self.sentences.clone();
        for (i, (sentence, row)) in sentences.iter_mut().zip(labels).enumerate() {
            if row.len() != sentence.len() {
                return Err(Error::data(format!(
                    "sentence {i}: {} labels for {} tokens",
                    row.len(),
                    sentence.len()
                )));
            }
            for (token, label) in sentence.tokens_mut().iter_mut().zip(row) {
                token.label = label.clone();
            }
        }
        Ok(Dataset::new(sentences, self.source_format))
    }

    pub(crate) fn subset(&self, indices: &[usize]) -> Dataset {
        let sentences = indices.iter().map(|&i| self.sentences[i].clone()).collect();
        Dataset::new(sentences, self.source_format)
    }
}

/// Parses `text` in the given format.
pub fn parse(text: &str, format: SourceFormat) -> Result<Dataset> {
    match format {
        SourceFormat::Conll => parse_conll(text),
        SourceFormat::Ssf => parse_ssf(text),
    }
}

/// Writes the dataset in the given format. An empty dataset yields empty text,
/// which the readers reject with "no sentences".
pub fn serialize(dataset: &Dataset, format: SourceFormat) -> String {
    match format {
        SourceFormat::Conll => write_conll(dataset),
        SourceFormat::Ssf => write_ssf(dataset),
    }
}
