//! Prediction interchange files: `surface pos gold pred` columns, blank line
//! between sentences.

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterchangeToken {
    pub surface: String,
    pub pos: String,
    pub gold: String,
    pub pred: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Interchange {
    pub sentences: Vec<Vec<InterchangeToken>>,
}

impl Interchange {
    pub fn gold(&self) -> Vec<Vec<String>> {
        self.sentences.iter().map(|s| s.iter().map(|t| t.gold.clone()).collect()).collect()
    }

    pub fn pred(&self) -> Vec<Vec<String>> {
        self.sentences.iter().map(|s| s.iter().map(|t| t.pred.clone()).collect()).collect()
    }
}

/// Reads an interchange file. Empty input gives zero sentences.
pub fn parse_interchange(text: &str) -> Result<Interchange> {
    let mut out = Interchange::default();
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            if !current.is_empty() {
                out.sentences.push(std::mem::take(&mut current));
            }
            continue;
        }
        if fields.len() != 4 {
            return Err(Error::parse(
                i + 1,
                format!("expected 4 columns (surface, pos, gold, pred), found {}", fields.len()),
            ));
        }
        current.push(InterchangeToken {
            surface: fields[0].to_string(),
            pos: fields[1].to_string(),
            gold: fields[2].to_string(),
            pred: fields[3].to_string(),
        });
    }
    if !current.is_empty() {
        out.sentences.push(current);
    }
    Ok(out)
}

pub fn write_interchange(data: &Interchange) -> String {
    let mut out = String::new();
    for sentence in &data.sentences {
        for t in sentence {
            out.push_str(&format!("{} {} {} {}\n", t.surface, t.pos, t.gold, t.pred));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_errors() {
        let text = "EU NNP B-ORG B-ORG\nrejects VBZ O O\n\nPeter NNP B-PER O\n\n";
        let data = parse_interchange(text).unwrap();
        assert_eq!(data.sentences.len(), 2);
        assert_eq!(data.pred()[1], vec!["O"]);
        assert_eq!(write_interchange(&data), text);
        assert!(matches!(parse_interchange("a b c\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_interchange("").unwrap().sentences.is_empty());
    }
}
