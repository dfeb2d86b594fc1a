use super::{Dataset, Sentence, SourceFormat, Token, OUTSIDE};
use crate::{Error, Result};

const DOCSTART: &str = "-DOCSTART-";

/// Reads whitespace-separated columns: surface first, POS second, label last.
/// Columns in between (CoNLL-2003 chunk tags) are ignored.
pub fn parse_conll(text: &str) -> Result<Dataset> {
    read_columns(text, 3)
}

/// Like [`parse_conll`] but the label column is optional; unlabeled tokens get `O`.
/// Used for prediction inputs.
pub fn parse_conll_input(text: &str) -> Result<Dataset> {
    read_columns(text, 2)
}

fn read_columns(text: &str, min_columns: usize) -> Result<Dataset> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut sentences = Vec::new();
    let mut current = Vec::new();
    let mut columns: Option<usize> = None;

    let flush = |current: &mut Vec<Token>, sentences: &mut Vec<Sentence>| {
        if !current.is_empty() {
            sentences.push(Sentence::new(std::mem::take(current)).expect("non-empty"));
        }
    };

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            flush(&mut current, &mut sentences);
            continue;
        }
        if fields[0] == DOCSTART {
            flush(&mut current, &mut sentences);
            continue;
        }
        if fields.len() < min_columns {
            let message = if min_columns == 2 {
                "missing POS column: input needs at least surface and POS columns".to_string()
            } else {
                format!(
                    "expected at least {min_columns} columns (surface, POS, label), found {}",
                    fields.len()
                )
            };
            return Err(Error::parse(line_no, message));
        }
        match columns {
            None => columns = Some(fields.len()),
            Some(expected) if expected != fields.len() => {
                return Err(Error::parse(
                    line_no,
                    format!("expected {expected} columns, found {}", fields.len()),
                ));
            }
            Some(_) => {}
        }
        let label = if fields.len() >= 3 { fields[fields.len() - 1] } else { OUTSIDE };
        let token = Token::new(fields[0], fields[1], label).map_err(|e| Error::parse(line_no, e.to_string()))?;
        current.push(token);
    }
    flush(&mut current, &mut sentences);

    if sentences.is_empty() {
        return Err(Error::data("no sentences"));
    }
    Ok(Dataset::new(sentences, SourceFormat::Conll))
}

pub fn write_conll(dataset: &Dataset) -> String {
    let mut out = String::new();
    for sentence in dataset.sentences() {
        for t in sentence.tokens() {
            out.push_str(&t.surface);
            out.push(' ');
            out.push_str(&t.pos);
            out.push(' ');
            out.push_str(&t.label);
            out.push('\n');
        }
        out.push('\n');
    }
    out
}
