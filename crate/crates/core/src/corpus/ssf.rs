//! Flat subset of Shakti Standard Form: one `<Sentence>` per block, token lines
//! `index TAB surface TAB pos`, and at most one level of `((` ... `))` groups
//! whose `<ne=LABEL>` annotation labels every member token.

use super::{Dataset, Sentence, SourceFormat, Token, OUTSIDE};
use crate::{Error, Result};

const GROUP_OPEN: &str = "((";
const GROUP_CLOSE: &str = "))";

struct OpenGroup {
    line: usize,
    label: String,
}

pub fn parse_ssf(text: &str) -> Result<Dataset> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut sentences = Vec::new();
    let mut current: Option<(usize, Vec<Token>)> = None;
    let mut group: Option<OpenGroup> = None;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }

        if trimmed.starts_with("<Sentence") {
            if let Some((start, _)) = current {
                return Err(Error::parse(
                    line_no,
                    format!("sentence opened at line {start} is not closed"),
                ));
            }
            current = Some((line_no, Vec::new()));
            continue;
        }
        if trimmed.starts_with("</Sentence") {
            let Some((start, tokens)) = current.take() else {
                return Err(Error::parse(line_no, "</Sentence> without matching <Sentence>"));
            };
            if let Some(g) = group.take() {
                return Err(Error::parse(
                    line_no,
                    format!("unbalanced group: `((` at line {} is never closed", g.line),
                ));
            }
            if tokens.is_empty() {
                return Err(Error::parse(start, "sentence has no tokens"));
            }
            sentences.push(Sentence::new(tokens)?);
            continue;
        }

        let Some((_, tokens)) = current.as_mut() else {
            // Document wrappers and other markup between sentences.
            if trimmed.starts_with('<') {
                continue;
            }
            return Err(Error::parse(line_no, "token line outside of a <Sentence> block"));
        };

        let fields: Vec<&str> = if line.contains('\t') {
            line.split('\t').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        let index = fields[0];

        if trimmed == GROUP_CLOSE || fields.iter().find(|f| !f.is_empty()) == Some(&GROUP_CLOSE) {
            if group.take().is_none() {
                return Err(Error::parse(line_no, "unbalanced group: `))` without an open `((`"));
            }
            continue;
        }

        if fields.get(1) == Some(&GROUP_OPEN) {
            if index.is_empty() {
                return Err(Error::parse(line_no, "missing index column"));
            }
            if let Some(g) = &group {
                return Err(Error::parse(
                    line_no,
                    format!("nested groups are not supported (group open since line {})", g.line),
                ));
            }
            let label = fields
                .iter()
                .skip(2)
                .find_map(|f| ne_annotation(f))
                .unwrap_or_else(|| OUTSIDE.to_string());
            group = Some(OpenGroup { line: line_no, label });
            continue;
        }

        if index.is_empty() {
            return Err(Error::parse(line_no, "missing index column"));
        }
        if fields.len() < 3 || fields[1].is_empty() || fields[2].is_empty() {
            return Err(Error::parse(
                line_no,
                "expected `index TAB surface TAB pos` token line",
            ));
        }
        let label = group.as_ref().map_or(OUTSIDE, |g| g.label.as_str());
        let token = Token::new(fields[1], fields[2], label).map_err(|e| Error::parse(line_no, e.to_string()))?;
        tokens.push(token);
    }

    if let Some(g) = group {
        return Err(Error::parse(
            g.line,
            "unbalanced group: `((` is never closed",
        ));
    }
    if let Some((start, _)) = current {
        return Err(Error::parse(start, "sentence is never closed"));
    }
    if sentences.is_empty() {
        return Err(Error::data("no sentences"));
    }
    Ok(Dataset::new(sentences, SourceFormat::Ssf))
}

/// Extracts `LABEL` from `<ne=LABEL>` or `<fs ne='LABEL'>`.
fn ne_annotation(field: &str) -> Option<String> {
    let start = field.find("ne=")? + 3;
    let rest = field[start..].trim_start_matches(['\'', '"']);
    let value: String = rest
        .chars()
        .take_while(|c| !matches!(c, '>' | '\'' | '"' | ',') && !c.is_whitespace())
        .collect();
    (!value.is_empty()).then_some(value)
}

/// Runs of equal non-`O` labels become one labeled group.
pub fn write_ssf(dataset: &Dataset) -> String {
    let mut out = String::new();
    for (s, sentence) in dataset.sentences().iter().enumerate() {
        out.push_str(&format!("<Sentence id=\"{}\">\n", s + 1));
        let tokens = sentence.tokens();
        let mut element = 0;
        let mut i = 0;
        while i < tokens.len() {
            element += 1;
            let label = &tokens[i].label;
            if label == OUTSIDE {
                let t = &tokens[i];
                out.push_str(&format!("{element}\t{}\t{}\n", t.surface, t.pos));
                i += 1;
                continue;
            }
            out.push_str(&format!("{element}\t{GROUP_OPEN}\tNP\t<ne={label}>\n"));
            let mut member = 0;
            while i < tokens.len() && &tokens[i].label == label {
                member += 1;
                let t = &tokens[i];
                out.push_str(&format!("{element}.{member}\t{}\t{}\n", t.surface, t.pos));
                i += 1;
            }
            out.push_str(&format!("\t{GROUP_CLOSE}\n"));
        }
        out.push_str("</Sentence>\n\n");
    }
    out
}
