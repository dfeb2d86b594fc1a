use super::metrics::{EvalReport, Scores};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportStyle {
    /// Tab-separated, one row per line.
    Machine,
    /// Space-padded columns.
    Human,
}

const HEADER: [&str; 4] = ["Entity Type", "Precision", "Recall", "F1"];

fn pct(x: f64) -> String {
    format!("{:.2}", 100.0 * x)
}

/// One row per type in lexicographic order followed by the `Total:` row.
/// Values are percentages with two decimals.
pub fn format_report(report: &EvalReport, style: ReportStyle) -> String {
    let mut rows: Vec<(String, &Scores)> = report.rows.iter().map(|(k, s)| (format!("{k}:"), s)).collect();
    rows.push(("Total:".to_string(), &report.total));

    let mut out = String::new();
    match style {
        ReportStyle::Machine => {
            out.push_str(&HEADER.join("\t"));
            out.push('\n');
            for (name, s) in rows {
                out.push_str(&format!("{name}\t{}\t{}\t{}\n", pct(s.precision), pct(s.recall), pct(s.f1)));
            }
        }
        ReportStyle::Human => {
            let width = rows.iter().map(|(n, _)| n.len()).chain([HEADER[0].len()]).max().unwrap_or(0) + 2;
            out.push_str(&format!("{:<width$}{:>10}{:>10}{:>10}\n", HEADER[0], HEADER[1], HEADER[2], HEADER[3]));
            for (name, s) in rows {
                out.push_str(&format!(
                    "{:<width$}{:>10}{:>10}{:>10}\n",
                    name,
                    pct(s.precision),
                    pct(s.recall),
                    pct(s.f1)
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::eval::EvalLevel;

    #[test]
    fn perfect_single_type_row() {
        let mut rows = BTreeMap::new();
        rows.insert("TYPE".to_string(), Scores::from_counts(3, 0, 0));
        let r = EvalReport {
            level: EvalLevel::Chunk,
            rows,
            total: Scores::from_counts(3, 0, 0),
        };
        let text = format_report(&r, ReportStyle::Machine);
        assert!(text.lines().any(|l| l == "TYPE:\t100.00\t100.00\t100.00"), "{text}");
    }

    #[test]
    fn empty_report_has_header_and_zero_total() {
        let r = EvalReport {
            level: EvalLevel::Token,
            rows: BTreeMap::new(),
            total: Scores::default(),
        };
        assert_eq!(
            format_report(&r, ReportStyle::Machine),
            "Entity Type\tPrecision\tRecall\tF1\nTotal:\t0.00\t0.00\t0.00\n"
        );
        assert_eq!(format_report(&r, ReportStyle::Human).lines().count(), 2);
    }
}
