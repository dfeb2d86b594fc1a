use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub dev_token_f1: f64,
    /// `None` for label sets without chunk structure.
    pub dev_chunk_f1: Option<f64>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainHistory {
    pub records: Vec<EpochRecord>,
    /// Epoch (1-based) of the selected model; `None` when no epoch ran.
    pub best_epoch: Option<usize>,
}

impl TrainHistory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Tab-separated: epoch, train_loss, dev_token_f1, dev_chunk_f1, seconds.
    /// A missing chunk score is written as `NA`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let chunk = r.dev_chunk_f1.map_or("NA".to_string(), |f| f.to_string());
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{:.3}\n",
                r.epoch, r.train_loss, r.dev_token_f1, chunk, r.seconds
            ));
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut records = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 5 {
                return Err(Error::parse(i + 1, format!("expected 5 fields, found {}", f.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| Error::parse(i + 1, format!("bad number `{s}`")));
            records.push(EpochRecord {
                epoch: f[0].parse().map_err(|_| Error::parse(i + 1, format!("bad epoch `{}`", f[0])))?,
                train_loss: num(f[1])?,
                dev_token_f1: num(f[2])?,
                dev_chunk_f1: if f[3] == "NA" { None } else { Some(num(f[3])?) },
                seconds: num(f[4])?,
            });
        }
        Ok(TrainHistory {
            records,
            best_epoch: None,
        })
    }

    /// The columns that depend only on data, configuration and seed (wall
    /// time excluded), as exact bit patterns.
    pub fn deterministic_columns(&self) -> Vec<(usize, u64, u64, Option<u64>)> {
        self.records
            .iter()
            .map(|r| {
                (
                    r.epoch,
                    r.train_loss.to_bits(),
                    r.dev_token_f1.to_bits(),
                    r.dev_chunk_f1.map(f64::to_bits),
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tsv_round_trip() {
        let h = TrainHistory {
            records: vec![
                EpochRecord {
                    epoch: 1,
                    train_loss: 0.123456789,
                    dev_token_f1: 0.5,
                    dev_chunk_f1: Some(0.25),
                    seconds: 1.5,
                },
                EpochRecord {
                    epoch: 2,
                    train_loss: 0.1,
                    dev_token_f1: 0.75,
                    dev_chunk_f1: None,
                    seconds: 1.25,
                },
            ],
            best_epoch: Some(2),
        };
        let text = h.to_tsv();
        assert_eq!(text.lines().next().unwrap(), "1\t0.123456789\t0.5\t0.25\t1.500");
        let back = TrainHistory::from_tsv(&text).unwrap();
        assert_eq!(back.deterministic_columns(), h.deterministic_columns());
        assert!(TrainHistory::from_tsv("1\t2\n").is_err());
    }
}
