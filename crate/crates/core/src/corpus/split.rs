use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Dataset;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRatios {
    pub train: f64,
    pub dev: f64,
    pub test: f64,
}

impl SplitRatios {
    pub fn new(train: f64, dev: f64, test: f64) -> Result<Self> {
        let r = SplitRatios { train, dev, test };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.train, self.dev, self.test];
        if all.iter().any(|r| !r.is_finite() || *r <= 0.0) {
            return Err(Error::config("split ratios must be positive"));
        }
        let sum: f64 = all.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::config(format!("split ratios must sum to 1, got {sum}")));
        }
        Ok(())
    }
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios {
            train: 0.70,
            dev: 0.17,
            test: 0.13,
        }
    }
}

impl std::str::FromStr for SplitRatios {
    type Err = Error;

    /// Parses `0.70,0.17,0.13`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::config(format!("cannot parse ratios `{s}`")))?;
        match parts.as_slice() {
            [a, b, c] => SplitRatios::new(*a, *b, *c),
            _ => Err(Error::config(format!("expected three ratios, got `{s}`"))),
        }
    }
}

/// Sentence indices of each split, in permutation order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub dev: Vec<usize>,
    pub test: Vec<usize>,
}

impl SplitIndices {
    /// Seeded permutation of `0..n`; train and dev take `floor(n * ratio)`
    /// sentences, test takes the remainder.
    pub fn generate(n: usize, ratios: SplitRatios, seed: u64) -> Result<Self> {
        ratios.validate()?;
        if n < 3 {
            return Err(Error::data("too few sentences to split"));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        // The small slack absorbs products like 100 * 0.7 landing just below an integer.
        let n_train = (n as f64 * ratios.train + 1e-9).floor() as usize;
        let n_dev = (n as f64 * ratios.dev + 1e-9).floor() as usize;
        let test = order.split_off(n_train + n_dev);
        let dev = order.split_off(n_train);
        Ok(SplitIndices { train: order, dev, test })
    }
}

pub fn random_split(dataset: &Dataset, ratios: SplitRatios, seed: u64) -> Result<(Dataset, Dataset, Dataset)> {
    let idx = SplitIndices::generate(dataset.len(), ratios, seed)?;
    Ok((dataset.subset(&idx.train), dataset.subset(&idx.dev), dataset.subset(&idx.test)))
}

pub fn write_split_manifest(split: &SplitIndices) -> String {
    let mut out = String::new();
    for (header, indices) in [("#train", &split.train), ("#dev", &split.dev), ("#test", &split.test)] {
        out.push_str(header);
        out.push('\n');
        for i in indices {
            out.push_str(&i.to_string());
            out.push('\n');
        }
    }
    out
}

pub fn read_split_manifest(text: &str) -> Result<SplitIndices> {
    let mut split = SplitIndices::default();
    let mut section: Option<&mut Vec<usize>> = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match line {
            "#train" => section = Some(&mut split.train),
            "#dev" => section = Some(&mut split.dev),
            "#test" => section = Some(&mut split.test),
            _ => {
                let target = section
                    .as_deref_mut()
                    .ok_or_else(|| Error::parse(i + 1, "index before any section header"))?;
                let index = line
                    .parse::<usize>()
                    .map_err(|_| Error::parse(i + 1, format!("not a sentence index: `{line}`")))?;
                target.push(index);
            }
        }
    }
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sizes(n: usize) -> (usize, usize, usize) {
        let s = SplitIndices::generate(n, SplitRatios::default(), 7).unwrap();
        (s.train.len(), s.dev.len(), s.test.len())
    }

    #[test]
    fn floor_rule_sizes() {
        assert_eq!(sizes(100), (70, 17, 13));
        assert_eq!(sizes(10), (7, 1, 2));
        assert_eq!(sizes(4477), (3133, 761, 583));
    }

    #[test]
    fn too_few_sentences() {
        let err = SplitIndices::generate(2, SplitRatios::default(), 0).unwrap_err();
        assert_eq!(err.to_string(), "too few sentences to split");
    }

    #[test]
    fn ratio_validation() {
        assert!("0.5,0.5,0.5".parse::<SplitRatios>().is_err());
        assert!("0.7,0.3".parse::<SplitRatios>().is_err());
        assert!("0.8,0.2,0.0".parse::<SplitRatios>().is_err());
        assert_eq!("0.70,0.17,0.13".parse::<SplitRatios>().unwrap(), SplitRatios::default());
    }

    #[test]
    fn manifest_round_trip() {
        let s = SplitIndices::generate(20, SplitRatios::default(), 3).unwrap();
        let text = write_split_manifest(&s);
        assert!(text.starts_with("#train\n"));
        assert_eq!(read_split_manifest(&text).unwrap(), s);
    }
}
