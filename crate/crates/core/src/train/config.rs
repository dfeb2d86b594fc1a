use super::AdamConfig;
use crate::nn::{NetworkConfig, Precision};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub batch_size: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub max_epochs: usize,
    /// Epochs without a dev-score gain before stopping.
    pub patience: usize,
    pub seed: u64,
    pub freeze_embeddings: bool,
    pub precision: Precision,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            batch_size: 128,
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            max_epochs: 50,
            patience: 10,
            seed: 1,
            freeze_embeddings: false,
            precision: Precision::F64,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::config("batch_size must be at least 1"));
        }
        if self.patience == 0 {
            return Err(Error::config("patience must be at least 1"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::config("learning_rate must be positive"));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return Err(Error::config("adam betas must lie in [0, 1)"));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::config("epsilon must be positive"));
        }
        Ok(())
    }

    pub fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            beta1: self.beta1,
            beta2: self.beta2,
            epsilon: self.epsilon,
        }
    }
}

pub fn parse_bool(s: &str) -> Result<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(Error::config(format!("expected true or false, got `{other}`"))),
    }
}

fn value<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::parse(line, format!("invalid value `{v}` for `{key}`")))
}

/// Applies `key=value` lines to the two configurations. Blank lines and lines
/// starting with `#` are skipped. `pos_count` and `classes` come from the
/// training data and cannot be set.
pub fn apply_config(text: &str, net: &mut NetworkConfig, train: &mut TrainConfig) -> Result<()> {
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, format!("expected key=value, got `{line}`")))?;
        let (key, v) = (key.trim(), v.trim());
        let at = |e: Error| match e {
            Error::Config(m) => Error::parse(line_no, m),
            other => other,
        };
        match key {
            "cell" => net.cell = v.parse().map_err(at)?,
            "bidirectional" => net.bidirectional = parse_bool(v).map_err(at)?,
            "layers" => net.layers = value(line_no, key, v)?,
            "hidden" => net.hidden = value(line_no, key, v)?,
            "embed_dim" => net.embed_dim = value(line_no, key, v)?,
            "dropout" => net.dropout = value(line_no, key, v)?,
            "batch_size" => train.batch_size = value(line_no, key, v)?,
            "learning_rate" => train.learning_rate = value(line_no, key, v)?,
            "beta1" => train.beta1 = value(line_no, key, v)?,
            "beta2" => train.beta2 = value(line_no, key, v)?,
            "epsilon" => train.epsilon = value(line_no, key, v)?,
            "max_epochs" => train.max_epochs = value(line_no, key, v)?,
            "patience" => train.patience = value(line_no, key, v)?,
            "seed" => train.seed = value(line_no, key, v)?,
            "freeze_embeddings" => train.freeze_embeddings = parse_bool(v).map_err(at)?,
            "precision" => train.precision = v.parse().map_err(at)?,
            "pos_count" | "classes" => {
                return Err(Error::parse(line_no, format!("`{key}` is derived from the training data")))
            }
            other => return Err(Error::parse(line_no, format!("unknown configuration key `{other}`"))),
        }
    }
    Ok(())
}

/// Inverse of [`apply_config`].
pub fn render_config(net: &NetworkConfig, train: &TrainConfig) -> String {
    format!(
        "cell={}\nbidirectional={}\nlayers={}\nhidden={}\nembed_dim={}\ndropout={}\n\
         batch_size={}\nlearning_rate={}\nbeta1={}\nbeta2={}\nepsilon={}\nmax_epochs={}\n\
         patience={}\nseed={}\nfreeze_embeddings={}\nprecision={}\n",
        net.cell,
        net.bidirectional,
        net.layers,
        net.hidden,
        net.embed_dim,
        net.dropout,
        train.batch_size,
        train.learning_rate,
        train.beta1,
        train.beta2,
        train.epsilon,
        train.max_epochs,
        train.patience,
        train.seed,
        train.freeze_embeddings,
        train.precision
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::CellType;

    #[test]
    fn round_trip() {
        let mut net = NetworkConfig::default();
        let mut train = TrainConfig::default();
        apply_config("# grid\ncell = rnn\nlayers=2\nseed=9\nprecision=f32\n", &mut net, &mut train).unwrap();
        assert_eq!(net.cell, CellType::Rnn);
        assert_eq!((net.layers, train.seed, train.precision), (2, 9, Precision::F32));
        let text = render_config(&net, &train);
        let (mut n2, mut t2) = (NetworkConfig::default(), TrainConfig::default());
        apply_config(&text, &mut n2, &mut t2).unwrap();
        assert_eq!((n2, t2), (net, train));
    }

    #[test]
    fn unknown_key_names_line() {
        let (mut n, mut t) = (NetworkConfig::default(), TrainConfig::default());
        let err = apply_config("seed=1\nlr=0.1\n", &mut n, &mut t).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(apply_config("classes=3", &mut n, &mut t).is_err());
        assert!(apply_config("layers=two", &mut n, &mut t).is_err());
        assert!(apply_config("cell", &mut n, &mut t).is_err());
    }
}
