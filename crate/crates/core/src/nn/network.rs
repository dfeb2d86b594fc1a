use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    bidirectional_backward, bidirectional_forward, dropout_backward, dropout_forward, embed_concat,
    embed_concat_backward, orthogonal, recurrent_backward, recurrent_forward, softmax_xent, xavier_uniform,
    BidirectionalCache, CellWeights, Direction, DropoutMask, Matrix, Mode, ParamId, ParamStore, Real,
    RecurrentCache, SequenceBatch, SoftmaxOutput,
};
use crate::embed::derive_seed;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellType {
    Rnn,
    Lstm,
}

impl CellType {
    /// Number of gate blocks stacked in the weight matrices.
    pub fn gates(self) -> usize {
        match self {
            CellType::Rnn => 1,
            CellType::Lstm => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CellType::Rnn => "rnn",
            CellType::Lstm => "lstm",
        }
    }
}

impl std::str::FromStr for CellType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rnn" => Ok(CellType::Rnn),
            "lstm" => Ok(CellType::Lstm),
            other => Err(Error::config(format!("unknown cell type `{other}` (expected rnn or lstm)"))),
        }
    }
}

impl std::fmt::Display for CellType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub cell: CellType,
    pub bidirectional: bool,
    pub layers: usize,
    pub hidden: usize,
    pub embed_dim: usize,
    pub pos_count: usize,
    pub classes: usize,
    /// Applied after every recurrent layer in training mode.
    pub dropout: f64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        NetworkConfig {
            cell: CellType::Lstm,
            bidirectional: true,
            layers: 1,
            hidden: 100,
            embed_dim: 300,
            pos_count: 0,
            classes: 2,
            dropout: 0.5,
        }
    }
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.layers) {
            return Err(Error::config(format!("layers must be 1 or 2, got {}", self.layers)));
        }
        if self.hidden == 0 || self.embed_dim == 0 {
            return Err(Error::config("hidden size and embedding dimension must be positive"));
        }
        if self.classes < 2 {
            return Err(Error::config(format!("need at least 2 classes, got {}", self.classes)));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return Err(Error::config(format!("dropout must lie in [0, 1), got {}", self.dropout)));
        }
        Ok(())
    }

    pub fn input_dim(&self) -> usize {
        self.embed_dim + self.pos_count
    }

    /// Width of each recurrent layer's output.
    pub fn layer_output_dim(&self) -> usize {
        if self.bidirectional {
            2 * self.hidden
        } else {
            self.hidden
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct CellIds {
    w_x: ParamId,
    w_h: ParamId,
    b: ParamId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct LayerIds {
    fwd: CellIds,
    bwd: Option<CellIds>,
}

/// Parameter layout of a tagger; the values themselves live in a [`ParamStore`].
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    config: NetworkConfig,
    embedding: ParamId,
    layers: Vec<LayerIds>,
    proj_w: ParamId,
    proj_b: ParamId,
}

#[derive(Debug, Clone)]
enum LayerCache<T> {
    Uni(RecurrentCache<T>),
    Bi(BidirectionalCache<T>),
}

impl<T: Real> LayerCache<T> {
    fn output(&self) -> &Matrix<T> {
        match self {
            LayerCache::Uni(c) => c.output(),
            LayerCache::Bi(c) => c.output(),
        }
    }
}

/// Activations kept from a forward pass for the backward pass.
#[derive(Debug, Clone)]
pub struct ForwardPass<T> {
    input: Matrix<T>,
    layers: Vec<LayerCache<T>>,
    dropout: Vec<DropoutMask<T>>,
    top: Matrix<T>,
    pub logits: Matrix<T>,
    pub softmax: SoftmaxOutput<T>,
}

impl<T: Real> ForwardPass<T> {
    pub fn loss(&self) -> f64 {
        self.softmax.loss.as_f64()
    }

    /// Embedding ++ POS input rows fed to the first layer.
    pub fn input(&self) -> &Matrix<T> {
        &self.input
    }

    /// Output of recurrent layer `l` before dropout.
    pub fn layer_output(&self, l: usize) -> &Matrix<T> {
        self.layers[l].output()
    }

    /// Predicted class ids per sentence, truncated to each true length.
    pub fn predictions(&self, batch: &SequenceBatch) -> Vec<Vec<usize>> {
        let steps = batch.steps();
        batch
            .lengths()
            .iter()
            .enumerate()
            .map(|(b, &len)| self.softmax.predictions[b * steps..b * steps + len].to_vec())
            .collect()
    }

    /// Mean token loss of each sentence.
    pub fn sentence_losses(&self, batch: &SequenceBatch) -> Vec<f64> {
        let steps = batch.steps();
        batch
            .lengths()
            .iter()
            .enumerate()
            .map(|(b, &len)| {
                let total: f64 = (0..len)
                    .map(|t| {
                        let r = b * steps + t;
                        -self.softmax.probs.get(r, batch.labels()[r]).as_f64().ln()
                    })
                    .sum();
                total / len as f64
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutput {
    pub loss: f64,
    pub tokens: usize,
    pub predictions: Vec<Vec<usize>>,
}

fn cell_name(layer: usize, dir: &str, part: &str) -> String {
    format!("rnn{layer}.{dir}.{part}")
}

impl Network {
    /// Registers freshly initialized parameters. `embedding` supplies the word
    /// vectors (`|V| × embed_dim`); everything else is drawn from `seed`.
    pub fn init<T: Real>(config: NetworkConfig, embedding: Matrix<T>, seed: u64) -> Result<(Network, ParamStore<T>)> {
        config.validate()?;
        if embedding.cols() != config.embed_dim {
            return Err(Error::Shape(format!(
                "embedding dimension {} but configuration says {}",
                embedding.cols(),
                config.embed_dim
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x6e6e, 0));
        let mut store = ParamStore::new();
        store.add("embedding", embedding)?;
        let g = config.cell.gates();
        let h = config.hidden;
        for l in 0..config.layers {
            let in_dim = if l == 0 { config.input_dim() } else { config.layer_output_dim() };
            let dirs: &[&str] = if config.bidirectional { &["fwd", "bwd"] } else { &["fwd"] };
            for dir in dirs {
                store.add(&cell_name(l, dir, "w_x"), xavier_uniform(in_dim, g * h, &mut rng))?;
                let mut w_h = Matrix::zeros(h, g * h);
                for gate in 0..g {
                    let q: Matrix<T> = orthogonal(h, &mut rng);
                    for r in 0..h {
                        w_h.row_mut(r)[gate * h..(gate + 1) * h].copy_from_slice(q.row(r));
                    }
                }
                store.add(&cell_name(l, dir, "w_h"), w_h)?;
                let mut b = Matrix::zeros(1, g * h);
                if config.cell == super::CellType::Lstm {
                    b.data_mut()[h..2 * h].fill(T::one());
                }
                store.add(&cell_name(l, dir, "b"), b)?;
            }
        }
        store.add("proj.w", xavier_uniform(config.layer_output_dim(), config.classes, &mut rng))?;
        store.add("proj.b", Matrix::zeros(1, config.classes))?;
        let net = Network::bind(config, &store)?;
        Ok((net, store))
    }

    /// Looks up the parameters of `config` in an existing store and checks shapes.
    pub fn bind<T: Real>(config: NetworkConfig, store: &ParamStore<T>) -> Result<Network> {
        config.validate()?;
        let find = |name: &str, rows: Option<usize>, cols: usize| -> Result<ParamId> {
            let id = store
                .id(name)
                .ok_or_else(|| Error::config(format!("parameter `{name}` missing for this configuration")))?;
            let (r, c) = store.value(id).shape();
            if c != cols || rows.is_some_and(|want| want != r) {
                return Err(Error::Shape(format!(
                    "parameter `{name}` has shape {r}x{c}, expected {}x{cols}",
                    rows.map_or("?".to_string(), |x| x.to_string())
                )));
            }
            Ok(id)
        };
        let embedding = find("embedding", None, config.embed_dim)?;
        let g = config.cell.gates();
        let h = config.hidden;
        let mut layers = Vec::with_capacity(config.layers);
        for l in 0..config.layers {
            let in_dim = if l == 0 { config.input_dim() } else { config.layer_output_dim() };
            let cell = |dir: &str| -> Result<CellIds> {
                Ok(CellIds {
                    w_x: find(&cell_name(l, dir, "w_x"), Some(in_dim), g * h)?,
                    w_h: find(&cell_name(l, dir, "w_h"), Some(h), g * h)?,
                    b: find(&cell_name(l, dir, "b"), Some(1), g * h)?,
                })
            };
            let fwd = cell("fwd")?;
            let bwd = if config.bidirectional { Some(cell("bwd")?) } else { None };
            layers.push(LayerIds { fwd, bwd });
        }
        let proj_w = find("proj.w", Some(config.layer_output_dim()), config.classes)?;
        let proj_b = find("proj.b", Some(1), config.classes)?;
        let expected = 3 + layers.len() * if config.bidirectional { 6 } else { 3 };
        if store.len() != expected {
            return Err(Error::config(format!(
                "store holds {} parameters, configuration uses {expected}",
                store.len()
            )));
        }
        Ok(Network {
            config,
            embedding,
            layers,
            proj_w,
            proj_b,
        })
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.config
    }

    pub fn embedding_id(&self) -> ParamId {
        self.embedding
    }

    fn weights<'a, T: Real>(store: &'a ParamStore<T>, ids: CellIds) -> CellWeights<'a, T> {
        CellWeights {
            w_x: store.value(ids.w_x),
            w_h: store.value(ids.w_h),
            b: store.value(ids.b),
        }
    }

    /// `seed` drives the dropout masks; it is ignored in [`Mode::Eval`].
    pub fn forward<T: Real>(
        &self,
        store: &ParamStore<T>,
        batch: &SequenceBatch,
        mode: Mode,
        seed: u64,
    ) -> Result<ForwardPass<T>> {
        let cfg = &self.config;
        let n_batch = batch.batch_size();
        let mask = batch.mask();
        let input = embed_concat(batch, store.value(self.embedding), cfg.pos_count)?;
        let mut layers = Vec::with_capacity(self.layers.len());
        let mut dropout = Vec::with_capacity(self.layers.len());
        let mut x = input.clone();
        for (l, ids) in self.layers.iter().enumerate() {
            let fwd = Self::weights(store, ids.fwd);
            let cache = match ids.bwd {
                None => LayerCache::Uni(recurrent_forward(cfg.cell, &x, n_batch, mask, fwd, Direction::Forward)?),
                Some(bwd) => {
                    let bwd = Self::weights(store, bwd);
                    LayerCache::Bi(bidirectional_forward(cfg.cell, &x, n_batch, mask, fwd, bwd)?)
                }
            };
            let (y, m) = dropout_forward(cache.output(), cfg.dropout, mode, derive_seed(seed, l as u64 + 1, 0xd0));
            layers.push(cache);
            dropout.push(m);
            x = y;
        }
        let mut logits = x.matmul(store.value(self.proj_w));
        logits.add_row_vector(store.value(self.proj_b).data());
        if !logits.is_finite() {
            return Err(Error::NumericalOverflow("non-finite logits".to_string()));
        }
        let softmax = softmax_xent(&logits, batch.labels(), mask)?;
        Ok(ForwardPass {
            input,
            layers,
            dropout,
            top: x,
            logits,
            softmax,
        })
    }

    /// Adds the gradient of the pass's loss into `store`.
    pub fn backward<T: Real>(&self, store: &mut ParamStore<T>, batch: &SequenceBatch, pass: &ForwardPass<T>) {
        let d_logits = &pass.softmax.grad;
        let mut d_w = Matrix::zeros(self.config.layer_output_dim(), self.config.classes);
        d_w.add_matmul_tn(&pass.top, d_logits);
        store.accumulate(self.proj_w, &d_w);
        let d_b = Matrix::from_vec(1, self.config.classes, d_logits.column_sums()).expect("positive shape");
        store.accumulate(self.proj_b, &d_b);
        let mut d_x = d_logits.matmul_nt(store.value(self.proj_w));

        for (l, ids) in self.layers.iter().enumerate().rev() {
            let d_out = dropout_backward(&pass.dropout[l], &d_x);
            d_x = match (&pass.layers[l], ids.bwd) {
                (LayerCache::Uni(cache), None) => {
                    let g = recurrent_backward(cache, Self::weights(store, ids.fwd), &d_out);
                    Self::accumulate_cell(store, ids.fwd, &g.w_x, &g.w_h, &g.b);
                    g.inputs
                }
                (LayerCache::Bi(cache), Some(bwd)) => {
                    let (gf, gb) =
                        bidirectional_backward(cache, Self::weights(store, ids.fwd), Self::weights(store, bwd), &d_out);
                    Self::accumulate_cell(store, ids.fwd, &gf.w_x, &gf.w_h, &gf.b);
                    Self::accumulate_cell(store, bwd, &gb.w_x, &gb.w_h, &gb.b);
                    gf.inputs
                }
                _ => unreachable!("layer cache does not match network layout"),
            };
        }

        if !store.get(self.embedding).is_frozen() {
            embed_concat_backward(batch, &d_x, store.grad_mut(self.embedding));
        }
    }

    fn accumulate_cell<T: Real>(store: &mut ParamStore<T>, ids: CellIds, w_x: &Matrix<T>, w_h: &Matrix<T>, b: &Matrix<T>) {
        store.accumulate(ids.w_x, w_x);
        store.accumulate(ids.w_h, w_h);
        store.accumulate(ids.b, b);
    }

    /// Forward then backward; gradients are added to whatever `store` holds.
    pub fn forward_backward<T: Real>(
        &self,
        store: &mut ParamStore<T>,
        batch: &SequenceBatch,
        mode: Mode,
        seed: u64,
    ) -> Result<StepOutput> {
        let pass = self.forward(store, batch, mode, seed)?;
        self.backward(store, batch, &pass);
        Ok(StepOutput {
            loss: pass.loss(),
            tokens: pass.softmax.count,
            predictions: pass.predictions(batch),
        })
    }

    /// Argmax class ids per sentence in evaluation mode.
    pub fn predict<T: Real>(&self, store: &ParamStore<T>, batch: &SequenceBatch) -> Result<Vec<Vec<usize>>> {
        Ok(self.forward(store, batch, Mode::Eval, 0)?.predictions(batch))
    }
}
