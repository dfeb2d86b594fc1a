use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Matrix, Mode, Network, ParamStore, Real, SequenceBatch};
use crate::embed::derive_seed;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckOptions {
    pub epsilon: f64,
    /// Coordinates sampled per weight array; biases are always checked in full.
    pub samples: usize,
    pub seed: u64,
}

impl Default for GradCheckOptions {
    fn default() -> Self {
        GradCheckOptions {
            epsilon: 1e-5,
            samples: 200,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamCheck {
    pub name: String,
    pub coordinates: usize,
    pub max_relative_error: f64,
    pub worst_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckReport {
    pub params: Vec<ParamCheck>,
    pub max_relative_error: f64,
}

impl GradCheckReport {
    pub fn worst(&self) -> Option<&ParamCheck> {
        self.params
            .iter()
            .max_by(|a, b| a.max_relative_error.total_cmp(&b.max_relative_error))
    }
}

fn is_bias(name: &str) -> bool {
    name.ends_with(".b")
}

/// Compares `analytic` (one matrix per store entry, in store order) against
/// central differences of `loss`. Frozen arrays are skipped.
pub fn check_gradients<T: Real>(
    store: &mut ParamStore<T>,
    analytic: &[Matrix<T>],
    mut loss: impl FnMut(&ParamStore<T>) -> Result<f64>,
    opts: &GradCheckOptions,
) -> Result<GradCheckReport> {
    assert_eq!(analytic.len(), store.len(), "one analytic gradient per parameter");
    let eps = T::lit(opts.epsilon);
    let mut params = Vec::new();
    let mut overall = 0.0f64;
    for p in 0..store.len() {
        let param = store.iter().nth(p).expect("index in range");
        if param.is_frozen() {
            continue;
        }
        let name = param.name().to_string();
        let len = param.len();
        let coords: Vec<usize> = if is_bias(&name) || len <= opts.samples {
            (0..len).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, p as u64, 0x6c));
            let mut v = index::sample(&mut rng, len, opts.samples).into_vec();
            v.sort_unstable();
            v
        };
        let pid = store.id(&name).expect("name from store");
        let mut worst = (0.0f64, 0usize);
        for &k in &coords {
            let orig = store.value(pid).data()[k];
            store.get_mut(pid).value_mut()[k] = orig + eps;
            let plus = loss(store)?;
            store.get_mut(pid).value_mut()[k] = orig - eps;
            let minus = loss(store)?;
            store.get_mut(pid).value_mut()[k] = orig;
            let numeric = (plus - minus) / (2.0 * opts.epsilon);
            let ga = analytic[p].data()[k].as_f64();
            let rel = (ga - numeric).abs() / ga.abs().max(numeric.abs()).max(1e-8);
            if rel > worst.0 {
                worst = (rel, k);
            }
        }
        overall = overall.max(worst.0);
        params.push(ParamCheck {
            name,
            coordinates: coords.len(),
            max_relative_error: worst.0,
            worst_index: worst.1,
        });
    }
    Ok(GradCheckReport {
        params,
        max_relative_error: overall,
    })
}

/// Runs forward/backward once and checks every parameter's gradient against
/// finite differences of the same (seeded) loss. Leaves the analytic gradient
/// in `store`.
pub fn gradient_check<T: Real>(
    network: &Network,
    store: &mut ParamStore<T>,
    batch: &SequenceBatch,
    mode: Mode,
    seed: u64,
    opts: &GradCheckOptions,
) -> Result<GradCheckReport> {
    store.zero_grads();
    network.forward_backward(store, batch, mode, seed)?;
    let analytic: Vec<Matrix<T>> = store.iter().map(|p| p.grad().clone()).collect();
    check_gradients(store, &analytic, |s| Ok(network.forward(s, batch, mode, seed)?.loss()), opts)
}
