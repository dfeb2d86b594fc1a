use crate::nn::{ParamStore, Real};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// One bias-corrected Adam update of every trainable array, then zeroes all
/// gradients. Nothing is modified when a gradient is non-finite.
pub fn adam_step<T: Real>(store: &mut ParamStore<T>, cfg: &AdamConfig) -> Result<()> {
    for p in store.iter() {
        if !p.is_frozen() && !p.grad().is_finite() {
            return Err(Error::NonFiniteGradient(p.name().to_string()));
        }
    }
    let t = store.step() + 1;
    store.set_step(t);
    let (b1, b2) = (T::lit(cfg.beta1), T::lit(cfg.beta2));
    let (one_m_b1, one_m_b2) = (T::lit(1.0 - cfg.beta1), T::lit(1.0 - cfg.beta2));
    let bc1 = T::lit(1.0 - cfg.beta1.powi(t as i32));
    let bc2 = T::lit(1.0 - cfg.beta2.powi(t as i32));
    let lr = T::lit(cfg.learning_rate);
    let eps = T::lit(cfg.epsilon);
    for p in store.iter_mut() {
        let frozen = p.is_frozen();
        let (value, grad, m, v) = p.optimizer_parts();
        if !frozen {
            for i in 0..value.len() {
                let g = grad[i];
                m[i] = b1 * m[i] + one_m_b1 * g;
                v[i] = b2 * v[i] + one_m_b2 * g * g;
                let m_hat = m[i] / bc1;
                let v_hat = v[i] / bc2;
                value[i] -= lr * m_hat / (v_hat.sqrt() + eps);
            }
        }
        grad.fill(T::zero());
    }
    Ok(())
}
