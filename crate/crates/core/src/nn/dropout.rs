use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Matrix, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Train,
    Eval,
}

/// Per-unit multipliers (0 or `1/(1-p)`); `None` means identity.
#[derive(Debug, Clone, PartialEq)]
pub struct DropoutMask<T> {
    scale: Option<Vec<T>>,
}

impl<T: Real> DropoutMask<T> {
    pub fn identity() -> Self {
        DropoutMask { scale: None }
    }

    pub fn is_identity(&self) -> bool {
        self.scale.is_none()
    }
}

/// Inverted dropout. `p` must lie in `[0, 1)`.
pub fn dropout_forward<T: Real>(x: &Matrix<T>, p: f64, mode: Mode, seed: u64) -> (Matrix<T>, DropoutMask<T>) {
    assert!((0.0..1.0).contains(&p), "dropout probability {p} outside [0, 1)");
    if mode == Mode::Eval || p == 0.0 {
        return (x.clone(), DropoutMask::identity());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let keep = T::lit(1.0 / (1.0 - p));
    let scale: Vec<T> = (0..x.len())
        .map(|_| if rng.gen::<f64>() < p { T::zero() } else { keep })
        .collect();
    let mut y = x.clone();
    for (v, &s) in y.data_mut().iter_mut().zip(&scale) {
        *v *= s;
    }
    (y, DropoutMask { scale: Some(scale) })
}

pub fn dropout_backward<T: Real>(mask: &DropoutMask<T>, d_out: &Matrix<T>) -> Matrix<T> {
    let mut d = d_out.clone();
    if let Some(scale) = &mask.scale {
        assert_eq!(scale.len(), d.len(), "dropout mask shape");
        for (v, &s) in d.data_mut().iter_mut().zip(scale) {
            *v *= s;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_cases() {
        let x: Matrix<f64> = Matrix::from_f64(1, 3, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(dropout_forward(&x, 0.0, Mode::Train, 1).0, x);
        assert_eq!(dropout_forward(&x, 0.7, Mode::Eval, 1).0, x);
    }

    #[test]
    fn backward_reuses_mask() {
        let x: Matrix<f64> = Matrix::filled_ones(1, 50);
        let (y, mask) = dropout_forward(&x, 0.5, Mode::Train, 9);
        let d = dropout_backward(&mask, &x);
        assert_eq!(y, d);
        assert!(y.data().iter().all(|&v| v == 0.0 || v == 2.0));
    }
}
