use super::{Matrix, Real};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct SoftmaxOutput<T> {
    /// Mean of `-log p[label]` over unmasked rows (0 when every row is masked).
    pub loss: T,
    pub probs: Matrix<T>,
    /// Gradient of `loss` with respect to the logits.
    pub grad: Matrix<T>,
    /// Argmax per row; ties go to the lowest class id.
    pub predictions: Vec<usize>,
    pub count: usize,
}

pub fn softmax_xent<T: Real>(logits: &Matrix<T>, labels: &[usize], mask: &[bool]) -> Result<SoftmaxOutput<T>> {
    let classes = logits.cols();
    if classes < 2 {
        return Err(Error::config(format!("softmax needs at least 2 classes, got {classes}")));
    }
    let rows = logits.rows();
    if labels.len() != rows || mask.len() != rows {
        return Err(Error::Shape(format!(
            "{rows} logit rows, {} labels, {} mask entries",
            labels.len(),
            mask.len()
        )));
    }
    let count = mask.iter().filter(|&&m| m).count();
    let mut probs = Matrix::zeros(rows, classes);
    let mut grad = Matrix::zeros(rows, classes);
    let mut predictions = Vec::with_capacity(rows);
    let mut total = T::zero();
    let inv_n = if count > 0 { T::one() / T::lit(count as f64) } else { T::zero() };

    for r in 0..rows {
        let z = logits.row(r);
        let mut best = 0;
        for k in 1..classes {
            if z[k] > z[best] {
                best = k;
            }
        }
        predictions.push(best);
        let max = z[best];
        let p = probs.row_mut(r);
        // `rest` is the mass of every class but the argmax, so the normalizer
        // is `1 + rest` and its log keeps full precision through ln_1p.
        let mut rest = T::zero();
        for k in 0..classes {
            p[k] = (z[k] - max).exp();
            if k != best {
                rest += p[k];
            }
        }
        let sum = T::one() + rest;
        for v in p.iter_mut() {
            *v /= sum;
        }
        if !mask[r] {
            continue;
        }
        let label = labels[r];
        if label >= classes {
            return Err(Error::data(format!("label id {label} out of range ({classes} classes)")));
        }
        total += rest.ln_1p() - (z[label] - max);
        let g = grad.row_mut(r);
        for k in 0..classes {
            g[k] = probs.get(r, k) * inv_n;
        }
        g[label] -= inv_n;
    }
    Ok(SoftmaxOutput {
        loss: total * inv_n,
        probs,
        grad,
        predictions,
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_logits() {
        let z: Matrix<f64> = Matrix::zeros(1, 3);
        let out = softmax_xent(&z, &[2], &[true]).unwrap();
        assert!((out.loss - 3f64.ln()).abs() < 1e-15);
        assert!(out.probs.data().iter().all(|p| (p - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn masked_rows_are_inert() {
        let z: Matrix<f64> = Matrix::from_f64(2, 2, &[1.0, 2.0, 5.0, -1.0]).unwrap();
        let out = softmax_xent(&z, &[0, 99], &[true, false]).unwrap();
        assert_eq!(out.count, 1);
        assert_eq!(out.grad.row(1), &[0.0, 0.0]);
        assert!(softmax_xent(&Matrix::<f64>::zeros(1, 1), &[0], &[true]).is_err());
    }
}
