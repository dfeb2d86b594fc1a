use super::{Matrix, Real, SequenceBatch, NO_POS};
use crate::{Error, Result};

/// Rows `b * T + t` hold `emb[word] ++ onehot(pos)`; padded rows are zero.
pub fn embed_concat<T: Real>(batch: &SequenceBatch, emb: &Matrix<T>, pos_count: usize) -> Result<Matrix<T>> {
    let dim = emb.cols();
    let mut out = Matrix::zeros(batch.batch_size() * batch.steps(), dim + pos_count);
    for (r, &live) in batch.mask().iter().enumerate() {
        if !live {
            continue;
        }
        let word = batch.words()[r] as usize;
        if word >= emb.rows() {
            return Err(Error::data(format!("word id {word} out of range ({} rows)", emb.rows())));
        }
        let pos = batch.pos()[r];
        if pos != NO_POS && pos >= pos_count {
            return Err(Error::data(format!("POS id {pos} out of range ({pos_count} tags)")));
        }
        let row = out.row_mut(r);
        row[..dim].copy_from_slice(emb.row(word));
        if pos != NO_POS {
            row[dim + pos] = T::one();
        }
    }
    Ok(out)
}

/// Adds the word-vector part of `d_input` into the looked-up rows of `emb_grad`.
pub fn embed_concat_backward<T: Real>(batch: &SequenceBatch, d_input: &Matrix<T>, emb_grad: &mut Matrix<T>) {
    let dim = emb_grad.cols();
    for (r, &live) in batch.mask().iter().enumerate() {
        if !live {
            continue;
        }
        let word = batch.words()[r] as usize;
        let src = &d_input.row(r)[..dim];
        for (g, &d) in emb_grad.row_mut(word).iter_mut().zip(src) {
            *g += d;
        }
    }
}
