use super::{recurrent_backward, recurrent_forward, CellType, CellWeights, Direction, Matrix, Real, RecurrentCache, RecurrentGrads};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct BidirectionalCache<T> {
    pub forward: RecurrentCache<T>,
    pub backward: RecurrentCache<T>,
    output: Matrix<T>,
}

impl<T: Real> BidirectionalCache<T> {
    /// `B·T × 2H`: forward state followed by backward state.
    pub fn output(&self) -> &Matrix<T> {
        &self.output
    }
}

/// Forward half reads left to right, backward half right to left over the
/// unmasked span of each row. Both start from a zero state.
pub fn bidirectional_forward<T: Real>(
    cell: CellType,
    inputs: &Matrix<T>,
    batch: usize,
    mask: &[bool],
    fwd: CellWeights<'_, T>,
    bwd: CellWeights<'_, T>,
) -> Result<BidirectionalCache<T>> {
    if fwd.w_h.shape() != bwd.w_h.shape() {
        return Err(Error::Shape(format!(
            "direction hidden sizes differ: {:?} vs {:?}",
            fwd.w_h.shape(),
            bwd.w_h.shape()
        )));
    }
    let forward = recurrent_forward(cell, inputs, batch, mask, fwd, Direction::Forward)?;
    let backward = recurrent_forward(cell, inputs, batch, mask, bwd, Direction::Backward)?;
    let hidden = forward.hidden();
    let rows = inputs.rows();
    let mut output = Matrix::zeros(rows, 2 * hidden);
    for r in 0..rows {
        let out = output.row_mut(r);
        out[..hidden].copy_from_slice(forward.output().row(r));
        out[hidden..].copy_from_slice(backward.output().row(r));
    }
    Ok(BidirectionalCache {
        forward,
        backward,
        output,
    })
}

/// Returns the gradients of both directions; their `inputs` fields are summed
/// into the first one.
pub fn bidirectional_backward<T: Real>(
    cache: &BidirectionalCache<T>,
    fwd: CellWeights<'_, T>,
    bwd: CellWeights<'_, T>,
    d_out: &Matrix<T>,
) -> (RecurrentGrads<T>, RecurrentGrads<T>) {
    let hidden = cache.forward.hidden();
    let rows = d_out.rows();
    let mut d_fwd = Matrix::zeros(rows, hidden);
    let mut d_bwd = Matrix::zeros(rows, hidden);
    for r in 0..rows {
        let d = d_out.row(r);
        d_fwd.row_mut(r).copy_from_slice(&d[..hidden]);
        d_bwd.row_mut(r).copy_from_slice(&d[hidden..]);
    }
    let mut gf = recurrent_backward(&cache.forward, fwd, &d_fwd);
    let gb = recurrent_backward(&cache.backward, bwd, &d_bwd);
    for (a, &b) in gf.inputs.data_mut().iter_mut().zip(gb.inputs.data()) {
        *a += b;
    }
    (gf, gb)
}
