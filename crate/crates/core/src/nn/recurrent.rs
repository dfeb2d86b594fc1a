use super::matrix::{vec_mat_add, vec_mat_t};
use super::real::sigmoid;
use super::{CellType, Matrix, Real};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

/// Borrowed weights of one recurrent cell. `w_x` is `in × G·H`, `w_h` is
/// `H × G·H` and `b` is `1 × G·H`, where `G` is 1 for the RNN and 4 for the
/// LSTM with gate blocks ordered input, forget, candidate, output.
#[derive(Debug, Clone, Copy)]
pub struct CellWeights<'a, T> {
    pub w_x: &'a Matrix<T>,
    pub w_h: &'a Matrix<T>,
    pub b: &'a Matrix<T>,
}

impl<'a, T: Real> CellWeights<'a, T> {
    fn check(&self, cell: CellType, input_dim: usize) -> Result<usize> {
        let g = cell.gates();
        let h = self.w_h.rows();
        let ok = self.w_h.cols() == g * h
            && self.w_x.rows() == input_dim
            && self.w_x.cols() == g * h
            && self.b.shape() == (1, g * h);
        if !ok {
            return Err(Error::Shape(format!(
                "{cell:?} weights w_x {:?}, w_h {:?}, b {:?} do not fit input dimension {input_dim}",
                self.w_x.shape(),
                self.w_h.shape(),
                self.b.shape()
            )));
        }
        Ok(h)
    }
}

/// Everything the backward pass needs from one direction of one layer.
#[derive(Debug, Clone)]
pub struct RecurrentCache<T> {
    cell: CellType,
    direction: Direction,
    batch: usize,
    steps: usize,
    hidden: usize,
    mask: Vec<bool>,
    inputs: Matrix<T>,
    h: Matrix<T>,
    h_prev: Matrix<T>,
    c: Option<Matrix<T>>,
    c_prev: Option<Matrix<T>>,
    gates: Matrix<T>,
}

impl<T: Real> RecurrentCache<T> {
    /// Hidden states, one row per `b * T + t`.
    pub fn output(&self) -> &Matrix<T> {
        &self.h
    }

    /// Cell states (LSTM only).
    pub fn cell_state(&self) -> Option<&Matrix<T>> {
        self.c.as_ref()
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    pub fn cell(&self) -> CellType {
        self.cell
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }
}

#[derive(Debug, Clone)]
pub struct RecurrentGrads<T> {
    pub w_x: Matrix<T>,
    pub w_h: Matrix<T>,
    pub b: Matrix<T>,
    pub inputs: Matrix<T>,
}

fn step_order(steps: usize, direction: Direction) -> Box<dyn Iterator<Item = usize>> {
    match direction {
        Direction::Forward => Box::new(0..steps),
        Direction::Backward => Box::new((0..steps).rev()),
    }
}

pub fn rnn_forward<T: Real>(
    inputs: &Matrix<T>,
    batch: usize,
    mask: &[bool],
    weights: CellWeights<'_, T>,
    direction: Direction,
) -> Result<RecurrentCache<T>> {
    recurrent_forward(CellType::Rnn, inputs, batch, mask, weights, direction)
}

pub fn lstm_forward<T: Real>(
    inputs: &Matrix<T>,
    batch: usize,
    mask: &[bool],
    weights: CellWeights<'_, T>,
    direction: Direction,
) -> Result<RecurrentCache<T>> {
    recurrent_forward(CellType::Lstm, inputs, batch, mask, weights, direction)
}

/// Runs one cell over `inputs` (`B·T × in`, rows `b * T + t`) with zero
/// initial state. Masked steps carry the previous state through unchanged.
pub fn recurrent_forward<T: Real>(
    cell: CellType,
    inputs: &Matrix<T>,
    batch: usize,
    mask: &[bool],
    weights: CellWeights<'_, T>,
    direction: Direction,
) -> Result<RecurrentCache<T>> {
    let hidden = weights.check(cell, inputs.cols())?;
    if batch == 0 || inputs.rows() % batch != 0 || mask.len() != inputs.rows() {
        return Err(Error::Shape(format!(
            "{} input rows and {} mask entries for batch size {batch}",
            inputs.rows(),
            mask.len()
        )));
    }
    let steps = inputs.rows() / batch;
    let gh = cell.gates() * hidden;
    let n = batch * steps;

    let mut z = inputs.matmul(weights.w_x);
    z.add_row_vector(weights.b.data());

    let mut h = Matrix::zeros(n, hidden);
    let mut h_prev = Matrix::zeros(n, hidden);
    let mut gates = Matrix::zeros(n, gh);
    let lstm = cell == CellType::Lstm;
    let mut c = lstm.then(|| Matrix::zeros(n, hidden));
    let mut c_prev = lstm.then(|| Matrix::zeros(n, hidden));

    let mut h_state = vec![T::zero(); hidden];
    let mut c_state = vec![T::zero(); hidden];
    let mut a = vec![T::zero(); gh];
    for b in 0..batch {
        h_state.fill(T::zero());
        c_state.fill(T::zero());
        for t in step_order(steps, direction) {
            let r = b * steps + t;
            h_prev.row_mut(r).copy_from_slice(&h_state);
            if let Some(cp) = c_prev.as_mut() {
                cp.row_mut(r).copy_from_slice(&c_state);
            }
            if mask[r] {
                a.copy_from_slice(z.row(r));
                vec_mat_add(&h_state, weights.w_h, &mut a);
                if a.iter().any(|x| !x.is_finite()) {
                    return Err(Error::NumericalOverflow(format!(
                        "non-finite pre-activation in {cell:?} at batch row {b}, step {t}"
                    )));
                }
                let g = gates.row_mut(r);
                match cell {
                    CellType::Rnn => {
                        for k in 0..hidden {
                            g[k] = a[k].tanh();
                            h_state[k] = g[k];
                        }
                    }
                    CellType::Lstm => {
                        for k in 0..hidden {
                            let i = sigmoid(a[k]);
                            let f = sigmoid(a[hidden + k]);
                            let cand = a[2 * hidden + k].tanh();
                            let o = sigmoid(a[3 * hidden + k]);
                            g[k] = i;
                            g[hidden + k] = f;
                            g[2 * hidden + k] = cand;
                            g[3 * hidden + k] = o;
                            c_state[k] = f * c_state[k] + i * cand;
                            h_state[k] = o * c_state[k].tanh();
                        }
                    }
                }
            }
            h.row_mut(r).copy_from_slice(&h_state);
            if let Some(cc) = c.as_mut() {
                cc.row_mut(r).copy_from_slice(&c_state);
            }
        }
    }

    Ok(RecurrentCache {
        cell,
        direction,
        batch,
        steps,
        hidden,
        mask: mask.to_vec(),
        inputs: inputs.clone(),
        h,
        h_prev,
        c,
        c_prev,
        gates,
    })
}

/// Backpropagation through time. `d_out` is the loss gradient with respect to
/// every hidden state in [`RecurrentCache::output`].
pub fn recurrent_backward<T: Real>(
    cache: &RecurrentCache<T>,
    weights: CellWeights<'_, T>,
    d_out: &Matrix<T>,
) -> RecurrentGrads<T> {
    let (batch, steps, hidden) = (cache.batch, cache.steps, cache.hidden);
    assert_eq!(d_out.shape(), cache.h.shape(), "upstream gradient shape");
    let gh = cache.cell.gates() * hidden;
    let mut dz = Matrix::zeros(batch * steps, gh);
    let mut dh_carry = vec![T::zero(); hidden];
    let mut dc_carry = vec![T::zero(); hidden];
    let mut dh = vec![T::zero(); hidden];
    let one = T::one();

    for b in 0..batch {
        dh_carry.fill(T::zero());
        dc_carry.fill(T::zero());
        // Reverse of the order in which the forward pass visited the steps.
        let reverse = match cache.direction {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        };
        for t in step_order(steps, reverse) {
            let r = b * steps + t;
            for k in 0..hidden {
                dh[k] = d_out.get(r, k) + dh_carry[k];
            }
            if !cache.mask[r] {
                dh_carry.copy_from_slice(&dh);
                continue;
            }
            let g = cache.gates.row(r);
            let dzr = dz.row_mut(r);
            match cache.cell {
                CellType::Rnn => {
                    for k in 0..hidden {
                        dzr[k] = dh[k] * (one - g[k] * g[k]);
                    }
                }
                CellType::Lstm => {
                    let c = cache.c.as_ref().expect("lstm cache").row(r);
                    let c_prev = cache.c_prev.as_ref().expect("lstm cache").row(r);
                    for k in 0..hidden {
                        let (i, f, cand, o) = (g[k], g[hidden + k], g[2 * hidden + k], g[3 * hidden + k]);
                        let tc = c[k].tanh();
                        let dc = dc_carry[k] + dh[k] * o * (one - tc * tc);
                        dzr[k] = dc * cand * i * (one - i);
                        dzr[hidden + k] = dc * c_prev[k] * f * (one - f);
                        dzr[2 * hidden + k] = dc * i * (one - cand * cand);
                        dzr[3 * hidden + k] = dh[k] * tc * o * (one - o);
                        dc_carry[k] = dc * f;
                    }
                }
            }
            vec_mat_t(dz.row(r), weights.w_h, &mut dh_carry);
        }
    }

    let mut w_x = Matrix::zeros(weights.w_x.rows(), gh);
    w_x.add_matmul_tn(&cache.inputs, &dz);
    let mut w_h = Matrix::zeros(hidden, gh);
    w_h.add_matmul_tn(&cache.h_prev, &dz);
    let b = Matrix::from_vec(1, gh, dz.column_sums()).expect("positive shape");
    let inputs = dz.matmul_nt(weights.w_x);
    RecurrentGrads { w_x, w_h, b, inputs }
}
