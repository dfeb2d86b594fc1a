use std::collections::HashMap;

use super::{Matrix, Real};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamId(usize);

impl ParamId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A named array with its gradient and Adam moments, all of one shape.
#[derive(Debug, Clone, PartialEq)]
pub struct Param<T> {
    name: String,
    value: Matrix<T>,
    grad: Matrix<T>,
    m: Matrix<T>,
    v: Matrix<T>,
    frozen: bool,
}

impl<T: Real> Param<T> {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self) -> &Matrix<T> {
        &self.value
    }

    pub fn value_mut(&mut self) -> &mut [T] {
        self.value.data_mut()
    }

    pub fn grad(&self) -> &Matrix<T> {
        &self.grad
    }

    pub fn grad_mut(&mut self) -> &mut Matrix<T> {
        &mut self.grad
    }

    pub fn first_moment(&self) -> &Matrix<T> {
        &self.m
    }

    pub fn second_moment(&self) -> &Matrix<T> {
        &self.v
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn len(&self) -> usize {
        self.value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.value.is_empty()
    }

    /// (value, grad, m, v) for an optimizer update.
    pub fn optimizer_parts(&mut self) -> (&mut [T], &mut [T], &mut [T], &mut [T]) {
        (
            self.value.data_mut(),
            self.grad.data_mut(),
            self.m.data_mut(),
            self.v.data_mut(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParamStore<T> {
    params: Vec<Param<T>>,
    index: HashMap<String, usize>,
    step: u64,
}

impl<T: Real> ParamStore<T> {
    pub fn new() -> Self {
        ParamStore {
            params: Vec::new(),
            index: HashMap::new(),
            step: 0,
        }
    }

    pub fn add(&mut self, name: &str, value: Matrix<T>) -> Result<ParamId> {
        if self.index.contains_key(name) {
            return Err(Error::config(format!("duplicate parameter name `{name}`")));
        }
        if !value.is_finite() {
            return Err(Error::data(format!("parameter `{name}` has non-finite entries")));
        }
        let (r, c) = value.shape();
        let id = self.params.len();
        self.params.push(Param {
            name: name.to_string(),
            value,
            grad: Matrix::zeros(r, c),
            m: Matrix::zeros(r, c),
            v: Matrix::zeros(r, c),
            frozen: false,
        });
        self.index.insert(name.to_string(), id);
        Ok(ParamId(id))
    }

    pub fn id(&self, name: &str) -> Option<ParamId> {
        self.index.get(name).map(|&i| ParamId(i))
    }

    pub fn get(&self, id: ParamId) -> &Param<T> {
        &self.params[id.0]
    }

    pub fn get_mut(&mut self, id: ParamId) -> &mut Param<T> {
        &mut self.params[id.0]
    }

    pub fn by_name(&self, name: &str) -> Option<&Param<T>> {
        self.id(name).map(|id| self.get(id))
    }

    pub fn value(&self, id: ParamId) -> &Matrix<T> {
        &self.params[id.0].value
    }

    pub fn grad(&self, id: ParamId) -> &Matrix<T> {
        &self.params[id.0].grad
    }

    pub fn grad_mut(&mut self, id: ParamId) -> &mut Matrix<T> {
        &mut self.params[id.0].grad
    }

    /// Adds `delta` into the gradient of `id`.
    pub fn accumulate(&mut self, id: ParamId, delta: &Matrix<T>) {
        let g = &mut self.params[id.0].grad;
        assert_eq!(g.shape(), delta.shape(), "gradient shape mismatch for `{}`", self.params[id.0].name);
        for (a, &b) in g.data_mut().iter_mut().zip(delta.data()) {
            *a += b;
        }
    }

    pub fn set_frozen(&mut self, id: ParamId, frozen: bool) {
        self.params[id.0].frozen = frozen;
    }

    pub fn iter(&self) -> impl Iterator<Item = &Param<T>> {
        self.params.iter()
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut Param<T>> {
        self.params.iter_mut()
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn set_step(&mut self, step: u64) {
        self.step = step;
    }

    pub fn zero_grads(&mut self) {
        for p in &mut self.params {
            p.grad.fill(T::zero());
        }
    }

    pub fn parameter_count(&self) -> usize {
        self.params.iter().map(Param::len).sum()
    }

    /// L2 norm over all non-frozen gradients.
    pub fn grad_norm(&self) -> f64 {
        self.params
            .iter()
            .filter(|p| !p.frozen)
            .flat_map(|p| p.grad.data().iter())
            .map(|g| g.as_f64() * g.as_f64())
            .sum::<f64>()
            .sqrt()
    }

    /// Rescales gradients so their global norm is at most `max_norm`. Returns
    /// the norm before clipping.
    pub fn clip_grad_norm(&mut self, max_norm: f64) -> f64 {
        let norm = self.grad_norm();
        if norm.is_finite() && norm > max_norm {
            let scale = T::lit(max_norm / norm);
            for p in self.params.iter_mut().filter(|p| !p.frozen) {
                p.grad.data_mut().iter_mut().for_each(|g| *g *= scale);
            }
        }
        norm
    }
}
