//! A small dense neural network with reverse-mode gradients and Adam, written
//! directly against `f64` slices.
//!
//! The networks here are tiny (a few thousand parameters) but are evaluated
//! hundreds of millions of times per experiment, so the layout favors the
//! inner loops: all parameters live in one flat `Vec<f64>`, each layer's
//! weights stored row-major (output by input) followed by its biases. That
//! same flat order is the gradient layout, the Adam moment layout, and the
//! checkpoint order, so the four never disagree.
//!
//! Hidden layers use ReLU; the output layer is linear. Gradients are exact
//! (and are pinned to central finite differences in the tests).

use crate::error::{Error, Result};
use crate::rng::RngStream;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Dot product with four independent accumulators so the adds pipeline.
/// This is the hottest loop in the crate.
#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    let mut s3 = 0.0;
    let mut i = 0;
    while i + 4 <= n {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
        i += 4;
    }
    while i < n {
        s0 += a[i] * b[i];
        i += 1;
    }
    (s0 + s1) + (s2 + s3)
}

/// `row += a * x`, elementwise.
#[inline]
fn axpy(row: &mut [f64], a: f64, x: &[f64]) {
    debug_assert_eq!(row.len(), x.len());
    for (r, &v) in row.iter_mut().zip(x.iter()) {
        *r += a * v;
    }
}

/// A fully connected feed-forward network.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseNetwork {
    sizes: Vec<usize>,
    params: Vec<f64>,
    w_off: Vec<usize>,
    b_off: Vec<usize>,
}

/// Scratch buffers for one forward/backward pass, reusable across calls so
/// the training loops do not allocate per step.
#[derive(Debug, Clone)]
pub(crate) struct NetCache {
    /// `acts[0]` is the input; `acts[k+1]` is layer `k`'s post-activation
    /// output.
    acts: Vec<Vec<f64>>,
    delta_cur: Vec<f64>,
    delta_next: Vec<f64>,
}

impl NetCache {
    pub(crate) fn for_network(net: &DenseNetwork) -> Self {
        let acts = net.sizes.iter().map(|&n| vec![0.0; n]).collect();
        let widest = net.sizes[1..].iter().copied().max().unwrap_or(1);
        NetCache {
            acts,
            delta_cur: vec![0.0; widest],
            delta_next: vec![0.0; widest],
        }
    }

    /// Network output after the last `forward_cached` call.
    pub(crate) fn output(&self) -> &[f64] {
        self.acts.last().expect("cache always has layers")
    }
}

fn validate_sizes(layer_sizes: &[usize]) -> Result<()> {
    if layer_sizes.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "a network needs an input and an output layer, got {} sizes",
            layer_sizes.len()
        )));
    }
    for (i, &n) in layer_sizes.iter().enumerate() {
        if n == 0 {
            return Err(Error::InvalidArgument(format!(
                "layer {i} must have at least one unit"
            )));
        }
    }
    Ok(())
}

fn layout(layer_sizes: &[usize]) -> (Vec<usize>, Vec<usize>, usize) {
    let mut w_off = Vec::with_capacity(layer_sizes.len() - 1);
    let mut b_off = Vec::with_capacity(layer_sizes.len() - 1);
    let mut off = 0;
    for k in 0..layer_sizes.len() - 1 {
        let (inn, out) = (layer_sizes[k], layer_sizes[k + 1]);
        w_off.push(off);
        off += inn * out;
        b_off.push(off);
        off += out;
    }
    (w_off, b_off, off)
}

impl DenseNetwork {
    /// A network with all weights and biases zero.
    pub fn zeros(layer_sizes: &[usize]) -> Result<Self> {
        validate_sizes(layer_sizes)?;
        let (w_off, b_off, count) = layout(layer_sizes);
        Ok(DenseNetwork {
            sizes: layer_sizes.to_vec(),
            params: vec![0.0; count],
            w_off,
            b_off,
        })
    }

    /// A freshly initialized network: Glorot-uniform weights, each drawn
    /// from `[-sqrt(6/(fan_in+fan_out)), sqrt(6/(fan_in+fan_out))]`, biases
    /// zero. Weights are drawn in parameter order (layer by layer, each
    /// row-major), so a given stream always produces the same network.
    pub fn init(layer_sizes: &[usize], rng: &mut RngStream) -> Result<Self> {
        let mut net = DenseNetwork::zeros(layer_sizes)?;
        for k in 0..net.layer_count() {
            let inn = net.sizes[k];
            let out = net.sizes[k + 1];
            let bound = libm::sqrt(6.0 / (inn + out) as f64);
            let w = &mut net.params[net.w_off[k]..net.w_off[k] + inn * out];
            for v in w.iter_mut() {
                *v = (2.0 * rng.uniform() - 1.0) * bound;
            }
        }
        Ok(net)
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn layer_count(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn input_size(&self) -> usize {
        self.sizes[0]
    }

    pub fn output_size(&self) -> usize {
        *self.sizes.last().expect("validated non-empty")
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    /// All parameters in their flat canonical order.
    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Overwrites all parameters; `params` must match `param_count`.
    pub fn set_params(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.params.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} parameters, got {}",
                self.params.len(),
                params.len()
            )));
        }
        self.params.copy_from_slice(params);
        Ok(())
    }

    /// Network output for `input`. Pure: does not mutate the network.
    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        let mut cache = NetCache::for_network(self);
        self.forward_cached(input, &mut cache)?;
        Ok(cache.output().to_vec())
    }

    /// Forward pass that stores every layer's activation in `cache`.
    pub(crate) fn forward_cached(&self, input: &[f64], cache: &mut NetCache) -> Result<()> {
        if input.len() != self.input_size() {
            return Err(Error::InvalidArgument(format!(
                "expected input of length {}, got {}",
                self.input_size(),
                input.len()
            )));
        }
        cache.acts[0].copy_from_slice(input);
        let last = self.layer_count() - 1;
        for k in 0..self.layer_count() {
            let inn = self.sizes[k];
            let out = self.sizes[k + 1];
            let w = &self.params[self.w_off[k]..self.w_off[k] + inn * out];
            let b = &self.params[self.b_off[k]..self.b_off[k] + out];
            let (lo, hi) = cache.acts.split_at_mut(k + 1);
            let x = &lo[k];
            let y = &mut hi[0];
            for i in 0..out {
                let mut v = dot(&w[i * inn..(i + 1) * inn], x) + b[i];
                if k < last && v < 0.0 {
                    v = 0.0;
                }
                y[i] = v;
            }
        }
        Ok(())
    }

    /// Gradient of the scalar `L` with `dL/dy = dldy` at the network output,
    /// with respect to every parameter, in flat canonical order.
    pub fn backward(&self, input: &[f64], dldy: &[f64]) -> Result<Vec<f64>> {
        let mut cache = NetCache::for_network(self);
        self.forward_cached(input, &mut cache)?;
        let mut grad = vec![0.0; self.param_count()];
        self.backward_from_cache(&mut cache, dldy, &mut grad)?;
        Ok(grad)
    }

    /// Backpropagation through the activations left in `cache` by
    /// `forward_cached`, accumulating (`+=`) into `grad`.
    pub(crate) fn backward_from_cache(
        &self,
        cache: &mut NetCache,
        dldy: &[f64],
        grad: &mut [f64],
    ) -> Result<()> {
        if dldy.len() != self.output_size() {
            return Err(Error::InvalidArgument(format!(
                "expected output gradient of length {}, got {}",
                self.output_size(),
                dldy.len()
            )));
        }
        if grad.len() != self.param_count() {
            return Err(Error::InvalidArgument(format!(
                "expected gradient buffer of length {}, got {}",
                self.param_count(),
                grad.len()
            )));
        }
        cache.delta_cur[..dldy.len()].copy_from_slice(dldy);
        for k in (0..self.layer_count()).rev() {
            let inn = self.sizes[k];
            let out = self.sizes[k + 1];
            let x = &cache.acts[k];
            {
                let gw = &mut grad[self.w_off[k]..self.w_off[k] + inn * out];
                for i in 0..out {
                    let d = cache.delta_cur[i];
                    if d != 0.0 {
                        axpy(&mut gw[i * inn..(i + 1) * inn], d, x);
                    }
                }
            }
            {
                let gb = &mut grad[self.b_off[k]..self.b_off[k] + out];
                for (g, &d) in gb.iter_mut().zip(cache.delta_cur.iter()) {
                    *g += d;
                }
            }
            if k > 0 {
                let w = &self.params[self.w_off[k]..self.w_off[k] + inn * out];
                for v in cache.delta_next[..inn].iter_mut() {
                    *v = 0.0;
                }
                for i in 0..out {
                    let d = cache.delta_cur[i];
                    if d != 0.0 {
                        axpy(&mut cache.delta_next[..inn], d, &w[i * inn..(i + 1) * inn]);
                    }
                }
                // x is layer k-1's ReLU output, so x > 0 exactly where the
                // unit was active.
                for (v, &h) in cache.delta_next[..inn].iter_mut().zip(x.iter()) {
                    if h <= 0.0 {
                        *v = 0.0;
                    }
                }
                core::mem::swap(&mut cache.delta_cur, &mut cache.delta_next);
            }
        }
        Ok(())
    }
}

/// Mean squared error over a prediction vector, with its gradient.
///
/// Returns `(mean_d (pred_d - target_d)^2, dloss/dpred)`.
pub fn mse_loss(pred: &[f64], target: &[f64]) -> Result<(f64, Vec<f64>)> {
    if pred.is_empty() || pred.len() != target.len() {
        return Err(Error::InvalidArgument(format!(
            "mse needs matching non-empty vectors, got lengths {} and {}",
            pred.len(),
            target.len()
        )));
    }
    let n = pred.len() as f64;
    let mut loss = 0.0;
    let mut grad = Vec::with_capacity(pred.len());
    for (&p, &t) in pred.iter().zip(target.iter()) {
        let e = p - t;
        loss += e * e;
        grad.push(2.0 * e / n);
    }
    Ok((loss / n, grad))
}

/// Adam optimizer state for one parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
    step_count: u64,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamState {
    /// Fresh state (zero moments) with the usual decay defaults
    /// (0.9, 0.999, 1e-8).
    pub fn new(param_count: usize, learning_rate: f64) -> Result<Self> {
        if !(learning_rate > 0.0) || !learning_rate.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "learning rate must be positive, got {learning_rate}"
            )));
        }
        Ok(AdamState {
            m: vec![0.0; param_count],
            v: vec![0.0; param_count],
            step_count: 0,
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        })
    }

    /// Same state with the decay/guard constants replaced.
    pub fn with_hyperparams(mut self, beta1: f64, beta2: f64, epsilon: f64) -> Result<Self> {
        if !beta1.is_finite() || !(0.0..1.0).contains(&beta1) {
            return Err(Error::InvalidArgument(format!(
                "beta1 must lie in [0, 1), got {beta1}"
            )));
        }
        if !beta2.is_finite() || !(0.0..1.0).contains(&beta2) {
            return Err(Error::InvalidArgument(format!(
                "beta2 must lie in [0, 1), got {beta2}"
            )));
        }
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        self.beta1 = beta1;
        self.beta2 = beta2;
        self.epsilon = epsilon;
        Ok(self)
    }

    /// Number of optimizer steps applied so far.
    pub fn step_count(&self) -> u64 {
        self.step_count
    }
}

/// One bias-corrected Adam update of `net` along `grad`.
pub fn adam_step(net: &mut DenseNetwork, state: &mut AdamState, grad: &[f64]) -> Result<()> {
    if grad.len() != net.param_count() || state.m.len() != net.param_count() {
        return Err(Error::InvalidArgument(format!(
            "parameter/gradient/moment lengths disagree: {} params, {} grads, {} moments",
            net.param_count(),
            grad.len(),
            state.m.len()
        )));
    }
    state.step_count += 1;
    let t = state.step_count as f64;
    let bc1 = 1.0 - libm::pow(state.beta1, t);
    let bc2 = 1.0 - libm::pow(state.beta2, t);
    let (b1, b2) = (state.beta1, state.beta2);
    let lr = state.learning_rate;
    let eps = state.epsilon;
    for (((p, &g), m), v) in net
        .params
        .iter_mut()
        .zip(grad.iter())
        .zip(state.m.iter_mut())
        .zip(state.v.iter_mut())
    {
        *m = b1 * *m + (1.0 - b1) * g;
        *v = b2 * *v + (1.0 - b2) * g * g;
        let m_hat = *m / bc1;
        let v_hat = *v / bc2;
        *p -= lr * m_hat / (libm::sqrt(v_hat) + eps);
    }
    Ok(())
}
