use std::sync::Arc;

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::logistic::{sigmoid, softplus};
use super::{check_batch, hessian_fd, mean_over, Dataset, DatasetSpec, Landscape, DEFAULT_FD_STEP};
use crate::error::{invalid, Result};
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Tanh,
}

impl Activation {
    #[inline]
    fn apply(self, v: f64) -> f64 {
        match self {
            Activation::Relu => v.max(0.0),
            Activation::Tanh => v.tanh(),
        }
    }

    /// Derivative given the pre-activation `v`.
    #[inline]
    fn slope(self, v: f64) -> f64 {
        match self {
            Activation::Relu => {
                if v > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => {
                let t = v.tanh();
                1.0 - t * t
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Layer {
    inputs: usize,
    outputs: usize,
    offset: usize,
}

impl Layer {
    fn bias_offset(&self) -> usize {
        self.offset + self.inputs * self.outputs
    }
}

/// Fully connected binary classifier with a single output logit and
/// cross-entropy loss. `depth` counts weight layers, so `depth − 1` hidden
/// layers of `width` units each. Parameters are stored layer by layer as a
/// row-major weight matrix followed by its bias vector.
#[derive(Debug, Clone)]
pub struct MlpLandscape {
    data: Arc<Dataset>,
    layers: Vec<Layer>,
    activation: Activation,
    dim: usize,
}

struct Scratch {
    pre: Vec<Vec<f64>>,
    act: Vec<Vec<f64>>,
    delta: Vec<f64>,
    next_delta: Vec<f64>,
}

impl MlpLandscape {
    pub fn new(data: Arc<Dataset>, width: usize, depth: usize, activation: Activation) -> Result<Self> {
        if width == 0 {
            return Err(invalid("mlp width must be at least 1"));
        }
        if depth < 2 {
            return Err(invalid("mlp depth must be at least 2"));
        }
        let mut sizes = vec![data.input_dim()];
        sizes.extend(std::iter::repeat(width).take(depth - 1));
        sizes.push(1);
        let mut layers = Vec::with_capacity(depth);
        let mut offset = 0;
        for w in sizes.windows(2) {
            layers.push(Layer { inputs: w[0], outputs: w[1], offset });
            offset += w[0] * w[1] + w[1];
        }
        Ok(MlpLandscape { data, layers, activation, dim: offset })
    }

    pub fn dataset(&self) -> &Dataset {
        &self.data
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    /// Seeded initial point: weights `N(0, 2/fan_in)`, biases zero.
    pub fn init_params(&self, seed: u64) -> Vec<f64> {
        let mut rng = stream_rng(seed, 0);
        let mut theta = vec![0.0; self.dim];
        for layer in &self.layers {
            let std = (2.0 / layer.inputs as f64).sqrt();
            let weights = &mut theta[layer.offset..layer.offset + layer.inputs * layer.outputs];
            for w in weights {
                let z: f64 = StandardNormal.sample(&mut rng);
                *w = std * z;
            }
        }
        theta
    }

    fn scratch(&self) -> Scratch {
        let widest = self.layers.iter().map(|l| l.outputs.max(l.inputs)).max().unwrap_or(1);
        Scratch {
            pre: self.layers.iter().map(|l| vec![0.0; l.outputs]).collect(),
            act: self.layers.iter().map(|l| vec![0.0; l.inputs]).collect(),
            delta: vec![0.0; widest],
            next_delta: vec![0.0; widest],
        }
    }

    /// Forward pass; returns the output logit.
    fn forward(&self, theta: &[f64], x: &[f64], s: &mut Scratch) -> f64 {
        s.act[0].copy_from_slice(x);
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            let w = &theta[layer.offset..layer.bias_offset()];
            let b = &theta[layer.bias_offset()..layer.bias_offset() + layer.outputs];
            for o in 0..layer.outputs {
                let row = &w[o * layer.inputs..(o + 1) * layer.inputs];
                let v: f64 = row.iter().zip(&s.act[l]).map(|(a, c)| a * c).sum::<f64>() + b[o];
                s.pre[l][o] = v;
            }
            if l < last {
                for (dst, &v) in s.act[l + 1].iter_mut().zip(&s.pre[l]) {
                    *dst = self.activation.apply(v);
                }
            }
        }
        s.pre[last][0]
    }

    fn add_sample_gradient(&self, theta: &[f64], j: usize, out: &mut [f64], s: &mut Scratch) {
        let z = self.forward(theta, self.data.input(j), s);
        s.delta[0] = sigmoid(z) - self.data.label(j);
        for l in (0..self.layers.len()).rev() {
            let layer = self.layers[l];
            let bias = layer.bias_offset();
            for o in 0..layer.outputs {
                let d = s.delta[o];
                let row = &mut out[layer.offset + o * layer.inputs..layer.offset + (o + 1) * layer.inputs];
                for (g, a) in row.iter_mut().zip(&s.act[l]) {
                    *g += d * a;
                }
                out[bias + o] += d;
            }
            if l > 0 {
                let w = &theta[layer.offset..bias];
                for i in 0..layer.inputs {
                    let mut acc = 0.0;
                    for o in 0..layer.outputs {
                        acc += w[o * layer.inputs + i] * s.delta[o];
                    }
                    s.next_delta[i] = acc * self.activation.slope(s.pre[l - 1][i]);
                }
                std::mem::swap(&mut s.delta, &mut s.next_delta);
            }
        }
    }
}

impl Landscape for MlpLandscape {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample_count(&self) -> Option<usize> {
        Some(self.data.len())
    }

    fn loss(&self, theta: &[f64]) -> f64 {
        let mut s = self.scratch();
        let m = self.data.len();
        let total: f64 = (0..m)
            .map(|j| {
                let z = self.forward(theta, self.data.input(j), &mut s);
                softplus(z) - self.data.label(j) * z
            })
            .sum();
        total / m as f64
    }

    fn gradient(&self, theta: &[f64], out: &mut [f64]) {
        let mut s = self.scratch();
        let m = self.data.len();
        mean_over(0..m, m, out, |j, o| self.add_sample_gradient(theta, j, o, &mut s));
    }

    fn minibatch_gradient(&self, theta: &[f64], batch: &[usize], out: &mut [f64]) -> Result<()> {
        check_batch(batch, self.data.len())?;
        let mut s = self.scratch();
        mean_over(batch.iter().copied(), batch.len(), out, |j, o| {
            self.add_sample_gradient(theta, j, o, &mut s)
        });
        Ok(())
    }

    /// Central differences of the backprop gradient. Approximate across
    /// ReLU kinks; the tanh activation gives a smooth surface.
    fn hessian(&self, theta: &[f64]) -> Result<DMatrix<f64>> {
        hessian_fd(self, theta, DEFAULT_FD_STEP)
    }
}

pub fn mlp_landscape(dataset: &DatasetSpec, width: usize, depth: usize, activation: Activation) -> Result<MlpLandscape> {
    MlpLandscape::new(Arc::new(dataset.generate()?), width, depth, activation)
}
