use std::sync::Arc;

use nalgebra::DMatrix;

use super::{check_batch, mean_over, Dataset, DatasetSpec, Landscape};
use crate::error::Result;

#[inline]
pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + eᶻ)` without overflow.
#[inline]
pub(crate) fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Cross-entropy of a linear logit `z = θ·x` (no bias term).
#[derive(Debug, Clone)]
pub struct LogisticLandscape {
    data: Arc<Dataset>,
}

impl LogisticLandscape {
    pub fn new(data: Arc<Dataset>) -> Self {
        LogisticLandscape { data }
    }

    pub fn dataset(&self) -> &Dataset {
        &self.data
    }

    #[inline]
    fn logit(&self, theta: &[f64], j: usize) -> f64 {
        theta.iter().zip(self.data.input(j)).map(|(t, x)| t * x).sum()
    }

    #[inline]
    fn add_sample_gradient(&self, theta: &[f64], j: usize, out: &mut [f64]) {
        let r = sigmoid(self.logit(theta, j)) - self.data.label(j);
        for (o, x) in out.iter_mut().zip(self.data.input(j)) {
            *o += r * x;
        }
    }
}

impl Landscape for LogisticLandscape {
    fn dim(&self) -> usize {
        self.data.input_dim()
    }

    fn sample_count(&self) -> Option<usize> {
        Some(self.data.len())
    }

    fn loss(&self, theta: &[f64]) -> f64 {
        let m = self.data.len();
        let total: f64 = (0..m)
            .map(|j| {
                let z = self.logit(theta, j);
                softplus(z) - self.data.label(j) * z
            })
            .sum();
        total / m as f64
    }

    fn gradient(&self, theta: &[f64], out: &mut [f64]) {
        let m = self.data.len();
        mean_over(0..m, m, out, |j, o| self.add_sample_gradient(theta, j, o));
    }

    fn minibatch_gradient(&self, theta: &[f64], batch: &[usize], out: &mut [f64]) -> Result<()> {
        check_batch(batch, self.data.len())?;
        mean_over(batch.iter().copied(), batch.len(), out, |j, o| self.add_sample_gradient(theta, j, o));
        Ok(())
    }

    /// `(1/m) Σ σ(z)(1 − σ(z)) x xᵀ`.
    fn hessian(&self, theta: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.dim();
        let m = self.data.len();
        let mut h = DMatrix::zeros(n, n);
        for j in 0..m {
            let s = sigmoid(self.logit(theta, j));
            let w = s * (1.0 - s);
            let x = self.data.input(j);
            for a in 0..n {
                let wa = w * x[a];
                for b in a..n {
                    h[(a, b)] += wa * x[b];
                }
            }
        }
        let inv = 1.0 / m as f64;
        for a in 0..n {
            for b in a..n {
                let v = h[(a, b)] * inv;
                h[(a, b)] = v;
                h[(b, a)] = v;
            }
        }
        Ok(h)
    }
}

pub fn logistic_landscape(dataset: &DatasetSpec) -> Result<LogisticLandscape> {
    Ok(LogisticLandscape::new(Arc::new(dataset.generate()?)))
}
