//! Loss surfaces used by the experiments.
//!
//! Every surface implements [`Landscape`]. Surfaces built over a dataset
//! expose per-sample structure through [`Landscape::minibatch_gradient`];
//! the full gradient is the minibatch gradient over all samples in index
//! order, so the two agree bit for bit.

mod dataset;
mod logistic;
mod mlp;
mod optimize;
mod scaled;
mod separable;

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::linalg::symmetrize;

pub use dataset::{Dataset, DatasetSpec, LabelRule};
pub use logistic::{logistic_landscape, LogisticLandscape};
pub use mlp::{mlp_landscape, Activation, MlpLandscape};
pub use optimize::{gradient_descent, newton, Minimized};
pub use scaled::{rescale, ScaledLandscape};
pub use separable::{
    quadratic_landscape, shifted_quadratic_landscape, shifted_st_landscape, st_landscape, DoubleWell,
    Potential1d, Quadratic, SeparableLandscape, ShiftedLandscape, StyblinskiTang, ST_MINIMUM, ST_SADDLE,
};

/// A differentiable loss over a flat parameter vector.
pub trait Landscape: Send + Sync {
    fn dim(&self) -> usize;

    /// Number of training samples, or `None` for a deterministic surface.
    fn sample_count(&self) -> Option<usize> {
        None
    }

    fn loss(&self, theta: &[f64]) -> f64;

    /// Full-data gradient written into `out`.
    fn gradient(&self, theta: &[f64], out: &mut [f64]);

    /// Mean per-sample gradient over `batch`. Surfaces without samples
    /// return the full gradient.
    fn minibatch_gradient(&self, theta: &[f64], batch: &[usize], out: &mut [f64]) -> Result<()> {
        if batch.is_empty() {
            return Err(invalid("empty minibatch"));
        }
        self.gradient(theta, out);
        Ok(())
    }

    fn hessian(&self, theta: &[f64]) -> Result<DMatrix<f64>>;

    /// Allocating convenience wrapper around [`Landscape::gradient`].
    fn grad(&self, theta: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim()];
        self.gradient(theta, &mut g);
        g
    }
}

macro_rules! forward_landscape {
    ($($ptr:ty),*) => {$(
        impl<L: Landscape + ?Sized> Landscape for $ptr {
            fn dim(&self) -> usize { (**self).dim() }
            fn sample_count(&self) -> Option<usize> { (**self).sample_count() }
            fn loss(&self, theta: &[f64]) -> f64 { (**self).loss(theta) }
            fn gradient(&self, theta: &[f64], out: &mut [f64]) { (**self).gradient(theta, out) }
            fn minibatch_gradient(&self, theta: &[f64], batch: &[usize], out: &mut [f64]) -> Result<()> {
                (**self).minibatch_gradient(theta, batch, out)
            }
            fn hessian(&self, theta: &[f64]) -> Result<DMatrix<f64>> { (**self).hessian(theta) }
        }
    )*};
}

forward_landscape!(&L, Box<L>, std::sync::Arc<L>);

/// Step used by surfaces whose Hessian comes from [`hessian_fd`].
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Hessian from central differences of the gradient, symmetrized as
/// `(A + Aᵀ)/2`. Coordinate `i` is perturbed by `step * (1 + |θᵢ|)`.
pub fn hessian_fd<L: Landscape + ?Sized>(landscape: &L, theta: &[f64], step: f64) -> Result<DMatrix<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(invalid(format!("finite-difference step must be positive, got {step}")));
    }
    let n = landscape.dim();
    let mut probe = theta.to_vec();
    let mut g_plus = vec![0.0; n];
    let mut g_minus = vec![0.0; n];
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        let h = step * (1.0 + theta[i].abs());
        probe[i] = theta[i] + h;
        landscape.gradient(&probe, &mut g_plus);
        probe[i] = theta[i] - h;
        landscape.gradient(&probe, &mut g_minus);
        probe[i] = theta[i];
        for j in 0..n {
            let v = (g_plus[j] - g_minus[j]) / (2.0 * h);
            if !v.is_finite() {
                return Err(Error::NumericalFailure(format!(
                    "non-finite gradient difference at coordinate {i}"
                )));
            }
            a[(j, i)] = v;
        }
    }
    Ok(symmetrize(&a))
}

/// Largest relative discrepancy between `landscape.gradient` and central
/// differences of `landscape.loss` at `theta`.
pub fn gradient_check<L: Landscape + ?Sized>(landscape: &L, theta: &[f64], step: f64) -> f64 {
    let g = landscape.grad(theta);
    let mut probe = theta.to_vec();
    let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-8);
    let mut worst = 0.0f64;
    for i in 0..theta.len() {
        let h = step * (1.0 + theta[i].abs());
        probe[i] = theta[i] + h;
        let up = landscape.loss(&probe);
        probe[i] = theta[i] - h;
        let down = landscape.loss(&probe);
        probe[i] = theta[i];
        let fd = (up - down) / (2.0 * h);
        worst = worst.max((fd - g[i]).abs() / scale);
    }
    worst
}

/// Accumulates `add(j, out)` over `indices` left to right and divides by
/// `count`.
pub(crate) fn mean_over<I, F>(indices: I, count: usize, out: &mut [f64], mut add: F)
where
    I: IntoIterator<Item = usize>,
    F: FnMut(usize, &mut [f64]),
{
    out.iter_mut().for_each(|v| *v = 0.0);
    for j in indices {
        add(j, out);
    }
    let inv = 1.0 / count as f64;
    out.iter_mut().for_each(|v| *v *= inv);
}

pub(crate) fn check_batch(batch: &[usize], samples: usize) -> Result<()> {
    if batch.is_empty() {
        return Err(invalid("empty minibatch"));
    }
    if let Some(&bad) = batch.iter().find(|&&j| j >= samples) {
        return Err(invalid(format!("sample index {bad} out of range for {samples} samples")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_hessian_of_quadratic_is_exact() {
        let q = quadratic_landscape(1, 3.7).unwrap();
        for step in [1e-2, 1e-3, 1e-4] {
            let h = hessian_fd(&q, &[0.8], step).unwrap();
            assert!((h[(0, 0)] - 3.7).abs() < 1e-8, "step {step}: {}", h[(0, 0)]);
        }
    }

    #[test]
    fn fd_hessian_of_st_at_minimum() {
        let st = st_landscape(2).unwrap();
        let h = hessian_fd(&st, &[ST_MINIMUM, ST_MINIMUM], DEFAULT_FD_STEP).unwrap();
        assert!((h[(0, 0)] - 34.583).abs() < 1e-3);
        assert!((h[(1, 1)] - 34.583).abs() < 1e-3);
        assert!(h[(0, 1)].abs() < 1e-6);
    }

    #[test]
    fn fd_hessian_of_zero_function() {
        let q = quadratic_landscape(3, 0.0).unwrap();
        let h = hessian_fd(&q, &[1.0, -2.0, 0.5], 1e-3).unwrap();
        assert_eq!(h, DMatrix::zeros(3, 3));
    }

    #[test]
    fn fd_rejects_bad_step() {
        let q = quadratic_landscape(1, 1.0).unwrap();
        assert!(matches!(hessian_fd(&q, &[0.0], 0.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn fd_reports_non_finite_gradients() {
        struct Blowup;
        impl Landscape for Blowup {
            fn dim(&self) -> usize { 1 }
            fn loss(&self, _: &[f64]) -> f64 { 0.0 }
            fn gradient(&self, _: &[f64], out: &mut [f64]) { out[0] = f64::NAN; }
            fn hessian(&self, t: &[f64]) -> Result<DMatrix<f64>> { hessian_fd(self, t, 1e-4) }
        }
        assert!(matches!(Blowup.hessian(&[0.0]), Err(Error::NumericalFailure(_))));
    }
}
