use std::fmt::Debug;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::{check_batch, mean_over, Dataset, DatasetSpec, Landscape};
use crate::error::{invalid, Result};

/// Global minimum of the one-dimensional Styblinski–Tang function, to the
/// six decimals usually quoted.
pub const ST_MINIMUM: f64 = -2.903534;
/// Saddle separating the two Styblinski–Tang valleys.
pub const ST_SADDLE: f64 = 0.156731;

/// A scalar potential applied coordinate-wise.
pub trait Potential1d: Send + Sync + Debug + Clone {
    fn value(&self, x: f64) -> f64;
    fn deriv(&self, x: f64) -> f64;
    fn curvature(&self, x: f64) -> f64;

    /// Newton iteration on the derivative starting from `x0`.
    fn critical_point_near(&self, x0: f64) -> f64 {
        let mut x = x0;
        for _ in 0..100 {
            let step = self.deriv(x) / self.curvature(x);
            x -= step;
            if step.abs() < 1e-15 * (1.0 + x.abs()) {
                break;
            }
        }
        x
    }
}

/// `f(x) = ½(x⁴ − 16x² + 5x)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StyblinskiTang;

impl StyblinskiTang {
    /// `(minimum, saddle, local minimum)` of the 1-D function, solved to
    /// machine precision.
    pub fn critical_points(&self) -> (f64, f64, f64) {
        (
            self.critical_point_near(ST_MINIMUM),
            self.critical_point_near(ST_SADDLE),
            self.critical_point_near(2.75),
        )
    }

    /// Barrier `f(b) − f(a)` between the global minimum and the saddle.
    pub fn barrier(&self) -> f64 {
        let (a, b, _) = self.critical_points();
        self.value(b) - self.value(a)
    }
}

impl Potential1d for StyblinskiTang {
    #[inline]
    fn value(&self, x: f64) -> f64 {
        let x2 = x * x;
        0.5 * (x2 * x2 - 16.0 * x2 + 5.0 * x)
    }
    #[inline]
    fn deriv(&self, x: f64) -> f64 {
        2.0 * x * x * x - 16.0 * x + 2.5
    }
    #[inline]
    fn curvature(&self, x: f64) -> f64 {
        6.0 * x * x - 16.0
    }
}

/// `f(x) = ½hx²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    pub curvature: f64,
}

impl Potential1d for Quadratic {
    #[inline]
    fn value(&self, x: f64) -> f64 {
        0.5 * self.curvature * x * x
    }
    #[inline]
    fn deriv(&self, x: f64) -> f64 {
        self.curvature * x
    }
    #[inline]
    fn curvature(&self, _x: f64) -> f64 {
        self.curvature
    }
}

/// Tilted double well `f(x) = h(x² − 1)² + cx`. A positive tilt makes the
/// left valley deeper.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleWell {
    pub height: f64,
    pub tilt: f64,
}

impl DoubleWell {
    /// `(left minimum, saddle, right minimum)`.
    pub fn critical_points(&self) -> (f64, f64, f64) {
        (self.critical_point_near(-1.0), self.critical_point_near(0.0), self.critical_point_near(1.0))
    }
}

impl Potential1d for DoubleWell {
    #[inline]
    fn value(&self, x: f64) -> f64 {
        let s = x * x - 1.0;
        self.height * s * s + self.tilt * x
    }
    #[inline]
    fn deriv(&self, x: f64) -> f64 {
        4.0 * self.height * x * (x * x - 1.0) + self.tilt
    }
    #[inline]
    fn curvature(&self, x: f64) -> f64 {
        4.0 * self.height * (3.0 * x * x - 1.0)
    }
}

/// Deterministic surface `L(θ) = Σᵢ f(θᵢ)`.
#[derive(Debug, Clone)]
pub struct SeparableLandscape<P> {
    pub potential: P,
    dim: usize,
}

impl<P: Potential1d> SeparableLandscape<P> {
    pub fn new(potential: P, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        Ok(SeparableLandscape { potential, dim })
    }
}

impl<P: Potential1d> Landscape for SeparableLandscape<P> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn loss(&self, theta: &[f64]) -> f64 {
        theta.iter().map(|&t| self.potential.value(t)).sum()
    }

    #[inline]
    fn gradient(&self, theta: &[f64], out: &mut [f64]) {
        for (o, &t) in out.iter_mut().zip(theta) {
            *o = self.potential.deriv(t);
        }
    }

    fn hessian(&self, theta: &[f64]) -> Result<DMatrix<f64>> {
        let diag: Vec<f64> = theta.iter().map(|&t| self.potential.curvature(t)).collect();
        Ok(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)))
    }
}

/// Data-driven surface: sample `j` contributes `Σᵢ f(θᵢ − x_{j,i})`, and the
/// loss is the mean over samples.
#[derive(Debug, Clone)]
pub struct ShiftedLandscape<P> {
    pub potential: P,
    data: Arc<Dataset>,
}

impl<P: Potential1d> ShiftedLandscape<P> {
    pub fn new(potential: P, data: Arc<Dataset>) -> Self {
        ShiftedLandscape { potential, data }
    }

    pub fn dataset(&self) -> &Dataset {
        &self.data
    }

    fn add_sample_gradient(&self, theta: &[f64], j: usize, out: &mut [f64]) {
        let x = self.data.input(j);
        for ((o, &t), &xi) in out.iter_mut().zip(theta).zip(x) {
            *o += self.potential.deriv(t - xi);
        }
    }
}

impl<P: Potential1d> Landscape for ShiftedLandscape<P> {
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
                let x = self.data.input(j);
                theta.iter().zip(x).map(|(&t, &xi)| self.potential.value(t - xi)).sum::<f64>()
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

    fn hessian(&self, theta: &[f64]) -> Result<DMatrix<f64>> {
        let m = self.data.len();
        let mut diag = vec![0.0; theta.len()];
        mean_over(0..m, m, &mut diag, |j, o| {
            let x = self.data.input(j);
            for ((d, &t), &xi) in o.iter_mut().zip(theta).zip(x) {
                *d += self.potential.curvature(t - xi);
            }
        });
        Ok(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)))
    }
}

pub fn st_landscape(dim: usize) -> Result<SeparableLandscape<StyblinskiTang>> {
    SeparableLandscape::new(StyblinskiTang, dim)
}

pub fn quadratic_landscape(dim: usize, curvature: f64) -> Result<SeparableLandscape<Quadratic>> {
    SeparableLandscape::new(Quadratic { curvature }, dim)
}

fn shifted<P: Potential1d>(potential: P, dim: usize, dataset: &DatasetSpec) -> Result<ShiftedLandscape<P>> {
    if dim == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    if dataset.input_dim != dim {
        return Err(invalid(format!(
            "dataset input_dim {} does not match landscape dimension {dim}",
            dataset.input_dim
        )));
    }
    Ok(ShiftedLandscape::new(potential, Arc::new(dataset.generate()?)))
}

/// Styblinski–Tang evaluated at `θ − x` for Gaussian samples `x`.
pub fn shifted_st_landscape(dim: usize, dataset: &DatasetSpec) -> Result<ShiftedLandscape<StyblinskiTang>> {
    shifted(StyblinskiTang, dim, dataset)
}

pub fn shifted_quadratic_landscape(
    dim: usize,
    curvature: f64,
    dataset: &DatasetSpec,
) -> Result<ShiftedLandscape<Quadratic>> {
    shifted(Quadratic { curvature }, dim, dataset)
}
