use nalgebra::DMatrix;
use smallvec::SmallVec;

use super::Landscape;
use crate::error::{invalid, Result};

type Scratch = SmallVec<[f64; 32]>;

/// Sharpness rescaling `L_k(θ) = L(√k·θ)`: gradients pick up `√k` and the
/// Hessian picks up `k`, while barrier heights are unchanged.
#[derive(Debug, Clone)]
pub struct ScaledLandscape<L> {
    base: L,
    k: f64,
    sqrt_k: f64,
}

impl<L: Landscape> ScaledLandscape<L> {
    pub fn base(&self) -> &L {
        &self.base
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    #[inline]
    fn stretch(&self, theta: &[f64]) -> Scratch {
        theta.iter().map(|t| self.sqrt_k * t).collect()
    }
}

pub fn rescale<L: Landscape>(base: L, k: f64) -> Result<ScaledLandscape<L>> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(invalid(format!("sharpness factor k must be positive, got {k}")));
    }
    Ok(ScaledLandscape { base, k, sqrt_k: k.sqrt() })
}

impl<L: Landscape> Landscape for ScaledLandscape<L> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn sample_count(&self) -> Option<usize> {
        self.base.sample_count()
    }

    fn loss(&self, theta: &[f64]) -> f64 {
        self.base.loss(&self.stretch(theta))
    }

    fn gradient(&self, theta: &[f64], out: &mut [f64]) {
        self.base.gradient(&self.stretch(theta), out);
        out.iter_mut().for_each(|g| *g *= self.sqrt_k);
    }

    fn minibatch_gradient(&self, theta: &[f64], batch: &[usize], out: &mut [f64]) -> Result<()> {
        self.base.minibatch_gradient(&self.stretch(theta), batch, out)?;
        out.iter_mut().for_each(|g| *g *= self.sqrt_k);
        Ok(())
    }

    fn hessian(&self, theta: &[f64]) -> Result<DMatrix<f64>> {
        Ok(self.base.hessian(&self.stretch(theta))? * self.k)
    }
}
