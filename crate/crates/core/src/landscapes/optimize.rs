//! Locating minima to evaluate noise and curvature at.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::Landscape;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Minimized {
    pub theta: Vec<f64>,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Full-batch gradient descent until `‖∇L‖ ≤ grad_tol` or `max_iters`.
pub fn gradient_descent<L: Landscape + ?Sized>(
    landscape: &L,
    start: &[f64],
    lr: f64,
    max_iters: usize,
    grad_tol: f64,
) -> Result<Minimized> {
    if start.len() != landscape.dim() {
        return Err(invalid("start point has the wrong dimension"));
    }
    if !(lr > 0.0) {
        return Err(invalid("learning rate must be positive"));
    }
    let mut theta = start.to_vec();
    let mut g = vec![0.0; theta.len()];
    for it in 0..max_iters {
        landscape.gradient(&theta, &mut g);
        let gn = norm(&g);
        if !gn.is_finite() {
            return Err(Error::NumericalFailure(format!("gradient descent diverged at iteration {it}")));
        }
        if gn <= grad_tol {
            return Ok(Minimized { theta, grad_norm: gn, iterations: it, converged: true });
        }
        for (t, gi) in theta.iter_mut().zip(&g) {
            *t -= lr * gi;
        }
    }
    landscape.gradient(&theta, &mut g);
    let grad_norm = norm(&g);
    Ok(Minimized { theta, grad_norm, iterations: max_iters, converged: grad_norm <= grad_tol })
}

/// Newton iteration with the landscape Hessian; fails on a singular or
/// non-positive-definite Hessian.
pub fn newton<L: Landscape + ?Sized>(landscape: &L, start: &[f64], max_iters: usize, grad_tol: f64) -> Result<Minimized> {
    if start.len() != landscape.dim() {
        return Err(invalid("start point has the wrong dimension"));
    }
    let mut theta = start.to_vec();
    for it in 0..=max_iters {
        let g = landscape.grad(&theta);
        let gn = norm(&g);
        if !gn.is_finite() {
            return Err(Error::NumericalFailure("non-finite gradient in Newton iteration".into()));
        }
        if gn <= grad_tol || it == max_iters {
            return Ok(Minimized { theta, grad_norm: gn, iterations: it, converged: gn <= grad_tol });
        }
        let h = landscape.hessian(&theta)?;
        let step = h
            .cholesky()
            .ok_or_else(|| Error::NumericalFailure("Hessian is not positive definite".into()))?
            .solve(&DVector::from_vec(g));
        for (t, s) in theta.iter_mut().zip(step.iter()) {
            *t -= s;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscapes::{logistic_landscape, quadratic_landscape, DatasetSpec};

    #[test]
    fn quadratic_converges() {
        let q = quadratic_landscape(3, 2.0).unwrap();
        let gd = gradient_descent(&q, &[1.0, -2.0, 0.5], 0.2, 1000, 1e-10).unwrap();
        assert!(gd.converged && gd.theta.iter().all(|t| t.abs() < 1e-9));
        let nt = newton(&q, &[1.0, -2.0, 0.5], 5, 1e-12).unwrap();
        assert!(nt.converged && nt.iterations == 1);
    }

    #[test]
    fn logistic_newton_reaches_tolerance() {
        let l = logistic_landscape(&DatasetSpec::new(500, 5, 2)).unwrap();
        let m = newton(&l, &[0.0; 5], 50, 1e-10).unwrap();
        assert!(m.converged, "{}", m.grad_norm);
    }

    #[test]
    fn divergence_reported() {
        let q = quadratic_landscape(1, 1.0).unwrap();
        assert!(gradient_descent(&q, &[1.0], 5.0, 5000, 1e-12).is_err());
        let m = gradient_descent(&q, &[1.0], 0.1, 3, 1e-12).unwrap();
        assert!(!m.converged);
    }
}
