//! Minibatch noise covariance at a logistic-regression minimum compared
//! with `H/B` in the Hessian eigenbasis, and its trace against `1/B`.

use sgd_diffusion::landscapes::{logistic_landscape, newton, DatasetSpec, Landscape};
use sgd_diffusion::noise_lab::{covariance_hessian_fit, draw_sgn, estimate_sgn_covariance, DEFAULT_FILTER};
use sgd_diffusion::stats::{linear_fit, AxisTransform};

fn main() -> sgd_diffusion::Result<()> {
    let landscape = logistic_landscape(&DatasetSpec::new(1000, 20, 3))?;
    let minimum = newton(&landscape, &[0.0; 20], 100, 1e-10)?;
    let h = landscape.hessian(&minimum.theta)?;
    let batches = [1usize, 2, 4, 8];
    let mut traces = Vec::new();
    for &b in &batches {
        let c = estimate_sgn_covariance(&draw_sgn(&landscape, &minimum.theta, b, 100_000, 9)?)?;
        let fit = covariance_hessian_fit(&c, &h, b, DEFAULT_FILTER)?;
        println!("B = {b}: slope {:.3}  Pearson r {:.4}  ({} elements)", fit.slope, fit.pearson, fit.element_count);
        traces.push(c.trace());
    }
    let inv_b: Vec<f64> = batches.iter().map(|&b| 1.0 / b as f64).collect();
    let fit = linear_fit(&inv_b, &traces, AxisTransform::Reciprocal, AxisTransform::Identity)?;
    println!("tr C against 1/B: slope {:.4} (tr H = {:.4}), r = {:.5}", fit.slope, h.trace(), fit.pearson);
    Ok(())
}
