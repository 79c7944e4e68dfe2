//! Shape of minibatch gradient noise at a trained MLP: tail heaviness of
//! the noise norms against a covariance-matched Gaussian and an α-stable
//! sample.

use sgd_diffusion::landscapes::{gradient_descent, mlp_landscape, Activation, DatasetSpec, Landscape};
use sgd_diffusion::noise_lab::{
    draw_sgn, estimate_sgn_covariance, gaussian_with_covariance, levy_sample, norm_histogram, tail_statistic,
};

fn main() -> sgd_diffusion::Result<()> {
    let dataset = DatasetSpec::new(1000, 10, 4);
    let landscape = mlp_landscape(&dataset, 10, 3, Activation::Relu)?;
    let trained = gradient_descent(&landscape, &landscape.init_params(dataset.seed), 0.1, 5000, 1e-6)?;
    println!("{} parameters, ‖∇L‖ = {:.3e} after training", landscape.dim(), trained.grad_norm);

    let samples = draw_sgn(&landscape, &trained.theta, 32, 10_000, 1)?;
    let gaussian = gaussian_with_covariance(&estimate_sgn_covariance(&samples)?, 10_000, 2)?;
    let stable = levy_sample(1.2, 1.0, landscape.dim(), 10_000, 3)?;

    let report = |name: &str, norms: &[f64]| -> sgd_diffusion::Result<()> {
        let t = tail_statistic(norms)?;
        println!("{name:<24} max/median {:>10.3}  excess kurtosis of log {:>7.3}", t.max_over_median, t.excess_kurtosis_of_log);
        Ok(())
    };
    report("minibatch noise, B = 32", &samples.norms())?;
    report("matched Gaussian", &gaussian.iter().map(|v| v.norm()).collect::<Vec<_>>())?;
    report("stable, α = 1.2", &stable.iter().map(|v| v.norm()).collect::<Vec<_>>())?;

    let hist = norm_histogram(&samples.draws, 20)?;
    println!("noise-norm histogram mode at {:.4}", hist.mode());
    Ok(())
}
