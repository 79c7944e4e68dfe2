//! SGD escape rate from a logistic-regression minimum as the surface is
//! sharpened by `k`: `−log γ̂` should be linear in `1/k`.

use sgd_diffusion::dynamics::{SgdConfig, StepperConfig};
use sgd_diffusion::escape_mc::{sweep_and_fit, EscapeScenario, SweepSpec, SweepVariable};
use sgd_diffusion::landscapes::{logistic_landscape, newton, DatasetSpec};

fn main() -> sgd_diffusion::Result<()> {
    let landscape = logistic_landscape(&DatasetSpec::new(2000, 10, 1))?;
    let minimum = newton(&landscape, &[0.0; 10], 100, 1e-10)?;
    let scenario = EscapeScenario {
        landscape,
        start: minimum.theta,
        radius: 0.2,
        stepper: StepperConfig::Sgd(SgdConfig { eta: 0.045, batch_size: 10, sampling: Default::default() }),
        max_iters: 20_000_000,
    };
    let spec = SweepSpec { variable: SweepVariable::SharpnessK, grid: vec![1.0, 1.1, 1.2, 1.3, 1.4], trials_per_point: 100 };
    let result = sweep_and_fit(&scenario, &spec, 11)?;
    println!("{:>6} {:>10} {:>12} {:>8}", "k", "1/k", "-log γ̂", "CoV");
    for p in &result.points {
        println!(
            "{:>6.2} {:>10.4} {:>12.4} {:>8.3}",
            p.x_raw,
            p.x_transformed,
            p.y_transformed.unwrap_or(f64::NAN),
            p.coefficient_of_variation.unwrap_or(f64::NAN)
        );
    }
    if let Some(fit) = result.fit {
        println!("slope {:.3}  Pearson r {:.4}", fit.slope, fit.pearson);
    }
    Ok(())
}
