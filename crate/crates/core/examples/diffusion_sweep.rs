//! SGLD escape rate against the diffusion constant on 1-D Styblinski-Tang.
//! The slope of `−log γ̂` against `1/D` estimates the barrier height.

use sgd_diffusion::dynamics::{SgldConfig, StepperConfig};
use sgd_diffusion::escape_mc::{sweep_and_fit, EscapeScenario, SweepSpec, SweepVariable};
use sgd_diffusion::kramers::st_geometry;
use sgd_diffusion::landscapes::{st_landscape, StyblinskiTang};

fn main() -> sgd_diffusion::Result<()> {
    let (_, _, barrier) = st_geometry(1, 1.0)?;
    let (minimum, _, neighbour) = StyblinskiTang.critical_points();
    let scenario = EscapeScenario {
        landscape: st_landscape(1)?,
        start: vec![minimum],
        radius: neighbour - minimum,
        stepper: StepperConfig::Sgld(SgldConfig { eta: 0.003, diffusion: 1.0, batch_size: None, sampling: Default::default() }),
        max_iters: 200_000_000,
    };
    let grid = [8.0, 7.5, 7.0, 6.5, 6.0].iter().map(|r| barrier / r).collect();
    let spec = SweepSpec { variable: SweepVariable::DiffusionD, grid, trials_per_point: 100 };
    let result = sweep_and_fit(&scenario, &spec, 5)?;
    for p in &result.points {
        println!("D = {:.4}  1/D = {:.4}  -log γ̂ = {:.4}", p.x_raw, p.x_transformed, p.y_transformed.unwrap_or(f64::NAN));
    }
    if let Some(fit) = result.fit {
        println!("fitted barrier {:.2}  true barrier {:.2}  Pearson r {:.4}", fit.slope, barrier, fit.pearson);
    }
    Ok(())
}
