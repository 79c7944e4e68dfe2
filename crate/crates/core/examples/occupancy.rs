//! Long-run residence in the two valleys of a tilted double well against
//! the prediction `P_a = τ_a / (τ_a + τ_b)`.

use sgd_diffusion::dynamics::{SgldConfig, StepperConfig, ValleyRegion};
use sgd_diffusion::escape_mc::occupancy_experiment;
use sgd_diffusion::kramers::{sgld_escape_time, stationary_occupancy, SaddleGeometry, ValleyGeometry};
use sgd_diffusion::landscapes::{DoubleWell, Potential1d, SeparableLandscape};

fn main() -> sgd_diffusion::Result<()> {
    let well = DoubleWell { height: 1.0, tilt: 0.1 };
    let (left, saddle, right) = well.critical_points();
    let diffusion = 0.15;
    let saddle_geom = SaddleGeometry::new(well.value(saddle), vec![well.curvature(saddle)])?;
    let tau = |x: f64| -> sgd_diffusion::Result<f64> {
        let valley = ValleyGeometry::new(well.value(x), vec![well.curvature(x)], 0)?;
        Ok(sgld_escape_time(&valley, &saddle_geom, well.value(saddle) - well.value(x), diffusion)?.tau)
    };
    let predicted = stationary_occupancy(&[tau(left)?, tau(right)?])?;

    let landscape = SeparableLandscape::new(well, 1)?;
    let regions = [ValleyRegion::new(vec![left], 0.6)?, ValleyRegion::new(vec![right], 0.6)?];
    let stepper = StepperConfig::Sgld(SgldConfig { eta: 0.005, diffusion, batch_size: None, sampling: Default::default() });
    let report = occupancy_experiment(&landscape, &regions, &stepper, 20_000_000, 3)?;
    println!("measured  [{:.3}, {:.3}] over {} transitions", report.fractions[0], report.fractions[1], report.transitions);
    println!("predicted [{:.3}, {:.3}]", predicted[0], predicted[1]);
    if report.low_confidence {
        println!("too few transitions for a confident estimate");
    }
    Ok(())
}
