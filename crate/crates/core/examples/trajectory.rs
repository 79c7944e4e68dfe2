//! One SGD trajectory on 2-D shifted Styblinski-Tang streamed as CSV, with
//! the diffusion matrix `D = (η / 2B) H` at the starting minimum.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sgd_diffusion::dynamics::{diffusion_matrix, write_trajectory_csv, SgdConfig, StepperConfig};
use sgd_diffusion::landscapes::{shifted_st_landscape, DatasetSpec, Landscape, ST_MINIMUM};

fn main() -> sgd_diffusion::Result<()> {
    let landscape = shifted_st_landscape(2, &DatasetSpec::new(2000, 2, 1))?;
    let start = [ST_MINIMUM; 2];
    let stepper = StepperConfig::Sgd(SgdConfig { eta: 0.02, batch_size: 4, sampling: Default::default() });
    println!("{}", diffusion_matrix(&landscape.hessian(&start)?, 0.02, 4)?);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let end = write_trajectory_csv(&landscape, &start, &stepper, 2000, 200, &mut rng, std::io::stdout())?;
    println!("final loss {:.4}", landscape.loss(&end.theta));
    Ok(())
}
