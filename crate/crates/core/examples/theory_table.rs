//! Closed-form escape times for Styblinski-Tang under isotropic (SGLD) and
//! Hessian-aligned (SGD) noise, and the resulting multi-path rate.

use sgd_diffusion::kramers::{combine_rates, sgd_escape_time, sgld_escape_time, st_geometry};

fn main() -> sgd_diffusion::Result<()> {
    let (valley, saddle, barrier) = st_geometry(1, 1.0)?;
    println!("barrier ΔL = {barrier:.4}  H_a = {:.3}  H_b = {:.3}", valley.escape_eig, saddle.escape_eig);
    println!("{:>8} {:>8} {:>14}", "D", "ΔL/D", "τ");
    for diffusion in [20.0, 10.0, 7.0, 5.0, 4.0] {
        let p = sgld_escape_time(&valley, &saddle, barrier, diffusion)?;
        println!("{diffusion:>8.2} {:>8.3} {:>14.4}", p.barrier_ratio, p.tau);
    }
    let dim = 10;
    let (valley, saddle, barrier) = st_geometry(dim, 1.0)?;
    let one = sgld_escape_time(&valley, &saddle, barrier, 5.0)?.tau;
    let all = 1.0 / combine_rates(&vec![1.0 / one; dim])?;
    println!("{dim}-D, D = 5: one path τ = {one:.3}, any of {dim} paths τ = {all:.3}");
    println!("{:>6} {:>8} {:>14}", "B", "η", "SGD ln τ");
    for (b, eta) in [(10.0, 0.03), (10.0, 0.025), (12.0, 0.03)] {
        let p = sgd_escape_time(valley.escape_eig, saddle.escape_eig, barrier, b, eta, 0.5)?;
        let ln_tau = (2.0 * std::f64::consts::PI / saddle.escape_eig.abs()).ln() + p.exponent;
        println!("{b:>6} {eta:>8} {ln_tau:>14.2}");
    }
    Ok(())
}
