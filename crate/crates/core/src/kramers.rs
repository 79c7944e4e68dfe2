//! Closed-form mean escape times from a loss valley.
//!
//! All times are in dynamical-time units `t = ηT`; divide by `η` for
//! iterations.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::sorted_eigen;

/// Below this barrier-to-temperature ratio the Kramers asymptotics are
/// flagged as unreliable.
pub const LOW_TEMPERATURE_RATIO: f64 = 6.0;

/// Spectral data at the minimum `a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValleyGeometry {
    pub loss_at_min: f64,
    pub hessian_eigs: Vec<f64>,
    pub escape_eig: f64,
}

impl ValleyGeometry {
    /// `escape_index` selects the eigenvalue along the escape direction.
    pub fn new(loss_at_min: f64, hessian_eigs: Vec<f64>, escape_index: usize) -> Result<Self> {
        if hessian_eigs.is_empty() || hessian_eigs.iter().any(|&e| !(e > 0.0)) {
            return Err(invalid("valley Hessian eigenvalues must all be positive"));
        }
        let escape_eig = *hessian_eigs
            .get(escape_index)
            .ok_or_else(|| invalid("escape index out of range"))?;
        Ok(ValleyGeometry { loss_at_min, hessian_eigs, escape_eig })
    }

    pub fn det(&self) -> f64 {
        self.hessian_eigs.iter().product()
    }
}

/// Spectral data at an index-1 saddle `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaddleGeometry {
    pub loss_at_saddle: f64,
    pub hessian_eigs: Vec<f64>,
    pub escape_eig: f64,
}

impl SaddleGeometry {
    pub fn new(loss_at_saddle: f64, hessian_eigs: Vec<f64>) -> Result<Self> {
        let negatives: Vec<f64> = hessian_eigs.iter().copied().filter(|&e| e < 0.0).collect();
        if negatives.len() != 1 {
            return Err(invalid(format!(
                "saddle must have exactly one negative eigenvalue, found {}",
                negatives.len()
            )));
        }
        if hessian_eigs.iter().any(|&e| e == 0.0 || !e.is_finite()) {
            return Err(invalid("saddle eigenvalues must be finite and nonzero"));
        }
        Ok(SaddleGeometry { loss_at_saddle, hessian_eigs, escape_eig: negatives[0] })
    }

    pub fn det(&self) -> f64 {
        self.hessian_eigs.iter().product()
    }
}

/// Position `s ∈ (0, 1)` along the escape path where the minimum's and the
/// saddle's temperatures hand over, and the barrier it crosses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathParams {
    pub s: f64,
    pub barrier: f64,
}

impl PathParams {
    pub fn new(s: f64, barrier: f64) -> Result<Self> {
        check_s(s)?;
        check_barrier(barrier)?;
        Ok(PathParams { s, barrier })
    }
}

impl Default for PathParams {
    fn default() -> Self {
        PathParams { s: 0.5, barrier: 1.0 }
    }
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(invalid(format!("path parameter s must lie in (0, 1), got {s}")));
    }
    Ok(())
}

fn check_barrier(barrier: f64) -> Result<()> {
    if !(barrier > 0.0 && barrier.is_finite()) {
        return Err(invalid(format!("barrier must be positive, got {barrier}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SgldPrediction {
    pub tau: f64,
    /// `ΔL / D`.
    pub barrier_ratio: f64,
    pub low_temperature: bool,
}

/// Isotropic-noise escape time
/// `τ = 2π √(−det H_b / det H_a) / |H_be| · exp(ΔL / D)`.
pub fn sgld_escape_time(
    valley: &ValleyGeometry,
    saddle: &SaddleGeometry,
    barrier: f64,
    diffusion: f64,
) -> Result<SgldPrediction> {
    check_barrier(barrier)?;
    if !(diffusion > 0.0 && diffusion.is_finite()) {
        return Err(invalid(format!("diffusion must be positive, got {diffusion}")));
    }
    if valley.hessian_eigs.len() != saddle.hessian_eigs.len() {
        return Err(invalid("valley and saddle dimensions differ"));
    }
    let prefactor = 2.0 * PI * (-saddle.det() / valley.det()).sqrt() / saddle.escape_eig.abs();
    let ratio = barrier / diffusion;
    Ok(SgldPrediction {
        tau: prefactor * ratio.exp(),
        barrier_ratio: ratio,
        low_temperature: ratio >= LOW_TEMPERATURE_RATIO,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SgdPrediction {
    pub tau: f64,
    /// Argument of the exponential, i.e. `ln τ − ln(2π/|H_be|)`.
    pub exponent: f64,
    /// `η H_ae / 2B`.
    pub temperature_a: f64,
    /// `η |H_be| / 2B`.
    pub temperature_b: f64,
    pub low_temperature: bool,
}

/// Hessian-aligned SGD escape time
/// `τ = 2π / |H_be| · exp[(2BΔL/η)(s/H_ae + (1−s)/|H_be|)]`.
pub fn sgd_escape_time(
    h_ae: f64,
    h_be: f64,
    barrier: f64,
    batch_size: f64,
    eta: f64,
    s: f64,
) -> Result<SgdPrediction> {
    if !(h_ae > 0.0) {
        return Err(invalid(format!("H_ae must be positive, got {h_ae}")));
    }
    if !(h_be < 0.0) {
        return Err(invalid(format!("H_be must be negative, got {h_be}")));
    }
    check_barrier(barrier)?;
    check_s(s)?;
    if !(batch_size > 0.0) || !(eta > 0.0) {
        return Err(invalid("batch size and learning rate must be positive"));
    }
    let hb = h_be.abs();
    let exponent = (2.0 * batch_size * barrier / eta) * (s / h_ae + (1.0 - s) / hb);
    let temperature_a = eta * h_ae / (2.0 * batch_size);
    let temperature_b = eta * hb / (2.0 * batch_size);
    Ok(SgdPrediction {
        tau: 2.0 * PI / hb * exponent.exp(),
        exponent,
        temperature_a,
        temperature_b,
        low_temperature: barrier / temperature_a.max(temperature_b) >= LOW_TEMPERATURE_RATIO,
    })
}

/// Total rate over parallel escape paths.
pub fn combine_rates(gammas: &[f64]) -> Result<f64> {
    if gammas.is_empty() {
        return Err(invalid("no escape rates given"));
    }
    if gammas.iter().any(|&g| !(g > 0.0)) {
        return Err(invalid("escape rates must be positive"));
    }
    Ok(gammas.iter().sum())
}

/// Long-run probability of each valley, proportional to its mean escape
/// time.
pub fn stationary_occupancy(taus: &[f64]) -> Result<Vec<f64>> {
    if taus.is_empty() {
        return Err(invalid("no escape times given"));
    }
    if taus.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(invalid("escape times must be positive and finite"));
    }
    let total: f64 = taus.iter().sum();
    Ok(taus.iter().map(|t| t / total).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriticalKind {
    Minimum,
    Index1Saddle,
    Other,
}

/// Classifies a critical point by its Hessian spectrum. Eigenvalues within
/// `tol` of zero count as flat; the default tolerance is
/// `1e-6 · max|λ|`. A spectrum with no curvature above `tol` is `Other`.
pub fn classify_critical(h: &DMatrix<f64>, tol: Option<f64>) -> CriticalKind {
    let (eigs, _) = sorted_eigen(h);
    let scale = eigs.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let tol = tol.unwrap_or(1e-6 * scale);
    let below = eigs.iter().filter(|&&e| e < -tol).count();
    let above = eigs.iter().filter(|&&e| e > tol).count();
    match below {
        0 if above > 0 => CriticalKind::Minimum,
        1 => CriticalKind::Index1Saddle,
        _ => CriticalKind::Other,
    }
}

/// Valley/saddle geometry of one coordinate of the Styblinski–Tang function
/// under sharpness `k`, for `dim` identical coordinates with the escape
/// along coordinate 0.
pub fn st_geometry(dim: usize, k: f64) -> Result<(ValleyGeometry, SaddleGeometry, f64)> {
    use crate::landscapes::{Potential1d, StyblinskiTang};
    if dim == 0 || !(k > 0.0) {
        return Err(invalid("dimension and k must be positive"));
    }
    let st = StyblinskiTang;
    let (a, b, _) = st.critical_points();
    let ha = k * st.curvature(a);
    let hb = k * st.curvature(b);
    let valley = ValleyGeometry::new(dim as f64 * st.value(a), vec![ha; dim], 0)?;
    let mut saddle_eigs = vec![ha; dim];
    saddle_eigs[0] = hb;
    let saddle = SaddleGeometry::new(st.value(b) + (dim - 1) as f64 * st.value(a), saddle_eigs)?;
    let barrier = saddle.loss_at_saddle - valley.loss_at_min;
    Ok((valley, saddle, barrier))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st1() -> (ValleyGeometry, SaddleGeometry, f64) {
        st_geometry(1, 1.0).unwrap()
    }

    #[test]
    fn sgld_st_reference() {
        let (v, s, dl) = st1();
        assert!((dl - 39.362).abs() < 1e-3);
        let p = sgld_escape_time(&v, &s, dl, 20.0).unwrap();
        assert!((p.tau - 1.921).abs() < 0.01, "tau {}", p.tau);
        assert!(!p.low_temperature);
    }

    #[test]
    fn sgld_prefactor_limit() {
        let (v, s, _) = st1();
        let p = sgld_escape_time(&v, &s, 1e-300, 1.0).unwrap();
        let pref = 2.0 * PI * (s.escape_eig.abs() / v.escape_eig).sqrt() / s.escape_eig.abs();
        assert!((p.tau - pref).abs() < 1e-12 * pref);
    }

    #[test]
    fn sgld_doubling_d() {
        let (v, s, _) = st1();
        let dl = 10.0;
        let a = sgld_escape_time(&v, &s, dl, 1.0).unwrap().tau;
        let b = sgld_escape_time(&v, &s, dl, 2.0).unwrap().tau;
        assert!((b / a / (-5.0f64).exp() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sgld_one_dimensional_reduction() {
        let (v, s, dl) = st1();
        let tau = sgld_escape_time(&v, &s, dl, 7.0).unwrap().tau;
        let direct = 2.0 * PI / (v.escape_eig * s.escape_eig.abs()).sqrt() * (dl / 7.0).exp();
        assert!((tau - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn sgld_errors() {
        let (v, s, _) = st1();
        assert!(sgld_escape_time(&v, &s, 0.0, 1.0).is_err());
        assert!(sgld_escape_time(&v, &s, 1.0, 0.0).is_err());
    }

    #[test]
    fn sgd_reference_value() {
        let p = sgd_escape_time(2.0, -4.0, 1.0, 1.0, 0.1, 0.5).unwrap();
        assert!((p.exponent - 7.5).abs() < 1e-12);
        assert!((p.tau - 2840.1).abs() < 0.5, "tau {}", p.tau);
        assert!((p.temperature_a - 0.1).abs() < 1e-15);
        assert!((p.temperature_b - 0.2).abs() < 1e-15);
    }

    #[test]
    fn sgd_symmetric_case_ignores_s() {
        let a = sgd_escape_time(3.0, -3.0, 0.7, 4.0, 0.05, 0.2).unwrap();
        let b = sgd_escape_time(3.0, -3.0, 0.7, 4.0, 0.05, 0.9).unwrap();
        assert!((a.exponent - b.exponent).abs() < 1e-12 * a.exponent);
        assert!((a.exponent - 2.0 * 4.0 * 0.7 / (0.05 * 3.0)).abs() < 1e-12 * a.exponent);
    }

    #[test]
    fn sgd_doubling_batch_adds_exponent() {
        let a = sgd_escape_time(2.0, -4.0, 1.0, 3.0, 0.1, 0.5).unwrap();
        let b = sgd_escape_time(2.0, -4.0, 1.0, 6.0, 0.1, 0.5).unwrap();
        assert!(((b.tau.ln() - a.tau.ln()) - a.exponent).abs() < 1e-12 * a.exponent);
    }

    #[test]
    fn sgd_rejects_bad_s() {
        assert!(sgd_escape_time(2.0, -4.0, 1.0, 1.0, 0.1, 0.0).is_err());
        assert!(sgd_escape_time(2.0, -4.0, 1.0, 1.0, 0.1, 1.0).is_err());
        assert!(sgd_escape_time(2.0, 4.0, 1.0, 1.0, 0.1, 0.5).is_err());
    }

    #[test]
    fn rates_and_occupancy() {
        assert_eq!(combine_rates(&[0.25, 0.25]).unwrap(), 0.5);
        assert!((combine_rates(&[0.1, 0.2, 0.3]).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(combine_rates(&[0.7]).unwrap(), 0.7);
        assert!(combine_rates(&[]).is_err());
        assert_eq!(stationary_occupancy(&[3.0, 1.0]).unwrap(), vec![0.75, 0.25]);
        assert_eq!(stationary_occupancy(&[1.0, 2.0, 5.0]).unwrap(), vec![0.125, 0.25, 0.625]);
        let u = stationary_occupancy(&[2.0; 4]).unwrap();
        assert!(u.iter().all(|&p| p == 0.25));
        assert!(stationary_occupancy(&[]).is_err());
    }

    #[test]
    fn occupancy_ratio_is_tau_ratio() {
        let p = stationary_occupancy(&[3.7, 1.3]).unwrap();
        assert!((p[0] / p[1] - 3.7 / 1.3).abs() < 1e-12);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classification() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![34.583, 34.583]));
        assert_eq!(classify_critical(&m, None), CriticalKind::Minimum);
        let s = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-15.853, 34.583]));
        assert_eq!(classify_critical(&s, None), CriticalKind::Index1Saddle);
        assert_eq!(classify_critical(&DMatrix::zeros(3, 3), None), CriticalKind::Other);
        let two = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, -2.0, 3.0]));
        assert_eq!(classify_critical(&two, None), CriticalKind::Other);
    }

    #[test]
    fn geometry_validation() {
        assert!(ValleyGeometry::new(0.0, vec![1.0, -1.0], 0).is_err());
        assert!(SaddleGeometry::new(0.0, vec![1.0, 2.0]).is_err());
        assert!(SaddleGeometry::new(0.0, vec![-1.0, -2.0]).is_err());
        let s = SaddleGeometry::new(0.0, vec![3.0, -2.0]).unwrap();
        assert_eq!(s.escape_eig, -2.0);
        assert!(PathParams::new(1.5, 1.0).is_err());
    }
}
