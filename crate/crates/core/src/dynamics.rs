//! Discrete SGD and SGLD steppers and first-exit simulation.
//!
//! Time is tracked both in iterations `T` and in dynamical time `t = ηT`,
//! the time coordinate of the continuous diffusion limit.

use std::io::Write;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::escape_mc::EscapeTrial;
use crate::landscapes::Landscape;
use crate::linalg::psd_abs;

/// Coordinates beyond this magnitude count as divergence.
pub const DIVERGENCE_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    /// Independent uniform draws, the i.i.d. assumption behind `C ≈ H/B`.
    #[default]
    WithReplacement,
    /// Shuffle once per epoch and walk the permutation in chunks of `B`.
    WithoutReplacementPerEpoch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SgdConfig {
    pub eta: f64,
    pub batch_size: usize,
    #[serde(default)]
    pub sampling: Sampling,
}

/// Gradient descent plus isotropic Gaussian noise with per-coordinate
/// standard deviation `√(2Dη)`. With `batch_size` set, the gradient is a
/// minibatch gradient (SGD with injected noise) instead of the full one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SgldConfig {
    pub eta: f64,
    pub diffusion: f64,
    #[serde(default)]
    pub batch_size: Option<usize>,
    #[serde(default)]
    pub sampling: Sampling,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StepperConfig {
    Sgd(SgdConfig),
    Sgld(SgldConfig),
}

impl StepperConfig {
    pub fn eta(&self) -> f64 {
        match self {
            StepperConfig::Sgd(c) => c.eta,
            StepperConfig::Sgld(c) => c.eta,
        }
    }

    pub fn batch_size(&self) -> Option<usize> {
        match self {
            StepperConfig::Sgd(c) => Some(c.batch_size),
            StepperConfig::Sgld(c) => c.batch_size,
        }
    }

    /// Checks the configuration against the sample count of the landscape it
    /// will drive (`None` for deterministic surfaces).
    pub fn validate(&self, sample_count: Option<usize>) -> Result<()> {
        let eta = self.eta();
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(invalid(format!("eta must be a nonnegative finite number, got {eta}")));
        }
        if let StepperConfig::Sgld(c) = self {
            if !(c.diffusion >= 0.0 && c.diffusion.is_finite()) {
                return Err(invalid(format!("diffusion must be nonnegative, got {}", c.diffusion)));
            }
        }
        if let Some(b) = self.batch_size() {
            if b == 0 {
                return Err(invalid("batch_size must be positive"));
            }
            if let Some(m) = sample_count {
                if b > m {
                    return Err(invalid(format!("batch_size {b} exceeds sample count {m}")));
                }
            }
        }
        Ok(())
    }
}

/// Parameters plus the clock.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryState {
    pub theta: Vec<f64>,
    pub iteration: u64,
    pub dynamical_time: f64,
}

impl TrajectoryState {
    pub fn new(theta: Vec<f64>) -> Self {
        TrajectoryState { theta, iteration: 0, dynamical_time: 0.0 }
    }

    fn tick(&mut self, eta: f64) {
        self.iteration += 1;
        self.dynamical_time = eta * self.iteration as f64;
    }

    fn is_diverged(&self) -> bool {
        self.theta.iter().any(|t| !(t.abs() <= DIVERGENCE_LIMIT))
    }
}

/// Axis-aligned box `|θᵢ − cᵢ| ≤ r` for all `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValleyRegion {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl ValleyRegion {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(invalid(format!("region radius must be positive, got {radius}")));
        }
        Ok(ValleyRegion { center, radius })
    }

    #[inline]
    pub fn contains(&self, theta: &[f64]) -> bool {
        theta.iter().zip(&self.center).all(|(t, c)| (t - c).abs() <= self.radius)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn is_disjoint(&self, other: &ValleyRegion) -> bool {
        self.center
            .iter()
            .zip(&other.center)
            .any(|(a, b)| (a - b).abs() > self.radius + other.radius)
    }
}

#[derive(Debug, Clone)]
struct BatchSampler {
    samples: usize,
    batch: usize,
    sampling: Sampling,
    perm: Vec<usize>,
    cursor: usize,
}

impl BatchSampler {
    fn new(samples: usize, batch: usize, sampling: Sampling) -> Self {
        BatchSampler { samples, batch, sampling, perm: Vec::new(), cursor: 0 }
    }

    fn fill<R: Rng + ?Sized>(&mut self, rng: &mut R, out: &mut Vec<usize>) {
        out.clear();
        match self.sampling {
            Sampling::WithReplacement => {
                out.extend((0..self.batch).map(|_| rng.random_range(0..self.samples)));
            }
            Sampling::WithoutReplacementPerEpoch => {
                if self.perm.is_empty() || self.cursor + self.batch > self.samples {
                    self.perm = (0..self.samples).collect();
                    self.perm.shuffle(rng);
                    self.cursor = 0;
                }
                out.extend_from_slice(&self.perm[self.cursor..self.cursor + self.batch]);
                self.cursor += self.batch;
            }
        }
    }
}

/// Reusable stepper holding the scratch buffers for one trajectory.
pub struct Integrator<'a, L: Landscape + ?Sized> {
    landscape: &'a L,
    config: StepperConfig,
    sampler: Option<BatchSampler>,
    batch: Vec<usize>,
    grad: Vec<f64>,
    noise_scale: f64,
}

impl<'a, L: Landscape + ?Sized> Integrator<'a, L> {
    pub fn new(landscape: &'a L, config: StepperConfig) -> Result<Self> {
        let samples = landscape.sample_count();
        config.validate(samples)?;
        let sampler = match (samples, config.batch_size()) {
            (Some(m), Some(b)) => {
                let sampling = match config {
                    StepperConfig::Sgd(c) => c.sampling,
                    StepperConfig::Sgld(c) => c.sampling,
                };
                Some(BatchSampler::new(m, b, sampling))
            }
            _ => None,
        };
        let noise_scale = match config {
            StepperConfig::Sgd(_) => 0.0,
            StepperConfig::Sgld(c) => (2.0 * c.diffusion * c.eta).sqrt(),
        };
        Ok(Integrator {
            landscape,
            config,
            sampler,
            batch: Vec::new(),
            grad: vec![0.0; landscape.dim()],
            noise_scale,
        })
    }

    pub fn config(&self) -> &StepperConfig {
        &self.config
    }

    /// One update in place. Returns [`Error::Diverged`] when the new point
    /// is non-finite or beyond [`DIVERGENCE_LIMIT`]; the state is left at
    /// the offending point.
    pub fn step<R: Rng + ?Sized>(&mut self, state: &mut TrajectoryState, rng: &mut R) -> Result<()> {
        let eta = self.config.eta();
        match &mut self.sampler {
            Some(sampler) => {
                sampler.fill(rng, &mut self.batch);
                self.landscape.minibatch_gradient(&state.theta, &self.batch, &mut self.grad)?;
            }
            None => self.landscape.gradient(&state.theta, &mut self.grad),
        }
        if self.noise_scale > 0.0 {
            for (t, g) in state.theta.iter_mut().zip(&self.grad) {
                let z: f64 = rng.sample(StandardNormal);
                *t += -eta * g + self.noise_scale * z;
            }
        } else {
            for (t, g) in state.theta.iter_mut().zip(&self.grad) {
                *t -= eta * g;
            }
        }
        state.tick(eta);
        if state.is_diverged() {
            return Err(Error::Diverged { iteration: state.iteration });
        }
        Ok(())
    }
}

/// `θ' = θ − η ∇L̂(θ)` for one sampled minibatch.
pub fn sgd_step<L: Landscape + ?Sized, R: Rng + ?Sized>(
    landscape: &L,
    state: &TrajectoryState,
    config: &SgdConfig,
    rng: &mut R,
) -> Result<TrajectoryState> {
    let mut next = state.clone();
    Integrator::new(landscape, StepperConfig::Sgd(*config))?.step(&mut next, rng)?;
    Ok(next)
}

/// `θ' = θ − η ∇L(θ) + √(2Dη) ζ`, `ζ ~ N(0, I)`.
pub fn sgld_step<L: Landscape + ?Sized, R: Rng + ?Sized>(
    landscape: &L,
    state: &TrajectoryState,
    config: &SgldConfig,
    rng: &mut R,
) -> Result<TrajectoryState> {
    let mut next = state.clone();
    Integrator::new(landscape, StepperConfig::Sgld(*config))?.step(&mut next, rng)?;
    Ok(next)
}

/// SGD diffusion matrix `D = (η / 2B) [H]⁺`.
pub fn diffusion_matrix(h: &DMatrix<f64>, eta: f64, batch_size: usize) -> Result<DMatrix<f64>> {
    if batch_size == 0 {
        return Err(invalid("batch_size must be positive"));
    }
    Ok(psd_abs(h)? * (eta / (2.0 * batch_size as f64)))
}

/// Runs the stepper from `start` until the first iterate outside `region`
/// or until `max_iters` steps have been taken.
pub fn simulate_until_exit<L: Landscape + ?Sized, R: Rng + ?Sized>(
    landscape: &L,
    start: &[f64],
    region: &ValleyRegion,
    stepper: &StepperConfig,
    max_iters: u64,
    rng: &mut R,
) -> Result<EscapeTrial> {
    if start.len() != landscape.dim() || region.dim() != landscape.dim() {
        return Err(invalid("start, region and landscape dimensions differ"));
    }
    if !region.contains(start) {
        return Err(invalid("start point lies outside the valley region"));
    }
    if max_iters == 0 {
        return Err(invalid("max_iters must be at least 1"));
    }
    let eta = stepper.eta();
    let mut integrator = Integrator::new(landscape, *stepper)?;
    let mut state = TrajectoryState::new(start.to_vec());
    while state.iteration < max_iters {
        match integrator.step(&mut state, rng) {
            Ok(()) => {}
            Err(Error::Diverged { iteration }) => return Ok(EscapeTrial::invalid(iteration, eta)),
            Err(e) => return Err(e),
        }
        if !region.contains(&state.theta) {
            return Ok(EscapeTrial::escaped(state.iteration, eta));
        }
    }
    Ok(EscapeTrial::censored(state.iteration, eta))
}

/// Runs `iters` steps and streams every `stride`-th state as CSV rows
/// `iteration,loss,theta_0,…`. Returns the final state.
pub fn write_trajectory_csv<L: Landscape + ?Sized, R: Rng + ?Sized, W: Write>(
    landscape: &L,
    start: &[f64],
    stepper: &StepperConfig,
    iters: u64,
    stride: u64,
    rng: &mut R,
    sink: W,
) -> Result<TrajectoryState> {
    if stride == 0 {
        return Err(invalid("stride must be at least 1"));
    }
    let io = |e: csv::Error| Error::NumericalFailure(format!("trajectory write failed: {e}"));
    let mut out = csv::Writer::from_writer(sink);
    let mut header = vec!["iteration".to_string(), "loss".to_string()];
    header.extend((0..landscape.dim()).map(|i| format!("theta_{i}")));
    out.write_record(&header).map_err(io)?;
    let mut integrator = Integrator::new(landscape, *stepper)?;
    let mut state = TrajectoryState::new(start.to_vec());
    let record = |s: &TrajectoryState, out: &mut csv::Writer<W>| {
        let mut row = vec![s.iteration.to_string(), landscape.loss(&s.theta).to_string()];
        row.extend(s.theta.iter().map(f64::to_string));
        out.write_record(&row).map_err(io)
    };
    record(&state, &mut out)?;
    while state.iteration < iters {
        integrator.step(&mut state, rng)?;
        if state.iteration % stride == 0 {
            record(&state, &mut out)?;
        }
    }
    out.flush().map_err(|e| Error::NumericalFailure(e.to_string()))?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscapes::{quadratic_landscape, shifted_st_landscape, st_landscape, DatasetSpec};
    use crate::rng::stream_rng;
    use crate::stats::{excess_kurtosis, mean, sample_variance};

    fn sgld(eta: f64, diffusion: f64) -> SgldConfig {
        SgldConfig { eta, diffusion, batch_size: None, sampling: Sampling::WithReplacement }
    }

    #[test]
    fn newton_step_on_quadratic() {
        let q = quadratic_landscape(2, 4.0).unwrap();
        let cfg = SgdConfig { eta: 0.25, batch_size: 1, sampling: Sampling::WithReplacement };
        let s = sgd_step(&q, &TrajectoryState::new(vec![3.0, -7.5]), &cfg, &mut stream_rng(0, 0)).unwrap();
        assert_eq!(s.theta, vec![0.0, 0.0]);
        assert_eq!(s.iteration, 1);
    }

    #[test]
    fn full_batch_newton_step_on_shifted_quadratic() {
        let spec = DatasetSpec::new(16, 1, 3);
        let l = crate::landscapes::shifted_quadratic_landscape(1, 2.0, &spec).unwrap();
        let cfg = SgdConfig { eta: 0.5, batch_size: 16, sampling: Sampling::WithoutReplacementPerEpoch };
        let s = sgd_step(&l, &TrajectoryState::new(vec![5.0]), &cfg, &mut stream_rng(0, 0)).unwrap();
        // minimum of the full-data loss is the sample mean
        let m: f64 = (0..16).map(|j| l.dataset().input(j)[0]).sum::<f64>() / 16.0;
        assert!((s.theta[0] - m).abs() < 1e-12);
    }

    #[test]
    fn zero_learning_rate_is_identity() {
        let st = st_landscape(3).unwrap();
        let cfg = SgdConfig { eta: 0.0, batch_size: 1, sampling: Sampling::WithReplacement };
        let start = TrajectoryState::new(vec![0.1, 0.2, 0.3]);
        let s = sgd_step(&st, &start, &cfg, &mut stream_rng(0, 0)).unwrap();
        assert_eq!(s.theta, start.theta);
    }

    #[test]
    fn sgld_without_noise_or_gradient_is_identity() {
        let flat = quadratic_landscape(2, 0.0).unwrap();
        let s = sgld_step(&flat, &TrajectoryState::new(vec![1.0, 2.0]), &sgld(0.1, 0.0), &mut stream_rng(1, 0)).unwrap();
        assert_eq!(s.theta, vec![1.0, 2.0]);
    }

    #[test]
    fn sgld_increment_variance() {
        let flat = quadratic_landscape(1, 0.0).unwrap();
        let (eta, d) = (0.01, 0.7);
        let mut integ = Integrator::new(&flat, StepperConfig::Sgld(sgld(eta, d))).unwrap();
        let mut rng = stream_rng(2, 0);
        let mut state = TrajectoryState::new(vec![0.0]);
        let mut incs = Vec::with_capacity(100_000);
        for _ in 0..100_000 {
            let before = state.theta[0];
            integ.step(&mut state, &mut rng).unwrap();
            incs.push(state.theta[0] - before);
        }
        let v = sample_variance(&incs);
        assert!((v / (2.0 * d * eta) - 1.0).abs() < 0.03, "variance {v}");
    }

    #[test]
    fn sgd_mean_update_tracks_gradient() {
        let spec = DatasetSpec::new(2000, 1, 21);
        let l = shifted_st_landscape(1, &spec).unwrap();
        let theta = vec![-2.0];
        let eta = 0.01;
        let cfg = SgdConfig { eta, batch_size: 1, sampling: Sampling::WithReplacement };
        let mut rng = stream_rng(4, 0);
        let updates: Vec<f64> = (0..10_000)
            .map(|_| {
                let s = sgd_step(&l, &TrajectoryState::new(theta.clone()), &cfg, &mut rng).unwrap();
                (s.theta[0] - theta[0]) / eta
            })
            .collect();
        let g = l.grad(&theta)[0];
        let se = (sample_variance(&updates) / updates.len() as f64).sqrt();
        assert!((mean(&updates) + g).abs() < 3.0 * se, "mean {} vs {}", mean(&updates), -g);
    }

    #[test]
    fn gibbs_stationarity_on_quadratic() {
        let h = 1.0;
        let d = 0.5;
        let eta = 0.01;
        let q = quadratic_landscape(1, h).unwrap();
        let mut integ = Integrator::new(&q, StepperConfig::Sgld(sgld(eta, d))).unwrap();
        let mut rng = stream_rng(5, 0);
        let mut state = TrajectoryState::new(vec![0.0]);
        for _ in 0..10_000 {
            integ.step(&mut state, &mut rng).unwrap();
        }
        let mut xs = Vec::with_capacity(1_000_000);
        for _ in 0..1_000_000 {
            integ.step(&mut state, &mut rng).unwrap();
            xs.push(state.theta[0]);
        }
        let v = sample_variance(&xs);
        assert!((v / (d / h) - 1.0).abs() < 0.05, "variance {v}");
        assert!(excess_kurtosis(&xs).abs() < 0.1);
    }

    #[test]
    fn dynamical_time_is_eta_times_iterations() {
        let st = st_landscape(1).unwrap();
        let eta = 0.003;
        let mut integ = Integrator::new(&st, StepperConfig::Sgld(sgld(eta, 1.0))).unwrap();
        let mut rng = stream_rng(6, 0);
        let mut state = TrajectoryState::new(vec![-2.9]);
        for _ in 0..1234 {
            integ.step(&mut state, &mut rng).unwrap();
            assert_eq!(state.dynamical_time, eta * state.iteration as f64);
        }
    }

    #[test]
    fn diffusion_matrix_examples() {
        let d = diffusion_matrix(&DMatrix::identity(3, 3), 0.01, 128).unwrap();
        assert!((d[(0, 0)] - 3.90625e-5).abs() < 1e-18);
        assert!((d[(2, 2)] - 3.90625e-5).abs() < 1e-18);
        let h = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, -3.0]);
        let d = diffusion_matrix(&h, 0.1, 2).unwrap();
        assert!((d[(0, 0)] - 0.05).abs() < 1e-15);
        assert!((d[(1, 1)] - 0.075).abs() < 1e-15);
        assert_eq!(diffusion_matrix(&DMatrix::zeros(2, 2), 0.1, 1).unwrap(), DMatrix::zeros(2, 2));
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(diffusion_matrix(&bad, 0.1, 1).is_err());
    }

    #[test]
    fn immediate_exit() {
        let q = quadratic_landscape(1, 1.0).unwrap();
        let region = ValleyRegion::new(vec![0.0], 1.0).unwrap();
        // start on the boundary with the gradient pointing inward, big η overshoots
        let stepper = StepperConfig::Sgd(SgdConfig { eta: 3.0, batch_size: 1, sampling: Sampling::WithReplacement });
        let t = simulate_until_exit(&q, &[1.0], &region, &stepper, 100, &mut stream_rng(0, 0)).unwrap();
        assert!(t.escaped && t.valid);
        assert_eq!(t.iterations, 1);
    }

    #[test]
    fn no_noise_no_escape() {
        let q = quadratic_landscape(1, 1.0).unwrap();
        let region = ValleyRegion::new(vec![0.0], 0.5).unwrap();
        let t = simulate_until_exit(&q, &[0.0], &region, &StepperConfig::Sgld(sgld(0.01, 0.0)), 500, &mut stream_rng(0, 0)).unwrap();
        assert!(!t.escaped && t.valid);
        assert_eq!(t.iterations, 500);
    }

    #[test]
    fn divergence_marks_trial_invalid() {
        let q = quadratic_landscape(1, 1.0).unwrap();
        let region = ValleyRegion::new(vec![0.0], 1e9).unwrap();
        let stepper = StepperConfig::Sgd(SgdConfig { eta: 5.0, batch_size: 1, sampling: Sampling::WithReplacement });
        let t = simulate_until_exit(&q, &[1.0], &region, &stepper, 1000, &mut stream_rng(0, 0)).unwrap();
        assert!(!t.valid && !t.escaped);
    }

    #[test]
    fn start_outside_region_rejected() {
        let q = quadratic_landscape(1, 1.0).unwrap();
        let region = ValleyRegion::new(vec![0.0], 0.1).unwrap();
        let r = simulate_until_exit(&q, &[1.0], &region, &StepperConfig::Sgld(sgld(0.1, 1.0)), 10, &mut stream_rng(0, 0));
        assert!(r.is_err());
    }

    #[test]
    fn mean_exit_time_decreases_with_diffusion() {
        let q = quadratic_landscape(1, 1.0).unwrap();
        let region = ValleyRegion::new(vec![0.0], 1.0).unwrap();
        let mean_exit = |d: f64| {
            let ts: Vec<f64> = (0..200)
                .map(|i| {
                    let stepper = StepperConfig::Sgld(sgld(0.01, d));
                    simulate_until_exit(&q, &[0.0], &region, &stepper, 10_000_000, &mut stream_rng(9, i))
                        .unwrap()
                        .dynamical_time
                })
                .collect();
            mean(&ts)
        };
        let (a, b, c) = (mean_exit(0.1), mean_exit(0.2), mean_exit(0.4));
        assert!(a > b && b > c, "{a} {b} {c}");
    }

    #[test]
    fn trajectories_are_reproducible() {
        let l = shifted_st_landscape(2, &DatasetSpec::new(100, 2, 1)).unwrap();
        let stepper = StepperConfig::Sgld(SgldConfig { eta: 0.01, diffusion: 0.3, batch_size: Some(4), sampling: Sampling::WithoutReplacementPerEpoch });
        let run = || {
            let mut buf = Vec::new();
            write_trajectory_csv(&l, &[-2.0, -2.0], &stepper, 300, 7, &mut stream_rng(3, 2), &mut buf).unwrap();
            buf
        };
        let a = run();
        assert_eq!(a, run());
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("iteration,loss,theta_0,theta_1\n0,"));
        assert_eq!(text.lines().count(), 1 + 1 + 300 / 7);
    }

    #[test]
    fn batch_larger_than_dataset_rejected() {
        let l = shifted_st_landscape(1, &DatasetSpec::new(5, 1, 1)).unwrap();
        let cfg = StepperConfig::Sgd(SgdConfig { eta: 0.1, batch_size: 6, sampling: Sampling::WithReplacement });
        assert!(Integrator::new(&l, cfg).is_err());
    }

    #[test]
    fn epoch_sampler_covers_every_sample_once() {
        let mut s = BatchSampler::new(12, 4, Sampling::WithoutReplacementPerEpoch);
        let mut rng = stream_rng(0, 0);
        let mut seen = Vec::new();
        let mut b = Vec::new();
        for _ in 0..3 {
            s.fill(&mut rng, &mut b);
            seen.extend_from_slice(&b);
        }
        seen.sort();
        assert_eq!(seen, (0..12).collect::<Vec<_>>());
    }
}
