//! Monte Carlo escape experiments.
//!
//! Trial `i` of an experiment with seed `s` always uses ChaCha8 stream `i`
//! of seed `s`, so results are independent of the rayon worker count.
//! Sweep grid points derive their seed from the grid value itself, which
//! makes the output independent of grid order too.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{simulate_until_exit, Integrator, StepperConfig, TrajectoryState, ValleyRegion};
use crate::error::{insufficient, invalid, Error, Result};
use crate::kramers::stationary_occupancy;
use crate::landscapes::{rescale, Landscape};
use crate::rng::{derive_seed, stream_rng};
use crate::stats::{linear_fit, mean, AxisTransform, FitResult};

/// Two-sided 95% normal quantile used by the rate interval.
pub const Z95: f64 = 1.96;

/// Outcome of one first-exit simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EscapeTrial {
    pub iterations: u64,
    pub escaped: bool,
    /// False when the trajectory diverged; such trials are excluded.
    pub valid: bool,
    pub dynamical_time: f64,
}

impl EscapeTrial {
    pub fn escaped(iterations: u64, eta: f64) -> Self {
        EscapeTrial { iterations, escaped: true, valid: true, dynamical_time: eta * iterations as f64 }
    }

    pub fn censored(iterations: u64, eta: f64) -> Self {
        EscapeTrial { iterations, escaped: false, valid: true, dynamical_time: eta * iterations as f64 }
    }

    pub fn invalid(iterations: u64, eta: f64) -> Self {
        EscapeTrial { iterations, escaped: false, valid: false, dynamical_time: eta * iterations as f64 }
    }
}

/// Start point, valley box, dynamics and iteration cap for one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeProtocol {
    pub start: Vec<f64>,
    pub region: ValleyRegion,
    pub stepper: StepperConfig,
    pub max_iters: u64,
}

pub fn run_trials<L: Landscape + ?Sized>(
    landscape: &L,
    protocol: &EscapeProtocol,
    trials: usize,
    seed: u64,
) -> Result<Vec<EscapeTrial>> {
    if trials == 0 {
        return Err(invalid("trial count must be at least 1"));
    }
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            simulate_until_exit(
                landscape,
                &protocol.start,
                &protocol.region,
                &protocol.stepper,
                protocol.max_iters,
                &mut rng,
            )
        })
        .collect()
}

/// Exponential-MLE escape rate in dynamical time with its 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub gamma_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Escaped trials `R`.
    pub trial_count: usize,
    pub censored_count: usize,
    pub invalid_count: usize,
    /// `Σ tᵢ` over escaped and censored trials.
    pub total_time: f64,
}

impl RateEstimate {
    /// `γ̂ = (R − 2)/Σt`, interval `γ̂(1 ± 1.96/√R)`.
    pub fn from_totals(escaped: usize, total_time: f64) -> Result<Self> {
        if escaped < 3 {
            return Err(insufficient(format!("{escaped} escaped trials, need at least 3")));
        }
        if !(total_time > 0.0) {
            return Err(invalid("total escape time must be positive"));
        }
        let gamma_hat = (escaped as f64 - 2.0) / total_time;
        let half = Z95 / (escaped as f64).sqrt();
        Ok(RateEstimate {
            gamma_hat,
            ci_low: gamma_hat * (1.0 - half),
            ci_high: gamma_hat * (1.0 + half),
            trial_count: escaped,
            censored_count: 0,
            invalid_count: 0,
            total_time,
        })
    }

    pub fn mean_escape_time(&self) -> f64 {
        1.0 / self.gamma_hat
    }
}

/// Censored trials add their elapsed time to `Σt` without counting toward
/// `R`; invalid trials are dropped.
pub fn estimate_rate(trials: &[EscapeTrial], eta: f64) -> Result<RateEstimate> {
    let escaped = trials.iter().filter(|t| t.valid && t.escaped).count();
    let censored = trials.iter().filter(|t| t.valid && !t.escaped).count();
    let total: f64 = trials.iter().filter(|t| t.valid).map(|t| eta * t.iterations as f64).sum();
    let mut est = RateEstimate::from_totals(escaped, total)?;
    est.censored_count = censored;
    est.invalid_count = trials.len() - escaped - censored;
    Ok(est)
}

pub const MIN_EXPONENTIALITY_TRIALS: usize = 30;

/// Coefficient of variation (sample std / mean).
pub fn coefficient_of_variation(times: &[f64]) -> f64 {
    crate::stats::sample_variance(times).sqrt() / mean(times)
}

/// Coefficient of variation of escaped-trial iteration counts; close to 1
/// for exponential first-passage times.
pub fn exponentiality_check(trials: &[EscapeTrial]) -> Result<f64> {
    let times: Vec<f64> = trials.iter().filter(|t| t.valid && t.escaped).map(|t| t.iterations as f64).collect();
    if times.len() < MIN_EXPONENTIALITY_TRIALS {
        return Err(insufficient(format!(
            "{} escaped trials, need at least {MIN_EXPONENTIALITY_TRIALS}",
            times.len()
        )));
    }
    Ok(coefficient_of_variation(&times))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    SharpnessK,
    BatchSize,
    Eta,
    DiffusionD,
}

impl SweepVariable {
    pub fn symbol(self) -> &'static str {
        match self {
            SweepVariable::SharpnessK => "k",
            SweepVariable::BatchSize => "B",
            SweepVariable::Eta => "\u{3b7}",
            SweepVariable::DiffusionD => "D",
        }
    }

    /// Coordinates in which the predicted law is linear.
    pub fn transforms(self, stepper: &StepperConfig) -> Result<(AxisTransform, AxisTransform)> {
        use AxisTransform::*;
        let sgld = matches!(stepper, StepperConfig::Sgld(_));
        match (self, sgld) {
            (SweepVariable::SharpnessK, false) => Ok((Reciprocal, NegLog)),
            (SweepVariable::SharpnessK, true) => Ok((Identity, Identity)),
            (SweepVariable::BatchSize, _) => Ok((Identity, NegLog)),
            (SweepVariable::Eta, _) => Ok((Reciprocal, NegLog)),
            (SweepVariable::DiffusionD, true) => Ok((Reciprocal, NegLog)),
            (SweepVariable::DiffusionD, false) => Err(invalid("diffusion_d sweeps need SGLD dynamics")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials_per_point: usize,
}

fn default_trials() -> usize {
    100
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.len() < 2 {
            return Err(invalid("sweep grid needs at least 2 values"));
        }
        if self.grid.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(invalid("sweep grid values must be positive"));
        }
        let up = self.grid.windows(2).all(|w| w[0] < w[1]);
        let down = self.grid.windows(2).all(|w| w[0] > w[1]);
        if !(up || down) {
            return Err(invalid("sweep grid must be strictly monotone"));
        }
        if self.trials_per_point < 10 {
            return Err(invalid("trials_per_point must be at least 10"));
        }
        if self.variable == SweepVariable::BatchSize && self.grid.iter().any(|v| v.fract() != 0.0) {
            return Err(invalid("batch sizes must be integers"));
        }
        Ok(())
    }
}

/// Base configuration a sweep perturbs.
#[derive(Debug, Clone)]
pub struct EscapeScenario<L> {
    pub landscape: L,
    pub start: Vec<f64>,
    /// Per-coordinate half-width of the valley box around `start`.
    pub radius: f64,
    pub stepper: StepperConfig,
    pub max_iters: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub x_raw: f64,
    pub x_transformed: f64,
    pub rate: Option<RateEstimate>,
    /// Transformed rate, e.g. `−log γ̂`.
    pub y_transformed: Option<f64>,
    pub escaped: usize,
    pub coefficient_of_variation: Option<f64>,
    /// Mean iterations over escaped trials.
    pub mean_escape_iterations: Option<f64>,
    pub flag: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub variable: SweepVariable,
    /// Sorted by `x_raw`.
    pub points: Vec<SweepPoint>,
    pub fit: Option<FitResult>,
}

impl<L: Landscape> EscapeScenario<L> {
    fn protocol_for(&self, variable: SweepVariable, value: f64) -> Result<(EscapeProtocol, f64)> {
        let mut stepper = self.stepper;
        let mut scale = 1.0;
        match (variable, &mut stepper) {
            (SweepVariable::SharpnessK, _) => scale = 1.0 / value.sqrt(),
            (SweepVariable::BatchSize, StepperConfig::Sgd(c)) => c.batch_size = value as usize,
            (SweepVariable::BatchSize, StepperConfig::Sgld(c)) => {
                if c.batch_size.is_none() {
                    return Err(invalid("batch_size sweep on full-gradient SGLD"));
                }
                c.batch_size = Some(value as usize);
            }
            (SweepVariable::Eta, StepperConfig::Sgd(c)) => c.eta = value,
            (SweepVariable::Eta, StepperConfig::Sgld(c)) => c.eta = value,
            (SweepVariable::DiffusionD, StepperConfig::Sgld(c)) => c.diffusion = value,
            (SweepVariable::DiffusionD, StepperConfig::Sgd(_)) => {
                return Err(invalid("diffusion_d sweeps need SGLD dynamics"))
            }
        }
        let start: Vec<f64> = self.start.iter().map(|s| s * scale).collect();
        let region = ValleyRegion::new(start.clone(), self.radius * scale)?;
        Ok((EscapeProtocol { start, region, stepper, max_iters: self.max_iters }, stepper.eta()))
    }

    /// Runs one grid point. Sharpness points use `L(√k·θ)` with start and
    /// box shrunk by `1/√k`.
    pub fn run_point(&self, variable: SweepVariable, value: f64, trials: usize, seed: u64) -> Result<Vec<EscapeTrial>> {
        let (protocol, _) = self.protocol_for(variable, value)?;
        let point_seed = derive_seed(seed, value.to_bits());
        if variable == SweepVariable::SharpnessK {
            let scaled = rescale(&self.landscape, value)?;
            run_trials(&scaled, &protocol, trials, point_seed)
        } else {
            run_trials(&self.landscape, &protocol, trials, point_seed)
        }
    }
}

/// Runs every grid point of `spec` and regresses the transformed rates.
/// Points with too few escapes are flagged and left out of the fit; the
/// fit is `None` when fewer than three points remain.
pub fn sweep_and_fit<L: Landscape>(scenario: &EscapeScenario<L>, spec: &SweepSpec, seed: u64) -> Result<SweepResult> {
    spec.validate()?;
    let (xt, yt) = spec.variable.transforms(&scenario.stepper)?;
    let mut grid = spec.grid.clone();
    grid.sort_by(f64::total_cmp);
    let mut points = Vec::with_capacity(grid.len());
    for &value in &grid {
        let trials = scenario
            .run_point(spec.variable, value, spec.trials_per_point, seed)
            .map_err(|e| match e {
                Error::InvalidArgument(m) => Error::InvalidArgument(m),
                other => Error::NumericalFailure(format!("grid point {} = {value}: {other}", spec.variable.symbol())),
            })?;
        let (_, eta) = scenario.protocol_for(spec.variable, value)?;
        let escaped: Vec<f64> =
            trials.iter().filter(|t| t.valid && t.escaped).map(|t| t.iterations as f64).collect();
        let (rate, flag) = match estimate_rate(&trials, eta) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        };
        points.push(SweepPoint {
            x_raw: value,
            x_transformed: xt.apply(value),
            y_transformed: rate.map(|r| yt.apply(r.gamma_hat)),
            rate,
            escaped: escaped.len(),
            coefficient_of_variation: exponentiality_check(&trials).ok(),
            mean_escape_iterations: (!escaped.is_empty()).then(|| mean(&escaped)),
            flag,
        });
    }
    let usable: Vec<&SweepPoint> = points.iter().filter(|p| p.y_transformed.is_some()).collect();
    let fit = if usable.len() >= 3 {
        let xs: Vec<f64> = usable.iter().map(|p| p.x_transformed).collect();
        let ys: Vec<f64> = usable.iter().map(|p| p.y_transformed.unwrap()).collect();
        Some(linear_fit(&xs, &ys, xt, yt)?)
    } else {
        None
    };
    Ok(SweepResult { variable: spec.variable, points, fit })
}

/// Minimum valley-to-valley transitions for a trustworthy occupancy check.
pub const MIN_TRANSITIONS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupancyReport {
    /// Share of in-region iterations spent in each region.
    pub fractions: [f64; 2],
    /// Occupancy predicted from the measured mean escape times; `None` if a
    /// valley was never left.
    pub predicted: Option<[f64; 2]>,
    /// Mean sojourn per valley in dynamical time, entry to first entry into
    /// the other valley.
    pub mean_escape_times: [Option<f64>; 2],
    pub iterations_inside: [u64; 2],
    pub transitions: usize,
    pub low_confidence: bool,
}

/// One long trajectory starting at the first region's center, recording
/// residence in two disjoint regions and the sojourn times between them.
pub fn occupancy_experiment<L: Landscape + ?Sized>(
    landscape: &L,
    regions: &[ValleyRegion; 2],
    stepper: &StepperConfig,
    total_iters: u64,
    seed: u64,
) -> Result<OccupancyReport> {
    if !regions[0].is_disjoint(&regions[1]) {
        return Err(invalid("occupancy regions overlap"));
    }
    if regions[0].dim() != landscape.dim() || regions[1].dim() != landscape.dim() {
        return Err(invalid("region and landscape dimensions differ"));
    }
    let eta = stepper.eta();
    let mut integrator = Integrator::new(landscape, *stepper)?;
    let mut rng = stream_rng(seed, 0);
    let mut state = TrajectoryState::new(regions[0].center.clone());
    let mut inside = [0u64; 2];
    let mut sojourns: [Vec<u64>; 2] = [Vec::new(), Vec::new()];
    let mut current = 0usize;
    let mut entered = 0u64;
    while state.iteration < total_iters {
        integrator.step(&mut state, &mut rng)?;
        for (r, region) in regions.iter().enumerate() {
            if region.contains(&state.theta) {
                inside[r] += 1;
                if r != current {
                    sojourns[current].push(state.iteration - entered);
                    current = r;
                    entered = state.iteration;
                }
                break;
            }
        }
    }
    let total_inside = (inside[0] + inside[1]) as f64;
    if total_inside == 0.0 {
        return Err(insufficient("trajectory never visited either region"));
    }
    let fractions = [inside[0] as f64 / total_inside, inside[1] as f64 / total_inside];
    let mean_escape_times = [0, 1].map(|v| {
        (!sojourns[v].is_empty())
            .then(|| eta * sojourns[v].iter().sum::<u64>() as f64 / sojourns[v].len() as f64)
    });
    let predicted = match mean_escape_times {
        [Some(a), Some(b)] => {
            let p = stationary_occupancy(&[a, b])?;
            Some([p[0], p[1]])
        }
        _ => None,
    };
    let transitions = sojourns[0].len() + sojourns[1].len();
    Ok(OccupancyReport {
        fractions,
        predicted,
        mean_escape_times,
        iterations_inside: inside,
        transitions,
        low_confidence: transitions < MIN_TRANSITIONS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Sampling, SgdConfig, SgldConfig};
    use crate::landscapes::{quadratic_landscape, DoubleWell, SeparableLandscape};
    use rand_distr::{Distribution, Exp1, Uniform};

    fn synthetic(times: &[u64]) -> Vec<EscapeTrial> {
        times.iter().map(|&t| EscapeTrial::escaped(t, 1.0)).collect()
    }

    #[test]
    fn estimator_reference_values() {
        let est = RateEstimate::from_totals(100, 9800.0).unwrap();
        assert!((est.gamma_hat - 0.01).abs() < 1e-12);
        assert!((est.ci_low - 0.008040).abs() < 1e-12);
        assert!((est.ci_high - 0.011960).abs() < 1e-12);
        let est = RateEstimate::from_totals(100, 98.0).unwrap();
        assert!((est.gamma_hat - 1.0).abs() < 1e-12);
        assert!((est.ci_low - 0.804).abs() < 1e-12);
        assert!((est.ci_high - 1.196).abs() < 1e-12);
    }

    #[test]
    fn identical_times() {
        let trials = synthetic(&[40; 50]);
        let est = estimate_rate(&trials, 0.5).unwrap();
        assert!((est.gamma_hat - 48.0 / (50.0 * 20.0)).abs() < 1e-15);
        assert!(est.ci_low < est.gamma_hat && est.gamma_hat < est.ci_high);
    }

    #[test]
    fn censoring_and_invalid_accounting() {
        let mut trials = synthetic(&[10, 20, 30, 40]);
        trials.push(EscapeTrial::censored(100, 1.0));
        trials.push(EscapeTrial::invalid(5, 1.0));
        let est = estimate_rate(&trials, 1.0).unwrap();
        assert_eq!(est.trial_count, 4);
        assert_eq!(est.censored_count, 1);
        assert_eq!(est.invalid_count, 1);
        assert_eq!(est.total_time, 200.0);
        assert!((est.gamma_hat - 2.0 / 200.0).abs() < 1e-15);
    }

    #[test]
    fn too_few_escapes() {
        assert!(matches!(estimate_rate(&synthetic(&[1, 2]), 1.0), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn unit_law() {
        let trials = synthetic(&[3, 17, 8, 41, 5, 12]);
        let a = estimate_rate(&trials, 1.0).unwrap().gamma_hat;
        let b = estimate_rate(&trials, 4.0).unwrap().gamma_hat;
        assert_eq!(b, a / 4.0);
        let c = estimate_rate(&trials, 0.37).unwrap().gamma_hat;
        assert!((c - a / 0.37).abs() < 1e-14 * c);
    }

    #[test]
    fn cov_of_planted_distributions() {
        let mut rng = stream_rng(1, 0);
        let exp: Vec<f64> = (0..10_000).map(|_| Exp1.sample(&mut rng)).collect();
        assert!((coefficient_of_variation(&exp) - 1.0).abs() < 0.05);
        let uni = Uniform::new(0.0, 1.0).unwrap();
        let u: Vec<f64> = (0..10_000).map(|_| uni.sample(&mut rng)).collect();
        assert!((coefficient_of_variation(&u) - 1.0 / 3f64.sqrt()).abs() < 0.05);
        assert_eq!(exponentiality_check(&synthetic(&[7; 30])).unwrap(), 0.0);
        assert!(exponentiality_check(&synthetic(&[7; 29])).is_err());
    }

    fn sgld(eta: f64, d: f64) -> StepperConfig {
        StepperConfig::Sgld(SgldConfig { eta, diffusion: d, batch_size: None, sampling: Sampling::WithReplacement })
    }

    #[test]
    fn trivial_protocols() {
        let q = quadratic_landscape(1, 1.0).unwrap();
        let exit = EscapeProtocol {
            start: vec![1.0],
            region: ValleyRegion::new(vec![0.0], 1.0).unwrap(),
            stepper: StepperConfig::Sgd(SgdConfig { eta: 3.0, batch_size: 1, sampling: Sampling::WithReplacement }),
            max_iters: 10,
        };
        assert!(run_trials(&q, &exit, 8, 0).unwrap().iter().all(|t| t.iterations == 1 && t.escaped));
        let stay = EscapeProtocol {
            start: vec![0.0],
            region: ValleyRegion::new(vec![0.0], 1.0).unwrap(),
            stepper: sgld(0.01, 0.0),
            max_iters: 50,
        };
        assert!(run_trials(&q, &stay, 8, 0).unwrap().iter().all(|t| !t.escaped && t.valid));
    }

    #[test]
    fn results_do_not_depend_on_worker_count() {
        let q = quadratic_landscape(2, 1.0).unwrap();
        let p = EscapeProtocol {
            start: vec![0.0, 0.0],
            region: ValleyRegion::new(vec![0.0, 0.0], 1.0).unwrap(),
            stepper: sgld(0.01, 0.2),
            max_iters: 1_000_000,
        };
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| run_trials(&q, &p, 16, 5).unwrap());
        let b = four.install(|| run_trials(&q, &p, 16, 5).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_order_independence_and_flags() {
        let q = quadratic_landscape(1, 1.0).unwrap();
        let scenario = EscapeScenario { landscape: q, start: vec![0.0], radius: 1.0, stepper: sgld(0.02, 0.2), max_iters: 200_000 };
        let up = SweepSpec { variable: SweepVariable::DiffusionD, grid: vec![0.1, 0.15, 0.2, 0.3], trials_per_point: 20 };
        let down = SweepSpec { grid: up.grid.iter().rev().copied().collect(), ..up.clone() };
        let a = sweep_and_fit(&scenario, &up, 3).unwrap();
        let b = sweep_and_fit(&scenario, &down, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.fit.is_some());
        // no noise anywhere: every point flagged, no fit
        let cold = EscapeScenario { stepper: sgld(0.02, 0.0), max_iters: 100, ..scenario.clone() };
        let spec = SweepSpec { variable: SweepVariable::Eta, grid: vec![0.01, 0.02, 0.03], trials_per_point: 10 };
        let r = sweep_and_fit(&cold, &spec, 0).unwrap();
        assert!(r.fit.is_none());
        assert!(r.points.iter().all(|p| p.flag.is_some()));
    }

    #[test]
    fn sweep_spec_validation() {
        let mut s = SweepSpec { variable: SweepVariable::Eta, grid: vec![0.1, 0.3, 0.2], trials_per_point: 100 };
        assert!(s.validate().is_err());
        s.grid = vec![0.3, 0.2, 0.1];
        assert!(s.validate().is_ok());
        s.trials_per_point = 5;
        assert!(s.validate().is_err());
        let b = SweepSpec { variable: SweepVariable::BatchSize, grid: vec![1.0, 2.5], trials_per_point: 10 };
        assert!(b.validate().is_err());
    }

    #[test]
    fn symmetric_double_well_occupancy() {
        let w = SeparableLandscape::new(DoubleWell { height: 1.0, tilt: 0.0 }, 1).unwrap();
        let regions = [ValleyRegion::new(vec![-1.0], 0.8).unwrap(), ValleyRegion::new(vec![1.0], 0.8).unwrap()];
        let r = occupancy_experiment(&w, &regions, &sgld(0.01, 0.2), 4_000_000, 1).unwrap();
        assert!(!r.low_confidence, "{} transitions", r.transitions);
        assert!((r.fractions[0] - 0.5).abs() < 0.05, "{:?}", r.fractions);
    }

    #[test]
    fn zero_noise_occupancy_is_flagged() {
        let w = SeparableLandscape::new(DoubleWell { height: 1.0, tilt: 0.1 }, 1).unwrap();
        let regions = [ValleyRegion::new(vec![-1.0], 0.8).unwrap(), ValleyRegion::new(vec![1.0], 0.8).unwrap()];
        let r = occupancy_experiment(&w, &regions, &sgld(0.01, 0.0), 10_000, 1).unwrap();
        assert!(r.low_confidence);
        assert_eq!(r.fractions, [1.0, 0.0]);
        assert!(r.predicted.is_none());
    }

    #[test]
    fn overlapping_regions_rejected() {
        let w = SeparableLandscape::new(DoubleWell { height: 1.0, tilt: 0.0 }, 1).unwrap();
        let regions = [ValleyRegion::new(vec![-0.5], 0.8).unwrap(), ValleyRegion::new(vec![0.5], 0.8).unwrap()];
        assert!(occupancy_experiment(&w, &regions, &sgld(0.01, 0.1), 10, 0).is_err());
    }
}
