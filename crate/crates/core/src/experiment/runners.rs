use serde::Serialize;
use serde_json::json;

use super::config::{ExperimentConfig, LandscapeConfig, NamedPoint, PointConfig, PretrainConfig};
use super::{summary_json, Artifacts, ExperimentError, RunStatus};
use crate::dynamics::{SgldConfig, StepperConfig, ValleyRegion};
use crate::error::{Error, Result};
use crate::escape_mc::{
    estimate_rate, exponentiality_check, occupancy_experiment, run_trials, sweep_and_fit, EscapeProtocol,
    EscapeScenario, MIN_TRANSITIONS,
};
use crate::kramers::{combine_rates, sgld_escape_time, st_geometry, stationary_occupancy, SaddleGeometry, ValleyGeometry};
use crate::landscapes::{
    gradient_descent, logistic_landscape, mlp_landscape, newton, quadratic_landscape, shifted_st_landscape,
    st_landscape, DoubleWell, Landscape, Potential1d, SeparableLandscape, StyblinskiTang, ST_MINIMUM,
};
use crate::noise_lab::{
    covariance_hessian_fit, draw_sgn, eigenbasis_pairs, estimate_sgn_covariance, gaussian_with_covariance,
    levy_sample, tail_statistic, value_histogram,
};
use crate::plot::{render_fit_plot, render_histogram_plot, HistogramSeries, PlotLabels, PlotPoint};
use crate::rng::derive_seed;
use crate::stats::{linear_fit, median, AxisTransform};

const GAUSSIAN_KEY: u64 = 0x6761_7573;
const STABLE_KEY: u64 = 0x7374_6162;

pub fn build_landscape(config: &LandscapeConfig) -> Result<Box<dyn Landscape>> {
    Ok(match config {
        LandscapeConfig::StyblinskiTang { dim } => Box::new(st_landscape(*dim)?),
        LandscapeConfig::ShiftedSt { dim, dataset } => Box::new(shifted_st_landscape(*dim, dataset)?),
        LandscapeConfig::Quadratic { dim, curvature } => Box::new(quadratic_landscape(*dim, *curvature)?),
        LandscapeConfig::DoubleWell { height, tilt } => {
            Box::new(SeparableLandscape::new(DoubleWell { height: *height, tilt: *tilt }, 1)?)
        }
        LandscapeConfig::Logistic { dataset } => Box::new(logistic_landscape(dataset)?),
        LandscapeConfig::Mlp { dataset, width, depth, activation } => {
            Box::new(mlp_landscape(dataset, *width, *depth, *activation)?)
        }
    })
}

/// A parameter point together with how well it satisfies `∇L = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedPoint {
    #[serde(skip)]
    pub theta: Vec<f64>,
    pub grad_norm: f64,
    pub pretrain_iterations: usize,
    pub converged: bool,
}

fn grad_norm(landscape: &dyn Landscape, theta: &[f64]) -> f64 {
    landscape.grad(theta).iter().map(|g| g * g).sum::<f64>().sqrt()
}

fn init_point(config: &LandscapeConfig) -> Result<Vec<f64>> {
    Ok(match config {
        LandscapeConfig::Mlp { dataset, width, depth, activation } => {
            mlp_landscape(dataset, *width, *depth, *activation)?.init_params(dataset.seed)
        }
        other => vec![0.0; other.dim()],
    })
}

/// Turns a point spec into coordinates. Minima of data-driven surfaces are
/// found by Newton's method (shifted Styblinski-Tang, logistic) or by
/// gradient descent from the seeded init (MLP).
pub fn resolve_point(
    config: &LandscapeConfig,
    landscape: &dyn Landscape,
    point: &PointConfig,
    pretrain: &PretrainConfig,
) -> Result<ResolvedPoint> {
    let fixed = |theta: Vec<f64>| {
        let grad_norm = grad_norm(landscape, &theta);
        ResolvedPoint { theta, grad_norm, pretrain_iterations: 0, converged: grad_norm <= pretrain.grad_tol }
    };
    let named = match point {
        PointConfig::Explicit(theta) => return Ok(fixed(theta.clone())),
        PointConfig::Named(n) => *n,
    };
    if named == NamedPoint::Init {
        return Ok(fixed(init_point(config)?));
    }
    let minimized = match config {
        LandscapeConfig::StyblinskiTang { dim } => return Ok(fixed(vec![StyblinskiTang.critical_points().0; *dim])),
        LandscapeConfig::Quadratic { dim, .. } => return Ok(fixed(vec![0.0; *dim])),
        LandscapeConfig::DoubleWell { height, tilt } => {
            let left = DoubleWell { height: *height, tilt: *tilt }.critical_points().0;
            return Ok(fixed(vec![left]));
        }
        LandscapeConfig::ShiftedSt { dim, .. } => newton(landscape, &vec![ST_MINIMUM; *dim], 100, pretrain.grad_tol)?,
        LandscapeConfig::Logistic { .. } => newton(landscape, &init_point(config)?, 100, pretrain.grad_tol)?,
        LandscapeConfig::Mlp { .. } => {
            gradient_descent(landscape, &init_point(config)?, pretrain.lr, pretrain.max_iters, pretrain.grad_tol)?
        }
    };
    if !minimized.converged {
        log::warn!(
            "pretraining stopped at ‖∇L‖ = {:.3e} after {} iterations",
            minimized.grad_norm,
            minimized.iterations
        );
    }
    Ok(ResolvedPoint {
        theta: minimized.theta,
        grad_norm: minimized.grad_norm,
        pretrain_iterations: minimized.iterations,
        converged: minimized.converged,
    })
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Error::NumericalFailure(format!("csv encoding failed: {e}"));
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(&row).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::NumericalFailure(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn norms(v: &[nalgebra::DVector<f64>]) -> Vec<f64> {
    v.iter().map(|x| x.norm()).collect()
}

pub(super) fn noise_hist(config: &ExperimentConfig) -> std::result::Result<Artifacts, ExperimentError> {
    let noise = config.noise.as_ref().expect("validated");
    let landscape = build_landscape(&config.landscape)?;
    let point = resolve_point(&config.landscape, &*landscape, &config.point, &config.pretrain)?;

    let mut named: Vec<(String, Option<usize>, Vec<f64>)> = Vec::new();
    let mut widest_cov = None;
    let mut batches = noise.batch_sizes.clone();
    batches.sort_unstable();
    for &b in &batches {
        let samples = draw_sgn(&*landscape, &point.theta, b, noise.draws, derive_seed(config.seed, b as u64))?;
        named.push((format!("SGN B={b}"), Some(b), samples.norms()));
        widest_cov = Some(estimate_sgn_covariance(&samples)?);
    }
    let cov = widest_cov.expect("at least one batch size");
    let gauss = gaussian_with_covariance(&cov, noise.draws, derive_seed(config.seed, GAUSSIAN_KEY))?;
    named.push(("Gaussian (matched covariance)".into(), None, norms(&gauss)));
    let stable = levy_sample(noise.stable_alpha, 1.0, landscape.dim(), noise.draws, derive_seed(config.seed, STABLE_KEY))?;
    named.push((format!("stable \u{3b1}={}", noise.stable_alpha), None, norms(&stable)));

    let gauss_ratio = tail_statistic(&named[named.len() - 2].2)?.max_over_median;
    let mut series_summary = Vec::new();
    let mut normalized = Vec::new();
    for (name, batch, values) in &named {
        let tail = tail_statistic(values)?;
        let med = median(values);
        if !(med > 0.0) {
            return Err(Error::InsufficientData(format!("{name}: median norm is zero")).into());
        }
        series_summary.push(json!({
            "name": name,
            "batch_size": batch,
            "median_norm": med,
            "max_over_median": tail.max_over_median,
            "excess_kurtosis_of_log": tail.excess_kurtosis_of_log,
            "max_over_median_vs_gaussian": tail.max_over_median / gauss_ratio,
        }));
        normalized.push(values.iter().map(|v| v / med).collect::<Vec<f64>>());
    }
    // bins span the SGN and Gaussian series; stable outliers pile into the last bin
    let reference: Vec<f64> = normalized[..normalized.len() - 1].concat();
    let grid = value_histogram(&reference, noise.bins)?;
    let mut rows = Vec::new();
    let mut plotted = Vec::new();
    for ((name, _, _), values) in named.iter().zip(&normalized) {
        let counts = grid.rebin(values);
        for (i, c) in counts.iter().enumerate() {
            let left = i as f64 * grid.bin_width;
            rows.push(vec![name.clone(), num(left), num(left + grid.bin_width), c.to_string()]);
        }
        plotted.push(HistogramSeries { name: name.clone(), bin_width: grid.bin_width, origin: 0.0, counts });
    }
    let labels = PlotLabels {
        title: "Noise norm distributions".into(),
        x_label: "norm / median norm".into(),
        y_label: "count".into(),
    };
    let status = RunStatus::Complete;
    let results = json!({ "point": point, "dim": landscape.dim(), "series": series_summary });
    Ok(Artifacts {
        results_csv: csv_text(&["series", "bin_left", "bin_right", "count"], rows)?,
        summary_json: summary_json(config, &status, results),
        plot_svg: render_histogram_plot(&plotted, &labels),
        status,
    })
}

pub(super) fn cov_fit(config: &ExperimentConfig) -> std::result::Result<Artifacts, ExperimentError> {
    let cov_cfg = config.covariance.as_ref().expect("validated");
    let landscape = build_landscape(&config.landscape)?;
    let point = resolve_point(&config.landscape, &*landscape, &config.point, &config.pretrain)?;
    let h = landscape.hessian(&point.theta)?;
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    let mut traces = Vec::new();
    let (mut all_x, mut all_y) = (Vec::new(), Vec::new());
    let mut batches = cov_cfg.batch_sizes.clone();
    batches.sort_unstable();
    for &b in &batches {
        let samples = draw_sgn(&*landscape, &point.theta, b, cov_cfg.draws, derive_seed(config.seed, b as u64))?;
        let c = estimate_sgn_covariance(&samples)?;
        let fit = covariance_hessian_fit(&c, &h, b, cov_cfg.filter)?;
        for (x, y) in eigenbasis_pairs(&c, &h, b, cov_cfg.filter)? {
            rows.push(vec![b.to_string(), num(x), num(y)]);
            all_x.push(x);
            all_y.push(y);
        }
        traces.push(c.trace());
        fits.push(json!({ "batch_size": b, "fit": fit, "trace": c.trace() }));
    }
    let inv_b: Vec<f64> = batches.iter().map(|&b| 1.0 / b as f64).collect();
    let trace_fit = if batches.len() >= 2 {
        Some(linear_fit(&inv_b, &traces, AxisTransform::Reciprocal, AxisTransform::Identity)?)
    } else {
        None
    };
    let pooled = linear_fit(&all_x, &all_y, AxisTransform::Identity, AxisTransform::Identity)?;
    let points: Vec<PlotPoint> = all_x.iter().zip(&all_y).map(|(&x, &y)| PlotPoint::new(x, y)).collect();
    let labels = PlotLabels {
        title: "Noise covariance vs H/B in the Hessian eigenbasis".into(),
        x_label: "H/B".into(),
        y_label: "C".into(),
    };
    let status = RunStatus::Complete;
    let results = json!({
        "point": point,
        "hessian_trace": h.trace(),
        "fits": fits,
        "trace_vs_inverse_batch": trace_fit,
        "pooled_fit": pooled,
    });
    Ok(Artifacts {
        results_csv: csv_text(&["batch_size", "h_over_b", "c"], rows)?,
        summary_json: summary_json(config, &status, results),
        plot_svg: render_fit_plot(&points, Some(&pooled), &labels),
        status,
    })
}

fn whiskers(t: AxisTransform, lo: f64, hi: f64) -> (f64, f64) {
    match t {
        AxisTransform::NegLog => (-hi.ln(), -lo.ln()),
        _ => (t.apply(lo), t.apply(hi)),
    }
}

pub(super) fn escape_sweep(config: &ExperimentConfig) -> std::result::Result<Artifacts, ExperimentError> {
    let valley = config.valley.as_ref().expect("validated");
    let spec = config.sweep.as_ref().expect("validated");
    let stepper = config.dynamics.expect("validated");
    let landscape = build_landscape(&config.landscape)?;
    let start = resolve_point(&config.landscape, &*landscape, &valley.start, &config.pretrain)?;
    let scenario = EscapeScenario {
        landscape,
        start: start.theta.clone(),
        radius: valley.radius,
        stepper,
        max_iters: valley.max_iters,
    };
    let result = sweep_and_fit(&scenario, spec, config.seed)?;
    let (xt, yt) = spec.variable.transforms(&stepper)?;
    let mut rows = Vec::new();
    let mut points = Vec::new();
    for p in &result.points {
        let r = p.rate;
        rows.push(vec![
            num(p.x_raw),
            num(p.x_transformed),
            opt(r.map(|r| r.gamma_hat)),
            opt(r.map(|r| r.ci_low)),
            opt(r.map(|r| r.ci_high)),
            opt(r.map(|r| -r.gamma_hat.ln())),
            r.map(|r| r.censored_count.to_string()).unwrap_or_default(),
            p.escaped.to_string(),
            r.map(|r| r.invalid_count.to_string()).unwrap_or_default(),
            opt(p.coefficient_of_variation),
            p.flag.clone().unwrap_or_default(),
        ]);
        let mut pp = PlotPoint::new(p.x_transformed, p.y_transformed.unwrap_or(f64::NAN));
        pp.flagged = p.flag.is_some();
        if let Some(r) = r {
            let (a, b) = whiskers(yt, r.ci_low, r.ci_high);
            pp.y_low = Some(a.min(b));
            pp.y_high = Some(a.max(b));
        }
        points.push(pp);
    }
    let labels = PlotLabels {
        title: format!("Escape rate vs {}", spec.variable.symbol()),
        x_label: xt.label(spec.variable.symbol()),
        y_label: yt.label("\u{3b3}"),
    };
    let status = match &result.fit {
        Some(_) => RunStatus::Complete,
        None => RunStatus::InsufficientData("fewer than 3 grid points have enough escapes to fit".into()),
    };
    let results = json!({ "start": start, "fit": result.fit, "points": result.points });
    Ok(Artifacts {
        results_csv: csv_text(
            &[
                "x_raw",
                "x_transformed",
                "gamma_hat",
                "ci_low",
                "ci_high",
                "neg_log_gamma",
                "censored_count",
                "escaped_count",
                "invalid_count",
                "cov",
                "flag",
            ],
            rows,
        )?,
        summary_json: summary_json(config, &status, results),
        plot_svg: render_fit_plot(&points, result.fit.as_ref(), &labels),
        status,
    })
}

/// Closed-form geometry of the first valley of a 1-D-separable surface:
/// valley, saddle, barrier, number of equivalent escape paths, start point
/// and the box half-width that reaches the neighbouring minimum.
fn theory_geometry(config: &LandscapeConfig) -> Result<(ValleyGeometry, SaddleGeometry, f64, usize, Vec<f64>, f64)> {
    match config {
        LandscapeConfig::StyblinskiTang { dim } => {
            let (valley, saddle, barrier) = st_geometry(*dim, 1.0)?;
            let (a, _, d) = StyblinskiTang.critical_points();
            Ok((valley, saddle, barrier, *dim, vec![a; *dim], d - a))
        }
        LandscapeConfig::DoubleWell { height, tilt } => {
            let well = DoubleWell { height: *height, tilt: *tilt };
            let (left, s, right) = well.critical_points();
            let valley = ValleyGeometry::new(well.value(left), vec![well.curvature(left)], 0)?;
            let saddle = SaddleGeometry::new(well.value(s), vec![well.curvature(s)])?;
            Ok((valley, saddle, well.value(s) - well.value(left), 1, vec![left], right - left))
        }
        _ => Err(Error::InvalidArgument("theory-table needs styblinski-tang or double-well".into())),
    }
}

pub(super) fn theory_table(config: &ExperimentConfig) -> std::result::Result<Artifacts, ExperimentError> {
    let theory = config.theory.as_ref().expect("validated");
    let landscape = build_landscape(&config.landscape)?;
    let (valley, saddle, barrier, paths, start, radius) = theory_geometry(&config.landscape)?;
    let mut rows = Vec::new();
    let mut records = Vec::new();
    let mut points = Vec::new();
    for &diffusion in &theory.diffusions {
        let pred = sgld_escape_time(&valley, &saddle, barrier, diffusion)?;
        let tau_total = 1.0 / combine_rates(&vec![1.0 / pred.tau; paths])?;
        let mut measured = None;
        if theory.trials > 0 {
            let stepper =
                StepperConfig::Sgld(SgldConfig { eta: theory.eta, diffusion, batch_size: None, sampling: Default::default() });
            let protocol = EscapeProtocol {
                start: start.clone(),
                region: ValleyRegion::new(start.clone(), radius)?,
                stepper,
                max_iters: theory.max_iters,
            };
            let trials = run_trials(&*landscape, &protocol, theory.trials, derive_seed(config.seed, diffusion.to_bits()))?;
            let escaped: Vec<f64> = trials.iter().filter(|t| t.escaped).map(|t| t.dynamical_time).collect();
            measured = match estimate_rate(&trials, theory.eta) {
                Ok(rate) => Some((rate, escaped.iter().sum::<f64>() / escaped.len() as f64, exponentiality_check(&trials).ok())),
                Err(Error::InsufficientData(m)) => {
                    log::warn!("D = {diffusion}: {m}");
                    None
                }
                Err(e) => return Err(e.into()),
            };
        }
        let (rate, mean_time, cov) = match measured {
            Some((r, m, c)) => (Some(r), Some(m), c),
            None => (None, None, None),
        };
        rows.push(vec![
            num(diffusion),
            num(pred.barrier_ratio),
            pred.low_temperature.to_string(),
            paths.to_string(),
            num(pred.tau),
            num(tau_total),
            theory.trials.to_string(),
            rate.map(|r| r.trial_count.to_string()).unwrap_or_default(),
            opt(mean_time),
            opt(rate.map(|r| 1.0 / r.ci_high)),
            opt(rate.map(|r| 1.0 / r.ci_low)),
            opt(mean_time.map(|m| m / tau_total)),
            opt(cov),
        ]);
        records.push(json!({
            "diffusion": diffusion,
            "prediction": pred,
            "paths": paths,
            "tau_all_paths": tau_total,
            "rate": rate,
            "mean_escape_time": mean_time,
            "measured_over_predicted": mean_time.map(|m| m / tau_total),
            "coefficient_of_variation": cov,
        }));
        let x = 1.0 / diffusion;
        let mut p = match (rate, mean_time) {
            (Some(r), Some(m)) => {
                let mut p = PlotPoint::new(x, m.ln());
                p.y_low = Some((1.0 / r.ci_high).ln());
                p.y_high = Some(if r.ci_low > 0.0 { (1.0 / r.ci_low).ln() } else { f64::NAN });
                p
            }
            _ => PlotPoint::new(x, tau_total.ln()),
        };
        p.flagged = theory.trials > 0 && rate.is_none();
        points.push(p);
    }
    let usable: Vec<&PlotPoint> = points.iter().filter(|p| !p.flagged).collect();
    let fit = if usable.len() >= 2 {
        let xs: Vec<f64> = usable.iter().map(|p| p.x).collect();
        let ys: Vec<f64> = usable.iter().map(|p| p.y).collect();
        linear_fit(&xs, &ys, AxisTransform::Reciprocal, AxisTransform::NegLog).ok()
    } else {
        None
    };
    let status = if theory.trials > 0 && usable.is_empty() {
        RunStatus::InsufficientData("no row collected enough escapes".into())
    } else {
        RunStatus::Complete
    };
    let labels = PlotLabels {
        title: if theory.trials > 0 { "Measured escape time vs 1/D" } else { "Predicted escape time vs 1/D" }.into(),
        x_label: "1/D".into(),
        y_label: "log \u{3c4}".into(),
    };
    let results = json!({ "barrier": barrier, "rows": records, "fit": fit });
    Ok(Artifacts {
        results_csv: csv_text(
            &[
                "diffusion",
                "barrier_ratio",
                "low_temperature",
                "paths",
                "tau_theory",
                "tau_all_paths",
                "trials",
                "escaped",
                "tau_measured",
                "tau_ci_low",
                "tau_ci_high",
                "measured_over_predicted",
                "cov",
            ],
            rows,
        )?,
        summary_json: summary_json(config, &status, results),
        plot_svg: render_fit_plot(&points, fit.as_ref(), &labels),
        status,
    })
}

/// Closed-form occupancy for a double well under pure SGLD: each region is
/// matched to the minimum nearest its center.
fn closed_form_occupancy(config: &ExperimentConfig) -> Result<Option<Vec<f64>>> {
    let (LandscapeConfig::DoubleWell { height, tilt }, Some(StepperConfig::Sgld(c))) = (&config.landscape, config.dynamics)
    else {
        return Ok(None);
    };
    if c.batch_size.is_some() || c.diffusion <= 0.0 {
        return Ok(None);
    }
    let well = DoubleWell { height: *height, tilt: *tilt };
    let (left, s, right) = well.critical_points();
    let saddle = SaddleGeometry::new(well.value(s), vec![well.curvature(s)])?;
    let regions = &config.occupancy.as_ref().expect("validated").regions;
    let taus = regions
        .iter()
        .map(|r| {
            let x = if (r.center[0] - left).abs() <= (r.center[0] - right).abs() { left } else { right };
            let valley = ValleyGeometry::new(well.value(x), vec![well.curvature(x)], 0)?;
            Ok(sgld_escape_time(&valley, &saddle, well.value(s) - well.value(x), c.diffusion)?.tau)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Some(stationary_occupancy(&taus)?))
}

pub(super) fn occupancy(config: &ExperimentConfig) -> std::result::Result<Artifacts, ExperimentError> {
    let occ = config.occupancy.as_ref().expect("validated");
    let stepper = config.dynamics.expect("validated");
    let landscape = build_landscape(&config.landscape)?;
    let regions = [
        ValleyRegion::new(occ.regions[0].center.clone(), occ.regions[0].radius)?,
        ValleyRegion::new(occ.regions[1].center.clone(), occ.regions[1].radius)?,
    ];
    let report = occupancy_experiment(&*landscape, &regions, &stepper, occ.total_iters, config.seed)?;
    let closed = closed_form_occupancy(config)?;
    let mut rows = Vec::new();
    let mut points = Vec::new();
    for i in 0..2 {
        let from_measured = report.predicted.map(|p| p[i]);
        let from_closed = closed.as_ref().map(|p| p[i]);
        let center: Vec<String> = occ.regions[i].center.iter().map(|&c| num(c)).collect();
        rows.push(vec![
            i.to_string(),
            center.join(" "),
            num(occ.regions[i].radius),
            num(report.fractions[i]),
            report.iterations_inside[i].to_string(),
            opt(report.mean_escape_times[i]),
            opt(from_measured),
            opt(from_closed),
        ]);
        if let Some(x) = from_closed.or(from_measured) {
            points.push(PlotPoint::new(x, report.fractions[i]));
        }
    }
    let fit = if points.len() == 2 {
        let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.y).collect();
        linear_fit(&xs, &ys, AxisTransform::Identity, AxisTransform::Identity).ok()
    } else {
        None
    };
    let status = if report.low_confidence {
        RunStatus::InsufficientData(format!("{} transitions, need at least {MIN_TRANSITIONS}", report.transitions))
    } else {
        RunStatus::Complete
    };
    let labels = PlotLabels {
        title: "Residence fraction vs predicted occupancy".into(),
        x_label: "predicted occupancy".into(),
        y_label: "measured fraction".into(),
    };
    let results = json!({ "report": report, "closed_form": closed });
    Ok(Artifacts {
        results_csv: csv_text(
            &[
                "region",
                "center",
                "radius",
                "fraction",
                "iterations_inside",
                "mean_escape_time",
                "predicted_from_measured",
                "predicted_closed_form",
            ],
            rows,
        )?,
        summary_json: summary_json(config, &status, results),
        plot_svg: render_fit_plot(&points, fit.as_ref(), &labels),
        status,
    })
}
