//! Stochastic gradient noise measurements.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{insufficient, invalid, Result};
use crate::landscapes::Landscape;
use crate::linalg::{check_symmetric, sorted_eigen};
use crate::rng::stream_rng;
use crate::stats::{excess_kurtosis, median, pearson};

/// Element filter applied to Hessian entries in its own eigenbasis.
pub const DEFAULT_FILTER: (f64, f64) = (1e-4, 0.5);

/// SGN draws `∇L(θ) − ∇L̂_batch(θ)` at a fixed point.
#[derive(Debug, Clone)]
pub struct NoiseSampleSet {
    pub draws: Vec<DVector<f64>>,
    pub batch_size: usize,
    pub theta: Vec<f64>,
}

impl NoiseSampleSet {
    pub fn norms(&self) -> Vec<f64> {
        self.draws.iter().map(|d| d.norm()).collect()
    }
}

/// Draws `count` noise samples, each from its own minibatch of distinct
/// indices chosen uniformly. Indices are summed in ascending order, so a
/// batch covering the whole dataset reproduces the full gradient exactly.
pub fn draw_sgn<L: Landscape + ?Sized>(
    landscape: &L,
    theta: &[f64],
    batch_size: usize,
    count: usize,
    seed: u64,
) -> Result<NoiseSampleSet> {
    let m = landscape
        .sample_count()
        .ok_or_else(|| invalid("landscape has no per-sample structure"))?;
    if count == 0 {
        return Err(invalid("draw count must be at least 1"));
    }
    if batch_size == 0 || batch_size > m {
        return Err(invalid(format!("batch_size {batch_size} not in 1..={m}")));
    }
    let n = landscape.dim();
    let full = landscape.grad(theta);
    let mut mb = vec![0.0; n];
    let mut draws = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = stream_rng(seed, i as u64);
        let mut batch = rand::seq::index::sample(&mut rng, m, batch_size).into_vec();
        batch.sort_unstable();
        landscape.minibatch_gradient(theta, &batch, &mut mb)?;
        draws.push(DVector::from_iterator(n, full.iter().zip(&mb).map(|(g, b)| g - b)));
    }
    Ok(NoiseSampleSet { draws, batch_size, theta: theta.to_vec() })
}

/// Unbiased sample covariance of the draws.
pub fn estimate_sgn_covariance(samples: &NoiseSampleSet) -> Result<DMatrix<f64>> {
    covariance_of(&samples.draws)
}

pub fn covariance_of(draws: &[DVector<f64>]) -> Result<DMatrix<f64>> {
    if draws.len() < 2 {
        return Err(invalid("covariance needs at least two draws"));
    }
    let n = draws[0].len();
    if draws.len() < n + 1 {
        log::warn!("{} draws for a {n}-dimensional covariance; estimate is rank deficient", draws.len());
    }
    let count = draws.len() as f64;
    let mean = draws.iter().fold(DVector::zeros(n), |acc, d| acc + d) / count;
    let mut cov = DMatrix::zeros(n, n);
    let mut centered = DVector::zeros(n);
    for d in draws {
        centered.copy_from(d);
        centered -= &mean;
        cov.ger(1.0, &centered, &centered, 1.0);
    }
    cov /= count - 1.0;
    Ok(crate::linalg::symmetrize(&cov))
}

/// Agreement of a noise covariance with `H/B` in the Hessian eigenbasis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceFit {
    pub pearson: f64,
    /// Least-squares slope through the origin of `C` on `H/B`.
    pub slope: f64,
    pub element_count: usize,
    pub filter_range: (f64, f64),
}

/// Element pairs `(H'ᵢⱼ / B, C'ᵢⱼ)` after rotating both matrices into the
/// eigenbasis of `H`, keeping entries with `H'ᵢⱼ` inside `filter`.
pub fn eigenbasis_pairs(
    c: &DMatrix<f64>,
    h: &DMatrix<f64>,
    batch_size: usize,
    filter: (f64, f64),
) -> Result<Vec<(f64, f64)>> {
    check_symmetric(c, "covariance")?;
    check_symmetric(h, "Hessian")?;
    if c.shape() != h.shape() {
        return Err(invalid("covariance and Hessian shapes differ"));
    }
    if batch_size == 0 {
        return Err(invalid("batch_size must be positive"));
    }
    let (_, u) = sorted_eigen(h);
    let hr = u.transpose() * h * &u;
    let cr = u.transpose() * c * &u;
    let b = batch_size as f64;
    let n = h.nrows();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let hv = hr[(i, j)];
            if hv >= filter.0 && hv <= filter.1 {
                pairs.push((hv / b, cr[(i, j)]));
            }
        }
    }
    Ok(pairs)
}

pub fn covariance_hessian_fit(
    c: &DMatrix<f64>,
    h: &DMatrix<f64>,
    batch_size: usize,
    filter: (f64, f64),
) -> Result<CovarianceFit> {
    let pairs = eigenbasis_pairs(c, h, batch_size, filter)?;
    if pairs.len() < 2 {
        return Err(insufficient(format!("{} elements survive the filter", pairs.len())));
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let r = pearson(&xs, &ys);
    if r.is_nan() {
        return Err(insufficient("filtered elements have no spread"));
    }
    let sxy: f64 = pairs.iter().map(|(x, y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    Ok(CovarianceFit { pearson: r, slope: sxy / sxx, element_count: pairs.len(), filter_range: filter })
}

/// Equal-width bins over `[0, max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub counts: Vec<u64>,
    pub max: f64,
}

impl Histogram {
    pub fn bin_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.bin_width
    }

    /// Center of the most populated bin.
    pub fn mode(&self) -> f64 {
        let (i, _) = self
            .counts
            .iter()
            .enumerate()
            .max_by_key(|&(i, c)| (*c, std::cmp::Reverse(i)))
            .expect("histogram has bins");
        self.bin_center(i)
    }

    /// Counts of `values` on this histogram's bin edges; values past the
    /// last edge land in the last bin.
    pub fn rebin(&self, values: &[f64]) -> Vec<u64> {
        let n = self.counts.len();
        let mut counts = vec![0u64; n];
        for &v in values {
            counts[bin_index(v, self.bin_width, n)] += 1;
        }
        counts
    }
}

fn bin_index(v: f64, width: f64, bins: usize) -> usize {
    if width <= 0.0 {
        return 0;
    }
    ((v / width) as usize).min(bins - 1)
}

pub fn norm_histogram(vectors: &[DVector<f64>], bin_count: usize) -> Result<Histogram> {
    let norms: Vec<f64> = vectors.iter().map(|v| v.norm()).collect();
    value_histogram(&norms, bin_count)
}

pub fn value_histogram(values: &[f64], bin_count: usize) -> Result<Histogram> {
    if values.is_empty() {
        return Err(invalid("histogram of empty input"));
    }
    if bin_count < 2 {
        return Err(invalid("bin_count must be at least 2"));
    }
    let max = values.iter().fold(0.0f64, |m, &v| m.max(v));
    let bin_width = max / bin_count as f64;
    let mut counts = vec![0u64; bin_count];
    for &v in values {
        counts[bin_index(v, bin_width, bin_count)] += 1;
    }
    Ok(Histogram { bin_width, counts, max })
}

/// One symmetric α-stable variate (Chambers–Mallows–Stuck), unit scale.
/// At `α = 2` this is Gaussian with variance 2.
pub fn symmetric_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let v = FRAC_PI_2 * (2.0 * rng.random::<f64>() - 1.0);
    let w: f64 = Exp1.sample(rng);
    if (alpha - 1.0).abs() < 1e-12 {
        return v.tan();
    }
    let av = alpha * v;
    av.sin() / v.cos().powf(1.0 / alpha) * (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha)
}

/// `count` vectors of i.i.d. symmetric α-stable coordinates.
pub fn levy_sample(alpha: f64, scale: f64, dim: usize, count: usize, seed: u64) -> Result<Vec<DVector<f64>>> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(invalid(format!("alpha must lie in (0, 2], got {alpha}")));
    }
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(invalid(format!("scale must be nonnegative, got {scale}")));
    }
    Ok((0..count)
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            DVector::from_iterator(dim, (0..dim).map(|_| scale * symmetric_stable(alpha, &mut rng)))
        })
        .collect())
}

/// `count` standard-normal vectors, the Gaussian baseline for norm shapes.
pub fn gaussian_sample(dim: usize, count: usize, seed: u64) -> Vec<DVector<f64>> {
    (0..count)
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            DVector::from_iterator(dim, (0..dim).map(|_| StandardNormal.sample(&mut rng)))
        })
        .collect()
}

/// Gaussian vectors with covariance `cov`, so a norm-shape comparison
/// isolates non-Gaussianity from anisotropy. Negative eigenvalues from
/// round-off are clamped to zero.
pub fn gaussian_with_covariance(cov: &DMatrix<f64>, count: usize, seed: u64) -> Result<Vec<DVector<f64>>> {
    check_symmetric(cov, "covariance")?;
    let (eigs, u) = sorted_eigen(cov);
    let root = u * DMatrix::from_diagonal(&DVector::from_iterator(eigs.len(), eigs.iter().map(|l| l.max(0.0).sqrt())));
    Ok(gaussian_sample(cov.nrows(), count, seed).into_iter().map(|z| &root * z).collect())
}

/// Shape summaries of a sample of norms. Thresholds belong to callers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailStatistic {
    /// NaN when the log-norms have no spread.
    pub excess_kurtosis_of_log: f64,
    pub max_over_median: f64,
}

pub const MIN_TAIL_SAMPLES: usize = 100;

pub fn tail_statistic(norms: &[f64]) -> Result<TailStatistic> {
    if norms.len() < MIN_TAIL_SAMPLES {
        return Err(insufficient(format!("{} norms, need at least {MIN_TAIL_SAMPLES}", norms.len())));
    }
    let logs: Vec<f64> = norms.iter().map(|n| n.ln()).collect();
    let max = norms.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    Ok(TailStatistic { excess_kurtosis_of_log: excess_kurtosis(&logs), max_over_median: max / median(norms) })
}
