//! Small descriptive statistics and least-squares helpers.

use serde::{Deserialize, Serialize};

use crate::error::{insufficient, Result};

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance. NaN for fewer than two values.
pub fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return f64::NAN;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Excess kurtosis using population moments.
pub fn excess_kurtosis(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let n = xs.len() as f64;
    let m2 = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n;
    m4 / (m2 * m2) - 3.0
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Pearson correlation. NaN when either input has zero spread.
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let mx = mean(xs);
    let my = mean(ys);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

/// Coordinate transform applied before a regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisTransform {
    Identity,
    Reciprocal,
    NegLog,
}

impl AxisTransform {
    pub fn apply(self, v: f64) -> f64 {
        match self {
            AxisTransform::Identity => v,
            AxisTransform::Reciprocal => 1.0 / v,
            AxisTransform::NegLog => -v.ln(),
        }
    }

    /// Axis label for a raw variable name, e.g. `1/k` or `-log γ`.
    pub fn label(self, var: &str) -> String {
        match self {
            AxisTransform::Identity => var.to_string(),
            AxisTransform::Reciprocal => format!("1/{var}"),
            AxisTransform::NegLog => format!("\u{2212}log {var}"),
        }
    }
}

/// Ordinary least-squares line with its Pearson correlation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub pearson: f64,
    pub x_transform: AxisTransform,
    pub y_transform: AxisTransform,
    pub points: usize,
}

/// Fits `y = slope * x + intercept` to already-transformed coordinates.
pub fn linear_fit(
    xs: &[f64],
    ys: &[f64],
    x_transform: AxisTransform,
    y_transform: AxisTransform,
) -> Result<FitResult> {
    if xs.len() != ys.len() {
        return Err(crate::error::invalid("x and y lengths differ"));
    }
    if xs.len() < 2 {
        return Err(insufficient(format!("{} points, need at least 2", xs.len())));
    }
    let mx = mean(xs);
    let my = mean(ys);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == 0.0 {
        return Err(insufficient("all x values coincide"));
    }
    let slope = sxy / sxx;
    Ok(FitResult {
        slope,
        intercept: my - slope * mx,
        pearson: pearson(xs, ys),
        x_transform,
        y_transform,
        points: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_is_recovered() {
        let xs = [0.5, 1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.25 * x - 1.5).collect();
        let fit = linear_fit(&xs, &ys, AxisTransform::Identity, AxisTransform::Identity).unwrap();
        assert!((fit.slope - 3.25).abs() < 1e-12);
        assert!((fit.intercept + 1.5).abs() < 1e-12);
        assert!((fit.pearson - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_x_is_rejected() {
        let err = linear_fit(&[1.0, 1.0], &[0.0, 1.0], AxisTransform::Identity, AxisTransform::Identity);
        assert!(err.is_err());
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn gaussian_has_zero_excess_kurtosis_shape() {
        // symmetric two-point distribution has excess kurtosis -2
        let xs = [-1.0, 1.0, -1.0, 1.0];
        assert!((excess_kurtosis(&xs) + 2.0).abs() < 1e-12);
    }
}
