use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum LabelRule {
    /// Exactly `⌊m/2⌋` ones, shuffled.
    #[default]
    RandomBinary,
}

/// Recipe for a synthetic dataset: `x ~ N(0, I)` inputs plus labels.
/// Nothing is written to disk; the data is regenerated from `seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    pub samples: usize,
    pub input_dim: usize,
    pub seed: u64,
    #[serde(default)]
    pub label_rule: LabelRule,
}

impl DatasetSpec {
    pub fn new(samples: usize, input_dim: usize, seed: u64) -> Self {
        DatasetSpec { samples, input_dim, seed, label_rule: LabelRule::RandomBinary }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(invalid("dataset.samples must be positive"));
        }
        if self.input_dim == 0 {
            return Err(invalid("dataset.input_dim must be positive"));
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<Dataset> {
        self.validate()?;
        let mut rng = stream_rng(self.seed, 0);
        let inputs: Vec<f64> = (0..self.samples * self.input_dim)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let ones = self.samples / 2;
        let mut labels: Vec<f64> = (0..self.samples).map(|j| if j < ones { 1.0 } else { 0.0 }).collect();
        labels.shuffle(&mut stream_rng(self.seed, 1));
        Ok(Dataset { spec: self.clone(), inputs, labels })
    }
}

/// Materialized samples, row-major `samples × input_dim`.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub spec: DatasetSpec,
    inputs: Vec<f64>,
    labels: Vec<f64>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.spec.samples
    }

    pub fn is_empty(&self) -> bool {
        self.spec.samples == 0
    }

    pub fn input_dim(&self) -> usize {
        self.spec.input_dim
    }

    #[inline]
    pub fn input(&self, j: usize) -> &[f64] {
        let n = self.spec.input_dim;
        &self.inputs[j * n..(j + 1) * n]
    }

    #[inline]
    pub fn label(&self, j: usize) -> f64 {
        self.labels[j]
    }
}
