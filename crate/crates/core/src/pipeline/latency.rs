use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::gimbal::GimbalConfig;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Executor {
    Host,
    Accelerator,
    Transfer,
}

/// Per-frame latency distribution of a stage, in milliseconds. Draws are
/// clamped at zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LatencyModel {
    Constant {
        ms: f64,
    },
    Normal {
        mean: f64,
        sigma: f64,
    },
    /// Uniform draw from recorded samples.
    Empirical {
        samples: Vec<f64>,
    },
}

impl LatencyModel {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let v = match self {
            LatencyModel::Constant { ms } => *ms,
            LatencyModel::Normal { mean, sigma } => mean + sigma * rng.sample::<f64, _>(StandardNormal),
            LatencyModel::Empirical { samples } => samples[rng.random_range(0..samples.len())],
        };
        // microsecond resolution
        (v.max(0.0) * 1000.0).round() / 1000.0
    }

    pub fn mean(&self) -> f64 {
        match self {
            LatencyModel::Constant { ms } => *ms,
            LatencyModel::Normal { mean, .. } => *mean,
            LatencyModel::Empirical { samples } => samples.iter().sum::<f64>() / samples.len() as f64,
        }
    }

    fn validate(&self, stage: &str) -> Result<()> {
        let ok = match self {
            LatencyModel::Constant { ms } => *ms >= 0.0 && ms.is_finite(),
            LatencyModel::Normal { mean, sigma } => {
                *mean >= 0.0 && *sigma >= 0.0 && mean.is_finite() && sigma.is_finite()
            }
            LatencyModel::Empirical { samples } => {
                !samples.is_empty() && samples.iter().all(|s| *s >= 0.0 && s.is_finite())
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("pipeline.stages[{stage}].latency is out of range")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageSpec {
    pub name: String,
    pub executor: Executor,
    pub latency: LatencyModel,
}

impl StageSpec {
    pub fn new(name: &str, executor: Executor, latency: LatencyModel) -> Self {
        Self { name: name.to_string(), executor, latency }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// Before optimization: slow host-side tracking, unstable accelerator.
    Baseline,
    Optimized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub stages: Vec<StageSpec>,
    #[serde(default = "one")]
    pub accelerator_workers: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub gimbal: GimbalConfig,
}

fn one() -> usize {
    1
}

impl PipelineConfig {
    /// Host preprocess → transfer → accelerator inference → host tracking.
    pub fn profile(profile: Profile) -> Self {
        use Executor::*;
        use LatencyModel::Normal;
        let stages = match profile {
            Profile::Optimized => vec![
                StageSpec::new("preprocess", Host, Normal { mean: 10.0, sigma: 2.0 }),
                StageSpec::new("transfer", Transfer, Normal { mean: 12.0, sigma: 2.0 }),
                StageSpec::new("inference", Accelerator, Normal { mean: 40.0, sigma: 0.4 }),
                StageSpec::new("tracking", Host, Normal { mean: 13.0, sigma: 3.0 }),
            ],
            Profile::Baseline => vec![
                StageSpec::new("preprocess", Host, Normal { mean: 45.0, sigma: 8.0 }),
                StageSpec::new("transfer", Transfer, Normal { mean: 30.0, sigma: 5.0 }),
                StageSpec::new("inference", Accelerator, Normal { mean: 42.5, sigma: 1.5 }),
                StageSpec::new("tracking", Host, Normal { mean: 232.5, sigma: 16.0 }),
            ],
        };
        Self { stages, accelerator_workers: 1, seed: 0, gimbal: GimbalConfig::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.stages.is_empty() {
            return Err(Error::Config("pipeline.stages needs at least one stage".into()));
        }
        if self.accelerator_workers < 1 {
            return Err(Error::Config("pipeline.accelerator_workers must be >= 1".into()));
        }
        for s in &self.stages {
            s.latency.validate(&s.name)?;
        }
        self.gimbal.validate()
    }

    pub fn stage_names(&self) -> Vec<String> {
        self.stages.iter().map(|s| s.name.clone()).collect()
    }
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self::profile(Profile::Optimized)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameTiming {
    pub frame: usize,
    /// Milliseconds per stage, in configuration order.
    pub stage_ms: Vec<f64>,
    /// Sum of `stage_ms`, accumulated in stage order.
    pub total_ms: f64,
}

impl FrameTiming {
    pub fn new(frame: usize, stage_ms: Vec<f64>) -> Self {
        let total_ms = stage_ms.iter().sum();
        Self { frame, stage_ms, total_ms }
    }
}
