use serde::Serialize;

use super::latency::FrameTiming;
use crate::{Error, Result};

/// Sample statistics in milliseconds. `std` uses the `n − 1` divisor;
/// percentiles are nearest-rank.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub p50: f64,
    pub p95: f64,
    pub p99: f64,
}

impl Summary {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyReport);
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let rank = |p: f64| sorted[((p / 100.0 * n).ceil() as usize).clamp(1, sorted.len()) - 1];
        Ok(Self {
            mean,
            std,
            min: sorted[0],
            max: sorted[sorted.len() - 1],
            p50: rank(50.0),
            p95: rank(95.0),
            p99: rank(99.0),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatencyReport {
    pub frames: usize,
    pub total: Summary,
    /// `(stage name, summary)` in stage order.
    pub stages: Vec<(String, Summary)>,
}

/// Summarises frame totals and each stage. Stages without a supplied name are
/// called `stage_<k>` (1-based).
pub fn latency_report(timings: &[FrameTiming], stage_names: &[String]) -> Result<LatencyReport> {
    let totals: Vec<f64> = timings.iter().map(|t| t.total_ms).collect();
    let total = Summary::from_values(&totals)?;
    let n_stages = timings.iter().map(|t| t.stage_ms.len()).max().unwrap_or(0);
    let stages = (0..n_stages)
        .map(|k| {
            let col: Vec<f64> = timings.iter().filter_map(|t| t.stage_ms.get(k).copied()).collect();
            let name = stage_names.get(k).cloned().unwrap_or_else(|| format!("stage_{}", k + 1));
            Summary::from_values(&col).map(|s| (name, s))
        })
        .collect::<Result<_>>()?;
    Ok(LatencyReport { frames: timings.len(), total, stages })
}

/// Relative reduction `(before − after) / before`, in percent.
pub fn reduction_percent(before: f64, after: f64) -> f64 {
    (before - after) / before * 100.0
}
