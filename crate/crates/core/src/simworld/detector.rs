//! Ground-truth-driven stand-in for a neural detector.
//!
//! Random draws for a frame are taken up front ([`SynthDetector::draw`]) and
//! applied to the frame afterwards ([`SynthDetector::realize`]). The number of
//! draws never depends on visibility or camera pose, so a producer can draw
//! ahead while the consumer decides where the camera points.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use super::scenario::{GroundTruthFrame, ScenarioConfig};
use crate::geometry::BBox;
use crate::tracker::Detection;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetectorModel {
    /// Center jitter, pixels.
    pub sigma_center: f64,
    /// Relative width / height jitter.
    pub sigma_size: f64,
    pub p_miss: f64,
    /// Expected false positives per frame.
    pub fp_rate: f64,
    pub confidence_mean: f64,
    pub confidence_sigma: f64,
    /// Embedding dimension; 0 disables appearance features.
    pub appearance_dim: usize,
    /// Angular jitter of embeddings, radians.
    pub appearance_noise: f64,
}

impl Default for DetectorModel {
    fn default() -> Self {
        Self {
            sigma_center: 2.0,
            sigma_size: 0.03,
            p_miss: 0.003,
            fp_rate: 0.05,
            confidence_mean: 0.85,
            confidence_sigma: 0.05,
            appearance_dim: 32,
            appearance_noise: 0.1,
        }
    }
}

impl DetectorModel {
    /// Exact ground truth: no jitter, misses or false positives.
    pub fn noiseless() -> Self {
        Self {
            sigma_center: 0.0,
            sigma_size: 0.0,
            p_miss: 0.0,
            fp_rate: 0.0,
            confidence_sigma: 0.0,
            appearance_noise: 0.0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |k: &str| Err(Error::Config(format!("scenario.detector.{k} out of range")));
        if !(0.0..=1.0).contains(&self.p_miss) {
            return bad("p_miss");
        }
        if !(self.fp_rate >= 0.0 && self.fp_rate.is_finite()) {
            return bad("fp_rate");
        }
        if !(0.0..).contains(&self.sigma_center) || !(0.0..).contains(&self.sigma_size) {
            return bad("sigma_center/sigma_size");
        }
        if !(0.0..=1.0).contains(&self.confidence_mean) || self.confidence_sigma.is_nan() || self.confidence_sigma < 0.0
        {
            return bad("confidence_mean/confidence_sigma");
        }
        if self.appearance_noise.is_nan() || self.appearance_noise < 0.0 {
            return bad("appearance_noise");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
struct TargetDraw {
    miss: bool,
    jitter: [f64; 4],
    confidence: f64,
    angle: f64,
    direction: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
struct FalsePositive {
    cx_frac: f64,
    cy_frac: f64,
    size_pick: usize,
    confidence: f64,
    appearance: Vec<f64>,
}

/// Random draws for one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameDraws {
    targets: Vec<TargetDraw>,
    false_positives: Vec<FalsePositive>,
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    v
}

fn gaussian_vec<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

fn random_unit<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    normalized(gaussian_vec(rng, dim))
}

/// Rotates unit vector `e` by `angle` towards the component of `direction`
/// orthogonal to `e`.
fn rotate(e: &[f64], direction: &[f64], angle: f64) -> Vec<f64> {
    let along: f64 = e.iter().zip(direction).map(|(a, b)| a * b).sum();
    let orth = normalized(direction.iter().zip(e).map(|(d, a)| d - along * a).collect());
    let (s, c) = angle.sin_cos();
    normalized(e.iter().zip(&orth).map(|(a, o)| c * a + s * o).collect())
}

/// Detector bound to one scenario: fixed identity embeddings per target.
#[derive(Debug, Clone)]
pub struct SynthDetector {
    model: DetectorModel,
    frame_w: f64,
    frame_h: f64,
    sizes: Vec<[f64; 2]>,
    embeddings: BTreeMap<u32, Vec<f64>>,
}

impl SynthDetector {
    pub fn new(config: &ScenarioConfig) -> Self {
        let dim = config.detector.appearance_dim;
        let embeddings = config
            .targets
            .iter()
            .map(|t| {
                let key = config.seed ^ u64::from(t.id).wrapping_mul(0x9E37_79B9_7F4A_7C15);
                (t.id, random_unit(&mut ChaCha8Rng::seed_from_u64(key), dim))
            })
            .collect();
        Self {
            model: config.detector.clone(),
            frame_w: f64::from(config.frame_w),
            frame_h: f64::from(config.frame_h),
            sizes: config.targets.iter().map(|t| t.size).collect(),
            embeddings,
        }
    }

    pub fn model(&self) -> &DetectorModel {
        &self.model
    }

    pub fn embedding(&self, target_id: u32) -> Option<&[f64]> {
        self.embeddings.get(&target_id).map(Vec::as_slice)
    }

    pub fn draw<R: Rng + ?Sized>(&self, n_targets: usize, rng: &mut R) -> FrameDraws {
        let m = &self.model;
        let dim = m.appearance_dim;
        let targets = (0..n_targets)
            .map(|_| {
                let miss = rng.random::<f64>() < m.p_miss;
                let jitter = [0; 4].map(|_| rng.sample::<f64, _>(StandardNormal));
                let z: f64 = rng.sample(StandardNormal);
                let angle = m.appearance_noise * rng.sample::<f64, _>(StandardNormal);
                let direction = gaussian_vec(rng, dim);
                TargetDraw {
                    miss,
                    jitter,
                    confidence: (m.confidence_mean + m.confidence_sigma * z).clamp(0.0, 1.0),
                    angle,
                    direction,
                }
            })
            .collect();

        let n_fp =
            if m.fp_rate > 0.0 { Poisson::new(m.fp_rate).expect("validated rate").sample(rng) as usize } else { 0 };
        let false_positives = (0..n_fp)
            .map(|_| {
                let cx_frac = rng.random::<f64>();
                let cy_frac = rng.random::<f64>();
                let size_pick = rng.random_range(0..self.sizes.len().max(1));
                let z: f64 = rng.sample(StandardNormal);
                FalsePositive {
                    cx_frac,
                    cy_frac,
                    size_pick,
                    confidence: (m.confidence_mean + m.confidence_sigma * z).clamp(0.0, 1.0),
                    appearance: random_unit(rng, dim),
                }
            })
            .collect();
        FrameDraws { targets, false_positives }
    }

    /// Applies pre-drawn noise to a frame (possibly camera-shifted). The frame
    /// must list the scenario's targets in order.
    pub fn realize(&self, frame: &GroundTruthFrame, draws: &FrameDraws) -> Vec<Detection> {
        let m = &self.model;
        let mut out = Vec::new();
        for (truth, d) in frame.targets.iter().zip(&draws.targets) {
            if !truth.visible || d.miss {
                continue;
            }
            let b = truth.bbox;
            let bbox = BBox::new(
                b.cx + m.sigma_center * d.jitter[0],
                b.cy + m.sigma_center * d.jitter[1],
                (b.w * (1.0 + m.sigma_size * d.jitter[2])).max(1.0),
                (b.h * (1.0 + m.sigma_size * d.jitter[3])).max(1.0),
            );
            let appearance = self.embeddings.get(&truth.id).filter(|e| !e.is_empty()).map(|e| {
                if d.angle == 0.0 {
                    e.clone()
                } else {
                    rotate(e, &d.direction, d.angle)
                }
            });
            out.push(Detection { bbox, confidence: d.confidence, class_id: 0, appearance, source: Some(truth.id) });
        }
        for fp in &draws.false_positives {
            let [w, h] = self.sizes.get(fp.size_pick).copied().unwrap_or([32.0, 32.0]);
            let bbox = BBox::new(fp.cx_frac * self.frame_w, fp.cy_frac * self.frame_h, w, h);
            let appearance = (!fp.appearance.is_empty()).then(|| fp.appearance.clone());
            out.push(Detection { bbox, confidence: fp.confidence, class_id: 0, appearance, source: None });
        }
        out
    }

    pub fn detect<R: Rng + ?Sized>(&self, frame: &GroundTruthFrame, rng: &mut R) -> Vec<Detection> {
        let draws = self.draw(frame.targets.len(), rng);
        self.realize(frame, &draws)
    }
}

/// One frame of synthetic detections.
pub fn synth_detect<R: Rng + ?Sized>(
    frame: &GroundTruthFrame,
    detector: &SynthDetector,
    rng: &mut R,
) -> Vec<Detection> {
    detector.detect(frame, rng)
}
