use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::detector::DetectorModel;
use crate::geometry::BBox;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Seconds.
    pub duration: f64,
    pub fps: f64,
    pub frame_w: u32,
    pub frame_h: u32,
    pub seed: u64,
    pub targets: Vec<TargetSpec>,
    #[serde(default)]
    pub detector: DetectorModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub id: u32,
    /// `[w, h]` in pixels.
    pub size: [f64; 2],
    pub motion: Motion,
    /// Half-open frame intervals `[start, end)` during which the target is hidden.
    #[serde(default)]
    pub occlusions: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Motion {
    /// `velocity` is in pixels per frame.
    ConstantVelocity { start: [f64; 2], velocity: [f64; 2] },
    /// `angular_speed` is in radians per second, `phase` in radians.
    Circular {
        center: [f64; 2],
        radius: f64,
        angular_speed: f64,
        #[serde(default)]
        phase: f64,
    },
}

impl Motion {
    /// Lap time of a circular route, in seconds.
    pub fn period(&self) -> Option<f64> {
        match self {
            Motion::Circular { angular_speed, .. } if *angular_speed != 0.0 => Some(TAU / angular_speed.abs()),
            _ => None,
        }
    }

    pub fn position(&self, frame: usize, fps: f64) -> (f64, f64) {
        match *self {
            Motion::ConstantVelocity { start, velocity } => {
                let f = frame as f64;
                (start[0] + velocity[0] * f, start[1] + velocity[1] * f)
            }
            Motion::Circular { center, radius, angular_speed, phase } => {
                let theta = phase + angular_speed * frame as f64 / fps;
                (center[0] + radius * theta.cos(), center[1] + radius * theta.sin())
            }
        }
    }
}

impl TargetSpec {
    pub fn is_occluded(&self, frame: usize) -> bool {
        self.occlusions.iter().any(|&[s, e]| frame >= s && frame < e)
    }
}

impl ScenarioConfig {
    pub fn total_frames(&self) -> usize {
        (self.duration * self.fps).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        // zero duration is a valid, empty scenario
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return bad(format!("scenario.duration must be >= 0, got {}", self.duration));
        }
        if !(self.fps > 0.0 && self.fps.is_finite()) {
            return bad(format!("scenario.fps must be > 0, got {}", self.fps));
        }
        if self.frame_w == 0 || self.frame_h == 0 {
            return bad("scenario.frame_w and scenario.frame_h must be > 0".into());
        }
        let total = self.total_frames();
        for (i, t) in self.targets.iter().enumerate() {
            if !(t.size[0] > 0.0 && t.size[1] > 0.0) {
                return bad(format!("scenario.targets[{i}].size must be positive"));
            }
            if self.targets[..i].iter().any(|o| o.id == t.id) {
                return bad(format!("scenario.targets[{i}].id {} is duplicated", t.id));
            }
            let mut spans = t.occlusions.clone();
            spans.sort_unstable();
            for (k, &[s, e]) in spans.iter().enumerate() {
                if s >= e || e > total {
                    return bad(format!("scenario.targets[{i}].occlusions: [{s}, {e}) not inside [0, {total})"));
                }
                if k > 0 && spans[k - 1][1] > s {
                    return bad(format!("scenario.targets[{i}].occlusions overlap"));
                }
            }
        }
        self.detector.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetTruth {
    pub id: u32,
    pub bbox: BBox,
    pub occluded: bool,
    /// Not occluded and centered inside the frame.
    pub visible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruthFrame {
    pub index: usize,
    pub targets: Vec<TargetTruth>,
}

impl GroundTruthFrame {
    /// Same frame seen by a camera whose view is offset by `(dx, dy)` pixels;
    /// visibility is re-evaluated against the frame bounds.
    pub fn shifted(&self, dx: f64, dy: f64, frame_w: f64, frame_h: f64) -> Self {
        let targets = self
            .targets
            .iter()
            .map(|t| {
                let bbox = t.bbox.translated(-dx, -dy);
                TargetTruth { bbox, visible: !t.occluded && in_frame(&bbox, frame_w, frame_h), ..t.clone() }
            })
            .collect();
        Self { index: self.index, targets }
    }
}

fn in_frame(b: &BBox, w: f64, h: f64) -> bool {
    b.cx >= 0.0 && b.cx < w && b.cy >= 0.0 && b.cy < h
}

/// Iterator over the ground truth of a scenario, one item per frame.
#[derive(Debug, Clone)]
pub struct ScenarioStream<'a> {
    config: &'a ScenarioConfig,
    next: usize,
    total: usize,
}

impl Iterator for ScenarioStream<'_> {
    type Item = GroundTruthFrame;

    fn next(&mut self) -> Option<GroundTruthFrame> {
        if self.next >= self.total {
            return None;
        }
        let f = self.next;
        self.next += 1;
        let c = self.config;
        let (w, h) = (f64::from(c.frame_w), f64::from(c.frame_h));
        let targets = c
            .targets
            .iter()
            .map(|t| {
                let (cx, cy) = t.motion.position(f, c.fps);
                let bbox = BBox::new(cx, cy, t.size[0], t.size[1]);
                let occluded = t.is_occluded(f);
                TargetTruth { id: t.id, bbox, occluded, visible: !occluded && in_frame(&bbox, w, h) }
            })
            .collect();
        Some(GroundTruthFrame { index: f, targets })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.total - self.next;
        (n, Some(n))
    }
}

impl ExactSizeIterator for ScenarioStream<'_> {}

/// Ground truth for every frame of the scenario. Generation itself draws no
/// random numbers; the seed only feeds the detector.
pub fn generate(config: &ScenarioConfig) -> ScenarioStream<'_> {
    ScenarioStream { config, next: 0, total: config.total_frames() }
}
