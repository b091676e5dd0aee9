//! Cascade-matching multi-target tracker.
//!
//! Each frame runs, in order: predict every live track; cascade-match
//! confirmed tracks by appearance under a Mahalanobis gate, most recently
//! updated first; IoU (or SIoU) match tentative tracks plus the cascade
//! leftovers; update matched tracks; start tentative tracks for unmatched
//! detections; confirm tracks with `n_init` hits; delete tentative tracks
//! that missed and any track unmatched for more than `max_age` frames.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::assignment::{solve, CostMatrix};
use crate::filtering::{self, Gate, KalmanTrackState, Measurement, MotionModel, CHI2_95_4DOF};
use crate::geometry::{bbox_to_state, iou, siou, BBox, SIoUParams};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub bbox: BBox,
    pub confidence: f64,
    pub class_id: u32,
    /// Unit-norm appearance embedding.
    pub appearance: Option<Vec<f64>>,
    /// Ground-truth target that produced this detection, when known. Only
    /// simulated detections carry it; the tracker never reads it.
    pub source: Option<u32>,
}

impl Detection {
    pub fn new(bbox: BBox, confidence: f64) -> Self {
        Self { bbox, confidence, class_id: 0, appearance: None, source: None }
    }

    pub fn with_appearance(mut self, feature: Vec<f64>) -> Self {
        self.appearance = Some(feature);
        self
    }

    pub fn with_class(mut self, class_id: u32) -> Self {
        self.class_id = class_id;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrackStatus {
    Tentative,
    Confirmed,
    Deleted,
}

impl TrackStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TrackStatus::Tentative => "tentative",
            TrackStatus::Confirmed => "confirmed",
            TrackStatus::Deleted => "deleted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostMode {
    Iou,
    Siou,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrackerConfig {
    /// Frames a track may go unmatched before it is deleted.
    pub max_age: u32,
    /// Consecutive hits needed to confirm a track.
    pub n_init: u32,
    /// Minimum overlap for an IoU-stage pair.
    pub iou_match_threshold: f64,
    /// Maximum cosine distance for a cascade pair.
    pub appearance_threshold: f64,
    /// Maximum squared Mahalanobis distance for a cascade pair.
    pub gate_threshold: f64,
    pub gallery_size: usize,
    pub cost_mode: CostMode,
    pub siou: SIoUParams,
    /// When set, pairs with different class ids are never matched.
    pub multi_class: bool,
    pub motion: MotionModel,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            max_age: 30,
            n_init: 3,
            iou_match_threshold: 0.3,
            appearance_threshold: 0.2,
            gate_threshold: CHI2_95_4DOF,
            gallery_size: 30,
            cost_mode: CostMode::Iou,
            siou: SIoUParams::default(),
            multi_class: false,
            motion: MotionModel::default(),
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |k: &str, why: &str| Err(Error::Config(format!("tracker.{k} {why}")));
        if self.max_age < 1 {
            return bad("max_age", "must be >= 1");
        }
        if self.n_init < 1 {
            return bad("n_init", "must be >= 1");
        }
        if !(-1.0..=1.0).contains(&self.iou_match_threshold) {
            return bad("iou_match_threshold", "must lie in [-1, 1]");
        }
        if !(0.0..=2.0).contains(&self.appearance_threshold) {
            return bad("appearance_threshold", "must lie in [0, 2]");
        }
        if self.gate_threshold.is_nan() || self.gate_threshold <= 0.0 {
            return bad("gate_threshold", "must be > 0");
        }
        if self.gallery_size < 1 {
            return bad("gallery_size", "must be >= 1");
        }
        if !(self.siou.alpha > 0.0 && self.siou.epsilon >= 0.0) {
            return bad("siou", "needs alpha > 0 and epsilon >= 0");
        }
        self.motion.validate()
    }
}

#[derive(Debug, Clone)]
pub struct Track {
    pub id: u64,
    pub state: KalmanTrackState,
    pub status: TrackStatus,
    pub hits: u32,
    pub age: u32,
    pub time_since_update: u32,
    pub class_id: u32,
    /// Confidence of the last matched detection.
    pub confidence: f64,
    pub gallery: VecDeque<Vec<f64>>,
}

impl Track {
    fn new(id: u64, det: &Detection, config: &TrackerConfig) -> Self {
        let mut gallery = VecDeque::with_capacity(config.gallery_size);
        if let Some(f) = &det.appearance {
            gallery.push_back(f.clone());
        }
        Self {
            id,
            state: KalmanTrackState::initiate(&det.bbox, &config.motion),
            status: TrackStatus::Tentative,
            hits: 1,
            age: 0,
            time_since_update: 0,
            class_id: det.class_id,
            confidence: det.confidence,
            gallery,
        }
    }

    pub fn bbox(&self) -> BBox {
        self.state.bbox()
    }

    pub fn is_confirmed(&self) -> bool {
        self.status == TrackStatus::Confirmed
    }

    fn predict(&mut self, model: &MotionModel) {
        // keep the extrapolated area positive
        if self.state.mean[2] + self.state.mean[6] * model.dt <= 0.0 {
            self.state.mean[6] = 0.0;
        }
        self.state = filtering::predict(&self.state, model);
        self.age += 1;
        self.time_since_update += 1;
    }

    fn update(&mut self, det: &Detection, config: &TrackerConfig) {
        let z = Measurement::from(bbox_to_state(&det.bbox).to_array());
        self.state = filtering::update(&self.state, &z, &config.motion)
            .unwrap_or_else(|_| KalmanTrackState::initiate(&det.bbox, &config.motion));
        self.hits += 1;
        self.time_since_update = 0;
        self.confidence = det.confidence;
        if let Some(f) = &det.appearance {
            if self.gallery.len() == config.gallery_size {
                self.gallery.pop_front();
            }
            self.gallery.push_back(f.clone());
        }
    }

    pub fn snapshot(&self) -> TrackSnapshot {
        TrackSnapshot {
            id: self.id,
            bbox: self.bbox(),
            status: self.status,
            hits: self.hits,
            age: self.age,
            time_since_update: self.time_since_update,
            confidence: self.confidence,
            class_id: self.class_id,
        }
    }
}

/// Read-only view of a track after a step.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackSnapshot {
    pub id: u64,
    pub bbox: BBox,
    pub status: TrackStatus,
    pub hits: u32,
    pub age: u32,
    pub time_since_update: u32,
    pub confidence: f64,
    pub class_id: u32,
}

impl TrackSnapshot {
    /// Confirmed and matched in the current frame.
    pub fn is_reported(&self) -> bool {
        self.status == TrackStatus::Confirmed && self.time_since_update == 0
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepOutput {
    /// Every live track after the step, in creation order.
    pub active: Vec<TrackSnapshot>,
    pub created: Vec<u64>,
    pub confirmed: Vec<u64>,
    pub deleted: Vec<u64>,
}

impl StepOutput {
    pub fn reported(&self) -> impl Iterator<Item = &TrackSnapshot> {
        self.active.iter().filter(|t| t.is_reported())
    }
}

/// Result of one matching stage. Indices refer to the slices passed in.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Matches {
    /// `(track index, detection index)`
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_tracks: Vec<usize>,
    pub unmatched_detections: Vec<usize>,
}

/// Smallest cosine distance between the detection's embedding and any
/// embedding in the track's gallery.
pub fn appearance_cost(track: &Track, det: &Detection) -> Result<f64> {
    let feature = det.appearance.as_ref().ok_or(Error::FeatureUnavailable)?;
    track
        .gallery
        .iter()
        .filter(|g| g.len() == feature.len())
        .map(|g| 1.0 - g.iter().zip(feature).map(|(a, b)| a * b).sum::<f64>())
        .min_by(f64::total_cmp)
        .ok_or(Error::FeatureUnavailable)
}

fn class_compatible(track: &Track, det: &Detection, config: &TrackerConfig) -> bool {
    !config.multi_class || track.class_id == det.class_id
}

fn assign(
    track_idx: &[usize],
    det_idx: &[usize],
    cost: impl FnMut(usize, usize) -> Option<f64>,
) -> (Vec<(usize, usize)>, Vec<usize>, Vec<usize>) {
    let m = CostMatrix::from_fn(track_idx.len(), det_idx.len(), cost);
    let a = solve(&m);
    let pairs = a.pairs.iter().map(|&(i, j)| (track_idx[i], det_idx[j])).collect();
    let tracks = a.unmatched_rows.iter().map(|&i| track_idx[i]).collect();
    let dets = a.unmatched_cols.iter().map(|&j| det_idx[j]).collect();
    (pairs, tracks, dets)
}

/// Appearance matching of `track_idx` against `det_idx`, one level per
/// distinct `time_since_update`, smallest first. Entries outside the
/// Mahalanobis gate or the appearance threshold are forbidden.
pub fn cascade_match(
    tracks: &[Track],
    track_idx: &[usize],
    detections: &[Detection],
    det_idx: &[usize],
    config: &TrackerConfig,
) -> Matches {
    let mut levels: Vec<u32> = track_idx.iter().map(|&t| tracks[t].time_since_update).collect();
    levels.sort_unstable();
    levels.dedup();

    let measurements: Vec<Measurement> =
        detections.iter().map(|d| Measurement::from(bbox_to_state(&d.bbox).to_array())).collect();

    let mut out = Matches::default();
    let mut remaining: Vec<usize> = det_idx.to_vec();
    for level in levels {
        if remaining.is_empty() {
            break;
        }
        let at_level: Vec<usize> =
            track_idx.iter().copied().filter(|&t| tracks[t].time_since_update == level).collect();
        let gates: Vec<Option<Gate>> =
            at_level.iter().map(|&t| Gate::new(&tracks[t].state, &config.motion).ok()).collect();
        let (pairs, _, left) = assign(&at_level, &remaining, |i, j| {
            let track = &tracks[at_level[i]];
            let d = remaining[j];
            let det = &detections[d];
            if !class_compatible(track, det, config) {
                return None;
            }
            // the gate is far cheaper than a gallery scan, so it goes first
            let gate = gates[i].as_ref()?;
            if gate.distance(&measurements[d]) > config.gate_threshold {
                return None;
            }
            appearance_cost(track, det).ok().filter(|c| *c <= config.appearance_threshold)
        });
        out.pairs.extend(pairs);
        remaining = left;
    }
    let matched: Vec<usize> = out.pairs.iter().map(|p| p.0).collect();
    out.unmatched_tracks = track_idx.iter().copied().filter(|t| !matched.contains(t)).collect();
    out.unmatched_detections = remaining;
    out.pairs.sort_unstable();
    out
}

/// Overlap matching between predicted track boxes and detections with cost
/// `1 - overlap`. Pairs below `iou_match_threshold` are forbidden.
pub fn iou_match(
    tracks: &[Track],
    track_idx: &[usize],
    detections: &[Detection],
    det_idx: &[usize],
    config: &TrackerConfig,
) -> Matches {
    let boxes: Vec<BBox> = track_idx.iter().map(|&t| tracks[t].bbox()).collect();
    let (pairs, unmatched_tracks, unmatched_detections) = assign(track_idx, det_idx, |i, j| {
        let track = &tracks[track_idx[i]];
        let det = &detections[det_idx[j]];
        if !class_compatible(track, det, config) {
            return None;
        }
        let overlap = match config.cost_mode {
            CostMode::Iou => iou(&boxes[i], &det.bbox),
            CostMode::Siou => siou(&boxes[i], &det.bbox, &config.siou).siou,
        };
        (overlap >= config.iou_match_threshold).then_some(1.0 - overlap)
    });
    Matches { pairs, unmatched_tracks, unmatched_detections }
}

/// Stateful tracker. Call [`Tracker::step`] once per frame, in frame order.
#[derive(Debug, Clone)]
pub struct Tracker {
    config: TrackerConfig,
    tracks: Vec<Track>,
    next_id: u64,
}

impl Tracker {
    pub fn new(config: TrackerConfig) -> Self {
        Self { config, tracks: Vec::new(), next_id: 1 }
    }

    pub fn config(&self) -> &TrackerConfig {
        &self.config
    }

    pub fn tracks(&self) -> &[Track] {
        &self.tracks
    }

    /// Translates every track by `(dx, dy)` pixels. Used to compensate known
    /// camera motion, e.g. a gimbal pan, before the next step; velocities and
    /// covariances are unchanged.
    pub fn shift_tracks(&mut self, dx: f64, dy: f64) {
        for t in &mut self.tracks {
            t.state.mean[0] += dx;
            t.state.mean[1] += dy;
        }
    }

    pub fn step(&mut self, detections: &[Detection]) -> StepOutput {
        let config = &self.config;
        let mut out = StepOutput::default();

        for t in &mut self.tracks {
            t.predict(&config.motion);
        }

        let det_idx: Vec<usize> = (0..detections.len()).filter(|&i| detections[i].bbox.is_valid()).collect();
        let (confirmed, tentative): (Vec<usize>, Vec<usize>) =
            (0..self.tracks.len()).partition(|&i| self.tracks[i].is_confirmed());

        let cascade = cascade_match(&self.tracks, &confirmed, detections, &det_idx, config);
        let mut iou_candidates = tentative;
        iou_candidates.extend(&cascade.unmatched_tracks);
        iou_candidates.sort_unstable();
        let overlap = iou_match(&self.tracks, &iou_candidates, detections, &cascade.unmatched_detections, config);

        for &(t, d) in cascade.pairs.iter().chain(&overlap.pairs) {
            self.tracks[t].update(&detections[d], config);
        }
        for &t in &overlap.unmatched_tracks {
            let track = &mut self.tracks[t];
            if track.status == TrackStatus::Tentative || track.time_since_update > config.max_age {
                track.status = TrackStatus::Deleted;
            }
        }

        let mut fresh = overlap.unmatched_detections;
        fresh.sort_unstable();
        for d in fresh {
            let id = self.next_id;
            self.next_id += 1;
            self.tracks.push(Track::new(id, &detections[d], config));
            out.created.push(id);
        }

        for t in &mut self.tracks {
            if t.status == TrackStatus::Tentative && t.hits >= config.n_init {
                t.status = TrackStatus::Confirmed;
                out.confirmed.push(t.id);
            }
        }

        self.tracks.retain(|t| {
            let keep = t.status != TrackStatus::Deleted;
            if !keep {
                out.deleted.push(t.id);
            }
            keep
        });
        out.active = self.tracks.iter().map(Track::snapshot).collect();
        out
    }
}
