//! Recognition rate, identity switches and fragmentation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::scenario::GroundTruthFrame;
use crate::geometry::{iou, BBox};
use crate::{Error, Result};

/// A reported track box for one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackBox {
    pub id: u64,
    pub bbox: BBox,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvalConfig {
    /// Minimum IoU for a track to cover a target.
    pub iou_threshold: f64,
    pub window_seconds: f64,
    pub fps: f64,
    /// Covered fraction above which a target counts as mostly tracked.
    pub mostly_tracked: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self { iou_threshold: 0.5, window_seconds: 30.0, fps: 30.0, mostly_tracked: 0.8 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    /// `(window end seconds, cumulative recognized fraction up to that point)`.
    pub recognition_rate_per_window: Vec<(f64, f64)>,
    /// Recognized fraction within each window alone.
    pub window_rates: Vec<f64>,
    pub recognition_rate: f64,
    pub id_switches: usize,
    pub track_fragmentations: usize,
    pub mostly_tracked_fraction: f64,
    pub visible_target_frames: usize,
    pub recognized_target_frames: usize,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Default)]
struct TargetHistory {
    last_id: Option<u64>,
    covered_before: bool,
    gap_open: bool,
    visible: usize,
    covered: usize,
}

/// Scores reported track boxes against ground truth. Only visible targets are
/// scored; each track covers at most one target per frame (greedy by IoU).
pub fn evaluate(gt: &[GroundTruthFrame], tracks: &[Vec<TrackBox>], config: &EvalConfig) -> Result<MetricsReport> {
    if gt.len() != tracks.len() {
        return Err(Error::EvaluationInput(format!(
            "{} ground-truth frames but {} track frames",
            gt.len(),
            tracks.len()
        )));
    }
    let window = ((config.window_seconds * config.fps).round() as usize).max(1);

    let mut report = MetricsReport::default();
    let mut history: BTreeMap<u32, TargetHistory> = BTreeMap::new();
    let (mut win_visible, mut win_recognized) = (0usize, 0usize);

    for (f, (frame, boxes)) in gt.iter().zip(tracks).enumerate() {
        let mut candidates = Vec::new();
        for (ti, t) in frame.targets.iter().enumerate().filter(|(_, t)| t.visible) {
            for (bi, b) in boxes.iter().enumerate() {
                let o = iou(&t.bbox, &b.bbox);
                if o >= config.iou_threshold {
                    candidates.push((o, ti, bi));
                }
            }
        }
        candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut cover: BTreeMap<usize, u64> = BTreeMap::new();
        let mut used = vec![false; boxes.len()];
        for (_, ti, bi) in candidates {
            if !used[bi] && !cover.contains_key(&ti) {
                used[bi] = true;
                cover.insert(ti, boxes[bi].id);
            }
        }

        for (ti, t) in frame.targets.iter().enumerate().filter(|(_, t)| t.visible) {
            let h = history.entry(t.id).or_default();
            h.visible += 1;
            win_visible += 1;
            report.visible_target_frames += 1;
            match cover.get(&ti) {
                Some(&id) => {
                    h.covered += 1;
                    win_recognized += 1;
                    report.recognized_target_frames += 1;
                    if h.last_id.is_some_and(|last| last != id) {
                        report.id_switches += 1;
                    }
                    if h.gap_open {
                        report.track_fragmentations += 1;
                        h.gap_open = false;
                    }
                    h.last_id = Some(id);
                    h.covered_before = true;
                }
                None => h.gap_open |= h.covered_before,
            }
        }

        let end = f + 1;
        if end % window == 0 || end == gt.len() {
            report.window_rates.push(ratio(win_recognized, win_visible));
            report
                .recognition_rate_per_window
                .push((end as f64 / config.fps, ratio(report.recognized_target_frames, report.visible_target_frames)));
            win_visible = 0;
            win_recognized = 0;
        }
    }

    report.recognition_rate = ratio(report.recognized_target_frames, report.visible_target_frames);
    let seen: Vec<&TargetHistory> = history.values().filter(|h| h.visible > 0).collect();
    let mostly = seen.iter().filter(|h| h.covered as f64 >= config.mostly_tracked * h.visible as f64).count();
    report.mostly_tracked_fraction = ratio(mostly, seen.len());
    Ok(report)
}
