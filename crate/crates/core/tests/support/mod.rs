//! Independent oracles and scenario builders shared by the integration tests.
//! Nothing here calls into the code paths it is used to check.

#![allow(dead_code)]

use gazetrack::detect::FeatureMap;
use gazetrack::geometry::BBox;
use gazetrack::simworld::{DetectorModel, Motion, ScenarioConfig, TargetSpec};
use rand::Rng;

// ---------------------------------------------------------------- assignment

/// Exhaustive search over partial matchings. Returns `(cardinality, cost)` of
/// the best matching: most pairs first, then least cost. Costs are summed in
/// row order. `None` entries are forbidden.
pub fn brute_force_assignment(m: &[Vec<Option<f64>>], n_cols: usize) -> (usize, f64) {
    fn rec(m: &[Vec<Option<f64>>], row: usize, used: &mut Vec<bool>, card: usize, cost: f64, best: &mut (usize, f64)) {
        if row == m.len() {
            if card > best.0 || (card == best.0 && cost < best.1) {
                *best = (card, cost);
            }
            return;
        }
        rec(m, row + 1, used, card, cost, best);
        for j in 0..used.len() {
            if let (false, Some(c)) = (used[j], m[row][j]) {
                used[j] = true;
                rec(m, row + 1, used, card + 1, cost + c, best);
                used[j] = false;
            }
        }
    }
    let mut best = (0, f64::INFINITY);
    rec(m, 0, &mut vec![false; n_cols], 0, 0.0, &mut best);
    if best.0 == 0 {
        best.1 = 0.0;
    }
    best
}

/// Random matrix with `p_forbid` forbidden entries. Integer costs when
/// `integer` so that sums are exact in any order.
pub fn random_cost_rows<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    p_forbid: f64,
    integer: bool,
) -> Vec<Vec<Option<f64>>> {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if rng.random_bool(p_forbid) {
                        None
                    } else if integer {
                        Some(f64::from(rng.random_range(0i32..=10)))
                    } else {
                        Some(rng.random_range(0.0..10.0))
                    }
                })
                .collect()
        })
        .collect()
}

// -------------------------------------------------------------------- kalman

pub type Mat7 = [[f64; 7]; 7];

/// Constant-velocity transition written out element by element.
pub fn cv_transition(dt: f64) -> Mat7 {
    let mut f = [[0.0; 7]; 7];
    for (i, row) in f.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    f[0][4] = dt;
    f[1][5] = dt;
    f[2][6] = dt;
    f
}

pub fn matmul7(a: &Mat7, b: &Mat7) -> Mat7 {
    let mut c = [[0.0; 7]; 7];
    for i in 0..7 {
        for j in 0..7 {
            let mut acc = 0.0;
            for k in 0..7 {
                acc += a[i][k] * b[k][j];
            }
            c[i][j] = acc;
        }
    }
    c
}

pub fn transpose7(a: &Mat7) -> Mat7 {
    let mut t = [[0.0; 7]; 7];
    for i in 0..7 {
        for j in 0..7 {
            t[j][i] = a[i][j];
        }
    }
    t
}

pub fn matvec7(a: &Mat7, x: &[f64; 7]) -> [f64; 7] {
    let mut y = [0.0; 7];
    for i in 0..7 {
        y[i] = (0..7).map(|k| a[i][k] * x[k]).sum();
    }
    y
}

/// Explicit `F x` and `F P Fᵀ + diag(q)`.
pub fn predict_oracle(mean: &[f64; 7], cov: &Mat7, dt: f64, q: &[f64; 7]) -> ([f64; 7], Mat7) {
    let f = cv_transition(dt);
    let mut p = matmul7(&matmul7(&f, cov), &transpose7(&f));
    for i in 0..7 {
        p[i][i] += q[i];
    }
    (matvec7(&f, mean), p)
}

// -------------------------------------------------------------------- decode

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn corner_iou(a: [f64; 4], b: [f64; 4]) -> f64 {
    let iw = (a[2].min(b[2]) - a[0].max(b[0])).max(0.0);
    let ih = (a[3].min(b[3]) - a[1].max(b[1])).max(0.0);
    let inter = iw * ih;
    if inter <= 0.0 {
        return 0.0;
    }
    let area = |r: [f64; 4]| (r[2] - r[0]) * (r[3] - r[1]);
    inter / (area(a) + area(b) - inter)
}

/// A decoded box in corner form: `(x1, y1, x2, y2, confidence, class)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefBox {
    pub corners: [f64; 4],
    pub confidence: f64,
    pub class_id: u32,
}

/// Straightforward decode + clip + per-class greedy suppression, kept apart
/// from the library implementation on purpose.
pub fn reference_decode(maps: &[FeatureMap], n_classes: usize, input: f64, conf_thr: f64, nms_thr: f64) -> Vec<RefBox> {
    let mut cands: Vec<RefBox> = Vec::new();
    for m in maps {
        let na = m.anchors.len();
        let per = 5 + n_classes;
        for cell in 0..m.grid_h * m.grid_w {
            let (gy, gx) = (cell / m.grid_w, cell % m.grid_w);
            for (a, anchor) in m.anchors.iter().enumerate() {
                let rec = &m.raw[(cell * na + a) * per..(cell * na + a + 1) * per];
                let s: Vec<f64> = rec.iter().map(|&v| logistic(v as f64)).collect();
                let mut best_c = 0usize;
                for c in 1..n_classes {
                    if s[5 + c] > s[5 + best_c] {
                        best_c = c;
                    }
                }
                let conf = if n_classes == 0 { s[4] } else { s[4] * s[5 + best_c] };
                if conf < conf_thr {
                    continue;
                }
                let cx = (gx as f64 - 0.5 + 2.0 * s[0]) * m.stride;
                let cy = (gy as f64 - 0.5 + 2.0 * s[1]) * m.stride;
                let w = 4.0 * s[2] * s[2] * anchor.0;
                let h = 4.0 * s[3] * s[3] * anchor.1;
                let x1 = (cx - w / 2.0).max(0.0).min(input);
                let y1 = (cy - h / 2.0).max(0.0).min(input);
                let x2 = (cx + w / 2.0).max(0.0).min(input);
                let y2 = (cy + h / 2.0).max(0.0).min(input);
                if x2 <= x1 || y2 <= y1 {
                    continue;
                }
                cands.push(RefBox { corners: [x1, y1, x2, y2], confidence: conf, class_id: best_c as u32 });
            }
        }
    }
    // stable: equal confidences keep generation order
    cands.sort_by(|a, b| b.confidence.partial_cmp(&a.confidence).unwrap());
    let mut alive = vec![true; cands.len()];
    let mut out = Vec::new();
    for i in 0..cands.len() {
        if !alive[i] {
            continue;
        }
        out.push(cands[i]);
        for j in i + 1..cands.len() {
            if cands[j].class_id == cands[i].class_id && corner_iou(cands[i].corners, cands[j].corners) > nms_thr {
                alive[j] = false;
            }
        }
    }
    out
}

pub fn corners_of(b: &BBox) -> [f64; 4] {
    [b.cx - b.w / 2.0, b.cy - b.h / 2.0, b.cx + b.w / 2.0, b.cy + b.h / 2.0]
}

/// Three heads (strides 8, 16, 32) over a square input, with logits drawn so
/// that a handful of cells clear a 0.25 threshold and some overlap.
pub fn random_heads<R: Rng>(rng: &mut R, input_cells: usize, n_classes: usize) -> Vec<FeatureMap> {
    let anchor_sets = [
        vec![(10.0, 13.0), (16.0, 30.0), (33.0, 23.0)],
        vec![(30.0, 61.0), (62.0, 45.0), (59.0, 119.0)],
        vec![(116.0, 90.0), (156.0, 198.0), (373.0, 326.0)],
    ];
    [8.0, 16.0, 32.0]
        .iter()
        .zip(anchor_sets)
        .map(|(&stride, anchors)| {
            let g = input_cells * 8 / stride as usize;
            let per = 5 + n_classes;
            let mut raw = Vec::with_capacity(g * g * anchors.len() * per);
            for _ in 0..g * g * anchors.len() {
                for k in 0..per {
                    let v: f32 = match k {
                        4 => {
                            if rng.random_bool(0.08) {
                                rng.random_range(-1.0..6.0)
                            } else {
                                rng.random_range(-12.0..-3.0)
                            }
                        }
                        _ if k >= 5 => rng.random_range(-3.0..5.0),
                        _ => rng.random_range(-3.0..3.0),
                    };
                    raw.push(v);
                }
            }
            FeatureMap { grid_h: g, grid_w: g, stride, anchors, raw }
        })
        .collect()
}

// ----------------------------------------------------------------- scenarios

/// One target crossing the frame left to right at constant speed.
pub fn crossing_scenario(
    frames: usize,
    occlusions: Vec<[usize; 2]>,
    detector: DetectorModel,
    seed: u64,
) -> ScenarioConfig {
    ScenarioConfig {
        duration: frames as f64 / 30.0,
        fps: 30.0,
        frame_w: 1920,
        frame_h: 1080,
        seed,
        targets: vec![TargetSpec {
            id: 1,
            size: [96.0, 64.0],
            motion: Motion::ConstantVelocity { start: [300.0, 540.0], velocity: [4.0, 0.5] },
            occlusions,
        }],
        detector,
    }
}

/// The long circular-route scenario: 150 s at 30 fps, one 1 s occlusion per
/// 100 s lap.
pub fn circular_route(seed: u64) -> ScenarioConfig {
    ScenarioConfig {
        duration: 150.0,
        fps: 30.0,
        frame_w: 1920,
        frame_h: 1080,
        seed,
        targets: vec![TargetSpec {
            id: 1,
            size: [120.0, 80.0],
            motion: Motion::Circular {
                center: [960.0, 540.0],
                radius: 400.0,
                angular_speed: 2.0 * std::f64::consts::PI / 100.0,
                phase: 0.0,
            },
            occlusions: vec![[1200, 1230], [4200, 4230]],
        }],
        detector: DetectorModel { p_miss: 0.003, sigma_center: 2.0, ..DetectorModel::default() },
    }
}

/// A motionless target `offset` pixels right of and below the frame center.
pub fn stationary_offset(offset: (f64, f64), frames: usize, detector: DetectorModel, seed: u64) -> ScenarioConfig {
    ScenarioConfig {
        duration: frames as f64 / 30.0,
        fps: 30.0,
        frame_w: 1920,
        frame_h: 1080,
        seed,
        targets: vec![TargetSpec {
            id: 1,
            size: [120.0, 80.0],
            motion: Motion::ConstantVelocity { start: [960.0 + offset.0, 540.0 + offset.1], velocity: [0.0, 0.0] },
            occlusions: vec![],
        }],
        detector,
    }
}
