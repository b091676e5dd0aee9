//! Reference semantics of the YOLOv5 detection-output operator.
//!
//! Per cell `(x, y)` and anchor `(aw, ah)` with raw values
//! `(tx, ty, tw, th, obj, cls...)`:
//!
//! ```text
//! cx   = (x + 2·σ(tx) − 0.5) · stride
//! cy   = (y + 2·σ(ty) − 0.5) · stride
//! w    = aw · (2·σ(tw))²
//! h    = ah · (2·σ(th))²
//! conf = σ(obj) · max_c σ(cls_c)
//! ```
//!
//! Candidates below the confidence threshold are dropped, boxes are clipped to
//! the square network input and the survivors go through [`nms`].

use serde::{Deserialize, Serialize};

use super::activation::sigmoid;
use super::nms::nms;
use crate::geometry::BBox;
use crate::tracker::Detection;
use crate::{Error, Result};

/// One detection head. `raw` is laid out cell-major:
/// `((y * grid_w + x) * n_anchors + a) * (5 + n_classes) + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    pub grid_h: usize,
    pub grid_w: usize,
    /// Pixels per grid cell.
    pub stride: f64,
    /// Anchor sizes in pixels.
    pub anchors: Vec<(f64, f64)>,
    pub raw: Vec<f32>,
}

impl FeatureMap {
    pub fn expected_len(&self, n_classes: usize) -> usize {
        self.grid_h * self.grid_w * self.anchors.len() * (5 + n_classes)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecodeParams {
    /// Side of the square network input, in pixels.
    pub input_size: f64,
    pub conf_threshold: f64,
    pub nms_iou_threshold: f64,
    pub n_classes: usize,
}

impl Default for DecodeParams {
    fn default() -> Self {
        Self { input_size: 640.0, conf_threshold: 0.25, nms_iou_threshold: 0.45, n_classes: 1 }
    }
}

pub fn decode_heads(maps: &[FeatureMap], p: &DecodeParams) -> Result<Vec<Detection>> {
    if !(0.0..=1.0).contains(&p.conf_threshold) || !(0.0..=1.0).contains(&p.nms_iou_threshold) {
        return Err(Error::Config("decode thresholds must lie in [0, 1]".into()));
    }
    for (i, m) in maps.iter().enumerate() {
        let want = m.expected_len(p.n_classes);
        if m.raw.len() != want {
            return Err(Error::MalformedHead(format!(
                "head {i}: raw has {} values, grid {}x{} with {} anchors and {} classes needs {want}",
                m.raw.len(),
                m.grid_h,
                m.grid_w,
                m.anchors.len(),
                p.n_classes
            )));
        }
        if maps[..i].iter().any(|o| o.stride == m.stride) {
            return Err(Error::MalformedHead(format!("head {i}: stride {} repeats an earlier head", m.stride)));
        }
    }

    let per = 5 + p.n_classes;
    let mut candidates = Vec::new();
    for m in maps {
        for y in 0..m.grid_h {
            for x in 0..m.grid_w {
                for (a, &(aw, ah)) in m.anchors.iter().enumerate() {
                    let base = ((y * m.grid_w + x) * m.anchors.len() + a) * per;
                    let v = |k: usize| f64::from(m.raw[base + k]);

                    let obj = sigmoid(v(4));
                    let (class_id, cls) = (0..p.n_classes)
                        .map(|c| (c, sigmoid(v(5 + c))))
                        .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
                    let conf = if p.n_classes == 0 { obj } else { obj * cls };
                    if conf < p.conf_threshold {
                        continue;
                    }

                    let cx = (x as f64 + 2.0 * sigmoid(v(0)) - 0.5) * m.stride;
                    let cy = (y as f64 + 2.0 * sigmoid(v(1)) - 0.5) * m.stride;
                    let w = aw * (2.0 * sigmoid(v(2))).powi(2);
                    let h = ah * (2.0 * sigmoid(v(3))).powi(2);
                    if let Some(b) = BBox::new(cx, cy, w, h).clipped(p.input_size, p.input_size) {
                        candidates.push(Detection::new(b, conf).with_class(class_id as u32));
                    }
                }
            }
        }
    }
    Ok(nms(&candidates, p.nms_iou_threshold))
}
