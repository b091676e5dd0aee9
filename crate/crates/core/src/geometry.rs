//! Axis-aligned boxes and overlap measures.
//!
//! Boxes are stored center + size because the tracker state is center based;
//! corner form is derived on demand.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Axis-aligned box in pixels, stored as center and size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub cx: f64,
    pub cy: f64,
    pub w: f64,
    pub h: f64,
}

impl BBox {
    pub const fn new(cx: f64, cy: f64, w: f64, h: f64) -> Self {
        Self { cx, cy, w, h }
    }

    /// Builds a box from corner coordinates `(x1, y1)`–`(x2, y2)`.
    pub fn from_corners(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        Self { cx: 0.5 * (x1 + x2), cy: 0.5 * (y1 + y2), w: x2 - x1, h: y2 - y1 }
    }

    pub fn corners(&self) -> (f64, f64, f64, f64) {
        let hw = 0.5 * self.w;
        let hh = 0.5 * self.h;
        (self.cx - hw, self.cy - hh, self.cx + hw, self.cy + hh)
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn is_valid(&self) -> bool {
        self.w > 0.0
            && self.h > 0.0
            && self.cx.is_finite()
            && self.cy.is_finite()
            && self.w.is_finite()
            && self.h.is_finite()
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self { cx: self.cx + dx, cy: self.cy + dy, ..*self }
    }

    /// Clips the box to `[0, max_x] × [0, max_y]`. Returns `None` when nothing
    /// of positive area remains.
    pub fn clipped(&self, max_x: f64, max_y: f64) -> Option<Self> {
        let (x1, y1, x2, y2) = self.corners();
        let (x1, y1) = (x1.clamp(0.0, max_x), y1.clamp(0.0, max_y));
        let (x2, y2) = (x2.clamp(0.0, max_x), y2.clamp(0.0, max_y));
        (x2 > x1 && y2 > y1).then(|| Self::from_corners(x1, y1, x2, y2))
    }
}

fn intersection(a: &BBox, b: &BBox) -> f64 {
    let (ax1, ay1, ax2, ay2) = a.corners();
    let (bx1, by1, bx2, by2) = b.corners();
    let iw = ax2.min(bx2) - ax1.max(bx1);
    let ih = ay2.min(by2) - ay1.max(by1);
    if iw <= 0.0 || ih <= 0.0 {
        0.0
    } else {
        iw * ih
    }
}

/// Intersection over union. Touching boxes (zero-area overlap) give 0.
pub fn iou(a: &BBox, b: &BBox) -> f64 {
    let inter = intersection(a, b);
    if inter == 0.0 {
        return 0.0;
    }
    let union = a.area() + b.area() - inter;
    (inter / union).clamp(0.0, 1.0)
}

/// Tunable constants of the SIoU penalty term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SIoUParams {
    pub epsilon: f64,
    pub alpha: f64,
}

impl Default for SIoUParams {
    fn default() -> Self {
        Self { epsilon: 0.0, alpha: 1.0 }
    }
}

/// Components of an SIoU evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SIoUBreakdown {
    pub iou: f64,
    /// Squared center distance over the squared diagonal of the enclosing box.
    pub c_d: f64,
    /// Mean relative width / height mismatch.
    pub c_s: f64,
    pub siou: f64,
}

/// Shape-aware IoU: `iou - (0.5 * (c_d + c_s) + epsilon)^alpha`.
pub fn siou(a: &BBox, b: &BBox, p: &SIoUParams) -> SIoUBreakdown {
    let iou = iou(a, b);

    let (ax1, ay1, ax2, ay2) = a.corners();
    let (bx1, by1, bx2, by2) = b.corners();
    let ew = ax2.max(bx2) - ax1.min(bx1);
    let eh = ay2.max(by2) - ay1.min(by1);
    let diag2 = ew * ew + eh * eh;
    let dx = a.cx - b.cx;
    let dy = a.cy - b.cy;
    let c_d = if diag2 > 0.0 { ((dx * dx + dy * dy) / diag2).min(1.0) } else { 0.0 };

    let c_w = (a.w - b.w).abs() / a.w.max(b.w);
    let c_h = (a.h - b.h).abs() / a.h.max(b.h);
    let c_s = 0.5 * (c_w + c_h);

    let penalty = (0.5 * (c_d + c_s) + p.epsilon).powf(p.alpha);
    SIoUBreakdown { iou, c_d, c_s, siou: iou - penalty }
}

/// Tracker measurement form: center `(u, v)`, area `s`, aspect ratio `r = w / h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxState {
    pub u: f64,
    pub v: f64,
    pub s: f64,
    pub r: f64,
}

impl BoxState {
    pub fn to_array(self) -> [f64; 4] {
        [self.u, self.v, self.s, self.r]
    }
}

pub fn bbox_to_state(b: &BBox) -> BoxState {
    BoxState { u: b.cx, v: b.cy, s: b.w * b.h, r: b.w / b.h }
}

pub fn state_to_bbox(st: &BoxState) -> Result<BBox> {
    if !(st.s > 0.0 && st.r > 0.0) {
        return Err(Error::InvalidState { s: st.s, r: st.r });
    }
    Ok(BBox { cx: st.u, cy: st.v, w: (st.s * st.r).sqrt(), h: (st.s / st.r).sqrt() })
}
