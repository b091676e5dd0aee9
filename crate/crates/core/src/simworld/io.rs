//! Line format shared by ground-truth and detection exports:
//!
//! ```text
//! frame_idx,target_id,cx,cy,w,h,value
//! ```
//!
//! `value` is the visible flag (0/1) for ground truth and the confidence for
//! detections. False-positive detections use target id `-1`. Blank lines,
//! `#` comments and a leading header line are ignored on input.

use std::io::{BufRead, Write};

use super::scenario::GroundTruthFrame;
use crate::geometry::BBox;
use crate::tracker::Detection;
use crate::{Error, Result};

pub const HEADER: &str = "frame_idx,target_id,cx,cy,w,h,value";

#[derive(Debug, Clone, PartialEq)]
pub struct LineRecord {
    pub frame: usize,
    pub target_id: i64,
    pub bbox: BBox,
    pub value: f64,
}

impl LineRecord {
    pub fn to_line(&self) -> String {
        let b = self.bbox;
        format!("{},{},{:.4},{:.4},{:.4},{:.4},{:.4}", self.frame, self.target_id, b.cx, b.cy, b.w, b.h, self.value)
    }

    pub fn parse(line: &str, line_no: usize) -> Result<Self> {
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 7 {
            return Err(err(format!("expected 7 comma-separated fields, found {}", fields.len())));
        }
        let num = |i: usize| -> Result<f64> {
            fields[i]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(format!("field {} is not a number: {:?}", i + 1, fields[i])))
        };
        let frame = fields[0].parse::<usize>().map_err(|_| err(format!("bad frame index {:?}", fields[0])))?;
        let target_id = fields[1].parse::<i64>().map_err(|_| err(format!("bad target id {:?}", fields[1])))?;
        let bbox = BBox::new(num(2)?, num(3)?, num(4)?, num(5)?);
        if !bbox.is_valid() {
            return Err(err("box width and height must be positive".into()));
        }
        Ok(Self { frame, target_id, bbox, value: num(6)? })
    }
}

pub fn write_ground_truth<W: Write>(mut w: W, frames: &[GroundTruthFrame]) -> Result<()> {
    writeln!(w, "{HEADER}")?;
    for f in frames {
        for t in &f.targets {
            let rec = LineRecord {
                frame: f.index,
                target_id: i64::from(t.id),
                bbox: t.bbox,
                value: f64::from(u8::from(t.visible)),
            };
            writeln!(w, "{}", rec.to_line())?;
        }
    }
    Ok(())
}

/// Writes `(frame index, detections)` pairs.
pub fn write_detections<W: Write>(mut w: W, frames: &[(usize, Vec<Detection>)]) -> Result<()> {
    writeln!(w, "{HEADER}")?;
    for (frame, dets) in frames {
        for d in dets {
            let target_id = d.source.map_or(-1, i64::from);
            let rec = LineRecord { frame: *frame, target_id, bbox: d.bbox, value: d.confidence };
            writeln!(w, "{}", rec.to_line())?;
        }
    }
    Ok(())
}

/// Parses every record, reporting the 1-based line number of the first bad line.
pub fn read_records<R: BufRead>(r: R) -> Result<Vec<LineRecord>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || (i == 0 && trimmed.starts_with("frame")) {
            continue;
        }
        out.push(LineRecord::parse(trimmed, i + 1)?);
    }
    Ok(out)
}
