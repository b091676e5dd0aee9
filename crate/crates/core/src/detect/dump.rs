//! Raw head dumps: a 24-byte little-endian header followed by `f32` values.
//!
//! ```text
//! offset  size  field
//!      0     4  magic "YHD1"
//!      4     4  grid_h     (u32)
//!      8     4  grid_w     (u32)
//!     12     4  n_anchors  (u32)
//!     16     4  n_classes  (u32)
//!     20     4  stride     (u32, pixels)
//!     24   4·n  raw values (f32), cell-major as in `FeatureMap`
//! ```
//!
//! Anchors are not stored in the dump and are supplied by the caller.

use std::io::{Read, Write};

use super::decode::FeatureMap;
use crate::{Error, Result};

pub const HEAD_DUMP_MAGIC: [u8; 4] = *b"YHD1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeadDumpHeader {
    pub grid_h: u32,
    pub grid_w: u32,
    pub n_anchors: u32,
    pub n_classes: u32,
    pub stride: u32,
}

pub fn write_head_dump<W: Write>(mut w: W, map: &FeatureMap, n_classes: usize) -> Result<()> {
    if map.raw.len() != map.expected_len(n_classes) {
        return Err(Error::MalformedHead("raw length does not match header".into()));
    }
    w.write_all(&HEAD_DUMP_MAGIC)?;
    for v in [map.grid_h, map.grid_w, map.anchors.len(), n_classes, map.stride as usize] {
        w.write_all(&(v as u32).to_le_bytes())?;
    }
    for v in &map.raw {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Reads one dump. `anchors` must have `n_anchors` entries.
pub fn read_head_dump<R: Read>(mut r: R, anchors: &[(f64, f64)]) -> Result<(HeadDumpHeader, FeatureMap)> {
    let mut head = [0u8; 24];
    r.read_exact(&mut head).map_err(|_| Error::MalformedHead("dump shorter than its 24-byte header".into()))?;
    if head[..4] != HEAD_DUMP_MAGIC {
        return Err(Error::MalformedHead("bad magic".into()));
    }
    let field = |i: usize| u32::from_le_bytes(head[4 + 4 * i..8 + 4 * i].try_into().unwrap());
    let hdr = HeadDumpHeader {
        grid_h: field(0),
        grid_w: field(1),
        n_anchors: field(2),
        n_classes: field(3),
        stride: field(4),
    };
    if hdr.n_anchors as usize != anchors.len() {
        return Err(Error::MalformedHead(format!("dump has {} anchors, {} supplied", hdr.n_anchors, anchors.len())));
    }

    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    let want = hdr.grid_h as usize * hdr.grid_w as usize * hdr.n_anchors as usize * (5 + hdr.n_classes as usize);
    if body.len() != want * 4 {
        return Err(Error::MalformedHead(format!("expected {want} values, found {} bytes", body.len())));
    }
    let raw = body.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().unwrap())).collect();
    let map = FeatureMap {
        grid_h: hdr.grid_h as usize,
        grid_w: hdr.grid_w as usize,
        stride: f64::from(hdr.stride),
        anchors: anchors.to_vec(),
        raw,
    };
    Ok((hdr, map))
}
