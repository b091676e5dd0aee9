//! Symmetric INT8 quantization with a power-of-two exponent and a scale.
//!
//! A real value `x` is stored as `q = round(x / (scale · 2^position))` with
//! `q ∈ [−127, 127]`; the exponent is chosen so that `scale ∈ (0.5, 1]` maps
//! the largest magnitude exactly to ±127.

use crate::{Error, Result};

const MIN_POSITION: i32 = -64;
const MAX_POSITION: i32 = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedTensor {
    pub data: Vec<i8>,
    /// Power-of-two exponent.
    pub position: i32,
    pub scale: f64,
}

impl QuantizedTensor {
    /// Real value of one integer step, `scale · 2^position`.
    pub fn step(&self) -> f64 {
        self.scale * 2f64.powi(self.position)
    }
}

pub fn quantize(t: &[f64]) -> Result<QuantizedTensor> {
    if t.is_empty() {
        return Err(Error::InvalidTensor("empty tensor".into()));
    }
    if let Some(i) = t.iter().position(|x| !x.is_finite()) {
        return Err(Error::InvalidTensor(format!("element {i} is not finite")));
    }
    let max_abs = t.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max_abs == 0.0 {
        return Ok(QuantizedTensor { data: vec![0; t.len()], position: 0, scale: 1.0 });
    }

    let position = ((max_abs / 127.0).log2().ceil() as i32).clamp(MIN_POSITION, MAX_POSITION);
    let scale = max_abs / (127.0 * 2f64.powi(position));
    let q = QuantizedTensor { data: Vec::new(), position, scale };
    let step = q.step();
    let data = t.iter().map(|x| (x / step).round().clamp(-127.0, 127.0) as i8).collect();
    Ok(QuantizedTensor { data, ..q })
}

pub fn dequantize(q: &QuantizedTensor) -> Vec<f64> {
    let step = q.step();
    q.data.iter().map(|&v| f64::from(v) * step).collect()
}
