//! Detection-side numeric kernels: activations, YOLO head decoding, NMS and
//! INT8 quantization.

mod activation;
mod decode;
mod dump;
mod nms;
mod quant;

pub use activation::{hard_sigmoid, hard_swish, sigmoid, silu};
pub use decode::{decode_heads, DecodeParams, FeatureMap};
pub use dump::{read_head_dump, write_head_dump, HeadDumpHeader, HEAD_DUMP_MAGIC};
pub use nms::nms;
pub use quant::{dequantize, quantize, QuantizedTensor};
