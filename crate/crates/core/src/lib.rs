//! Multi-object tracking and gazing.
//!
//! `gazetrack` implements a detection → tracking → gimbal-feedback chain and a
//! closed-loop simulator that accounts for per-stage latency:
//!
//! - [`geometry`]: boxes, IoU / SIoU overlap, box ↔ Kalman state conversion.
//! - [`filtering`]: 7-state constant-velocity Kalman filter and gating.
//! - [`assignment`]: rectangular Hungarian solver with forbidden entries.
//! - [`tracker`]: cascade + IoU matching tracker with track lifecycle.
//! - [`detect`]: activations, YOLO head decoding, NMS, INT8 quantization.
//! - [`simworld`]: synthetic scenarios, detector model, tracking metrics.
//! - [`pipeline`]: staged latency model, accelerator lanes, gimbal loop.
//! - [`cli`]: the `simulate` / `track` / `report` front end.
//!
//! Runnable walkthroughs for each area live in the crate's `examples/`
//! directory (`cargo run -p gazetrack --example <name>`).

pub mod assignment;
pub mod cli;
pub mod config;
pub mod detect;
pub mod error;
pub mod filtering;
pub mod geometry;
pub mod pipeline;
pub mod simworld;
pub mod tracker;

pub use error::{Error, Result};
