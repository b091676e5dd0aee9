//! Synthetic scenarios standing in for a camera feed, a ground-truth-driven
//! detector model and tracking-quality evaluation.

mod detector;
mod io;
mod metrics;
mod scenario;

pub use detector::{synth_detect, DetectorModel, FrameDraws, SynthDetector};
pub use io::{read_records, write_detections, write_ground_truth, LineRecord};
pub use metrics::{evaluate, EvalConfig, MetricsReport, TrackBox};
pub use scenario::{generate, GroundTruthFrame, Motion, ScenarioConfig, ScenarioStream, TargetSpec, TargetTruth};
