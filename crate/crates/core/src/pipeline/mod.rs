//! The closed loop: staged frame processing with modeled per-stage latency,
//! accelerator lanes, and a proportional gimbal controller.

mod export;
mod gimbal;
mod lanes;
mod latency;
mod report;
mod run;

pub use export::{read_timing_csv, write_gimbal_csv, write_timing_csv};
pub use gimbal::{gimbal_control, gimbal_step, GimbalCommand, GimbalConfig, GimbalSample, GimbalState};
pub use lanes::{schedule_lanes, LaneReport};
pub use latency::{Executor, FrameTiming, LatencyModel, PipelineConfig, Profile, StageSpec};
pub use report::{latency_report, reduction_percent, LatencyReport, Summary};
pub use run::{run, run_with_mode, ExecutionMode, RunOutput};
