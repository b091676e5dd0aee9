//! Per-stage latency statistics, written to and read back from the timing CSV
//! used by `gazetrack report`.

use gazetrack::pipeline::{
    latency_report, read_timing_csv, run, write_timing_csv, Executor, LatencyModel, PipelineConfig, StageSpec,
};
use gazetrack::simworld::{DetectorModel, Motion, ScenarioConfig, TargetSpec};
use gazetrack::tracker::TrackerConfig;

fn main() -> gazetrack::Result<()> {
    let scenario = ScenarioConfig {
        duration: 10.0,
        fps: 30.0,
        frame_w: 1280,
        frame_h: 720,
        seed: 2,
        targets: vec![TargetSpec {
            id: 1,
            size: [60.0, 40.0],
            motion: Motion::ConstantVelocity { start: [640.0, 360.0], velocity: [0.0, 0.0] },
            occlusions: vec![],
        }],
        detector: DetectorModel::default(),
    };
    // a made-up three-stage pipeline: one jittery accelerator stage
    let pipe = PipelineConfig {
        stages: vec![
            StageSpec::new("capture", Executor::Host, LatencyModel::Constant { ms: 8.0 }),
            StageSpec::new("infer", Executor::Accelerator, LatencyModel::Normal { mean: 30.0, sigma: 6.0 }),
            StageSpec::new("track", Executor::Host, LatencyModel::Normal { mean: 4.0, sigma: 0.5 }),
        ],
        ..PipelineConfig::default()
    };
    let out = run(&scenario, &TrackerConfig::default(), &pipe)?;

    let mut csv = Vec::new();
    write_timing_csv(&mut csv, &out.stage_names, &out.timings)?;
    println!("{}", String::from_utf8_lossy(&csv).lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("...\n");

    let (names, timings) = read_timing_csv(&csv[..])?;
    let r = latency_report(&timings, &names)?;
    println!("{:<8} {:>8} {:>7} {:>8} {:>8} {:>8}", "series", "mean", "std", "p50", "p95", "p99");
    for (name, s) in r.stages.iter().map(|(n, s)| (n.as_str(), s)).chain([("total", &r.total)]) {
        println!("{name:<8} {:>8.3} {:>7.3} {:>8.3} {:>8.3} {:>8.3}", s.mean, s.std, s.p50, s.p95, s.p99);
    }
    Ok(())
}
