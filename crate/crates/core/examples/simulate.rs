//! Closed-loop run of the bundled scenario with both latency profiles, then a
//! comparison of their latency and tracking numbers.
//!
//! `cargo run --release -p gazetrack --example simulate [seconds]`

use std::path::Path;

use gazetrack::config::{load_scenario, load_tracker};
use gazetrack::pipeline::{latency_report, reduction_percent, run, PipelineConfig, Profile};
use gazetrack::simworld::ScenarioConfig;

fn main() -> gazetrack::Result<()> {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut scenario = load_scenario(&configs.join("scenario.toml"))?;
    if let Some(secs) = std::env::args().nth(1).and_then(|s| s.parse::<f64>().ok()) {
        scenario = ScenarioConfig { duration: secs, ..scenario };
        let frames = scenario.total_frames();
        for t in &mut scenario.targets {
            t.occlusions.retain(|o| o[1] <= frames);
        }
    }
    let tracker = load_tracker(&configs.join("tracker.toml"))?;

    let mut means = Vec::new();
    for profile in [Profile::Baseline, Profile::Optimized] {
        let out = run(&scenario, &tracker, &PipelineConfig::profile(profile))?;
        let r = latency_report(&out.timings, &out.stage_names)?;
        let m = &out.metrics;
        println!("{profile:?}");
        for (name, s) in &r.stages {
            println!("  {name:<12} mean {:>7.2} ms  p95 {:>7.2} ms", s.mean, s.p95);
        }
        println!("  total        mean {:>7.2} ms  p95 {:>7.2} ms", r.total.mean, r.total.p95);
        println!(
            "  recognition {:.4}  id switches {}  fragmentations {}",
            m.recognition_rate, m.id_switches, m.track_fragmentations
        );
        for (end, rate) in &m.recognition_rate_per_window {
            println!("    up to {end:>6.1} s  {rate:.4}");
        }
        means.push(r.total.mean);
    }
    println!("latency reduction {:.1}%", reduction_percent(means[0], means[1]));
    Ok(())
}
