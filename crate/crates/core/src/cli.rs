//! Command-line front end.
//!
//! Exit codes: 0 success, 2 bad user input (arguments, configs, data files),
//! 3 environment or I/O failure.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{load_pipeline, load_scenario, load_tracker, DecodeJob, RunManifest};
use crate::detect::{decode_heads, read_head_dump, FeatureMap};
use crate::pipeline::{
    latency_report, read_timing_csv, reduction_percent, run_with_mode, write_gimbal_csv, write_timing_csv,
    ExecutionMode, LatencyReport, PipelineConfig, Profile, RunOutput,
};
use crate::simworld::{read_records, write_detections, write_ground_truth, LineRecord, MetricsReport};
use crate::tracker::{Detection, Tracker, TrackerConfig};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gazetrack", version, about = "Tracking-and-gazing pipeline simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario through the closed loop and write timing, gimbal and metrics reports.
    Simulate {
        /// Run manifest (TOML).
        manifest: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; overrides the manifest's `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Built-in latency profile; overrides the manifest's pipeline file.
        #[arg(long, value_enum)]
        profile: Option<Profile>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Run the producer and tracking stages on separate threads.
        #[arg(long)]
        pipelined: bool,
    },
    /// Track detections from a line-format file.
    Track {
        detections: PathBuf,
        /// Tracker config (TOML); defaults apply when absent.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Summarise a timing CSV, optionally against a "before" run.
    Report {
        timing: PathBuf,
        #[arg(long)]
        before: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Decode raw detection-head dumps into detections.
    Decode {
        /// Decode job (TOML) listing head dumps, anchors and thresholds.
        job: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_INPUT,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{text}") } else { write!(stdout, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Simulate { manifest, seed, out, profile, format, pipelined } => {
            cmd_simulate(&manifest, seed, out, profile, format, pipelined, stdout, stderr)
        }
        Command::Track { detections, config, out } => cmd_track(&detections, config.as_deref(), &out),
        Command::Report { timing, before, format } => cmd_report(&timing, before.as_deref(), format, stdout),
        Command::Decode { job, out } => cmd_decode(&job, &out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    match File::open(path) {
        Ok(f) => Ok(BufReader::new(f)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            Err(Error::Config(format!("{}: file not found", path.display())))
        }
        Err(e) => Err(Error::Io(e)),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_simulate(
    manifest_path: &Path,
    seed: Option<u64>,
    out: Option<PathBuf>,
    profile: Option<Profile>,
    format: Format,
    pipelined: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    let manifest = RunManifest::load(manifest_path)?;
    let mut scenario = load_scenario(&manifest.scenario)?;
    let tracker = match &manifest.tracker {
        Some(p) => load_tracker(p)?,
        None => TrackerConfig::default(),
    };
    let mut pipe = match (profile, &manifest.pipeline) {
        (Some(p), _) => PipelineConfig::profile(p),
        (None, Some(p)) => load_pipeline(p)?,
        (None, None) => PipelineConfig::default(),
    };
    if let Some(s) = seed.or(manifest.seed) {
        scenario.seed = s;
        pipe.seed = s;
    }

    let mode = if pipelined { ExecutionMode::Pipelined { queue_depth: 4 } } else { ExecutionMode::Sequential };
    let started = Instant::now();
    let output = run_with_mode(&scenario, &tracker, &pipe, mode)?;
    let wall = started.elapsed();

    let dir = out.unwrap_or(manifest.output_dir);
    fs::create_dir_all(&dir)?;
    write_timing_csv(create(&dir.join("timing.csv"))?, &output.stage_names, &output.timings)?;
    write_gimbal_csv(create(&dir.join("gimbal.csv"))?, &output.gimbal_trace)?;
    write_ground_truth(create(&dir.join("groundtruth.txt"))?, &output.ground_truth)?;
    let det_frames: Vec<(usize, Vec<Detection>)> = output.detections.iter().cloned().enumerate().collect();
    write_detections(create(&dir.join("detections.txt"))?, &det_frames)?;
    write_run_tracks(create(&dir.join("tracks.csv"))?, &output)?;
    match format {
        Format::Csv => write_metrics_csv(create(&dir.join("metrics.csv"))?, &output.metrics)?,
        Format::Json => {
            let mut w = create(&dir.join("metrics.json"))?;
            serde_json::to_writer_pretty(&mut w, &output.metrics).map_err(std::io::Error::from)?;
            writeln!(w)?;
        }
    }
    let report =
        if output.timings.is_empty() { None } else { Some(latency_report(&output.timings, &output.stage_names)?) };
    let summary = render_summary(&scenario.targets.len(), &output, report.as_ref());
    fs::write(dir.join("summary.txt"), &summary)?;

    write!(stdout, "{summary}")?;
    // wall-clock of this process, never mixed into modeled latencies
    writeln!(stderr, "simulated {} frames in {:.2?} wall-clock", output.timings.len(), wall)?;
    Ok(())
}

fn write_run_tracks<W: Write>(mut w: W, output: &RunOutput) -> Result<()> {
    writeln!(w, "frame,track_id,cx,cy,w,h,status")?;
    for (f, boxes) in output.tracks.iter().enumerate() {
        for t in boxes {
            let b = t.bbox;
            writeln!(w, "{f},{},{:.4},{:.4},{:.4},{:.4},confirmed", t.id, b.cx, b.cy, b.w, b.h)?;
        }
    }
    Ok(())
}

fn write_metrics_csv<W: Write>(mut w: W, m: &MetricsReport) -> Result<()> {
    writeln!(w, "metric,value")?;
    writeln!(w, "recognition_rate,{:.6}", m.recognition_rate)?;
    writeln!(w, "id_switches,{}", m.id_switches)?;
    writeln!(w, "track_fragmentations,{}", m.track_fragmentations)?;
    writeln!(w, "mostly_tracked_fraction,{:.6}", m.mostly_tracked_fraction)?;
    writeln!(w, "visible_target_frames,{}", m.visible_target_frames)?;
    writeln!(w, "recognized_target_frames,{}", m.recognized_target_frames)?;
    for ((end, cumulative), window) in m.recognition_rate_per_window.iter().zip(&m.window_rates) {
        writeln!(w, "cumulative_rate@{end}s,{cumulative:.6}")?;
        writeln!(w, "window_rate@{end}s,{window:.6}")?;
    }
    Ok(())
}

fn render_summary(n_targets: &usize, out: &RunOutput, report: Option<&LatencyReport>) -> String {
    let mut s = String::new();
    let m = &out.metrics;
    s.push_str(&format!("frames: {}  targets: {n_targets}\n\n", out.timings.len()));
    s.push_str("modeled latency (ms)\n");
    match report {
        Some(r) => {
            s.push_str(&format!(
                "  {:<12} {:>9} {:>8} {:>9} {:>9} {:>9} {:>9} {:>9}\n",
                "stage", "mean", "std", "min", "max", "p50", "p95", "p99"
            ));
            for (name, x) in r.stages.iter().map(|(n, x)| (n.as_str(), x)).chain([("total", &r.total)]) {
                s.push_str(&format!(
                    "  {name:<12} {:>9.3} {:>8.3} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>9.3}\n",
                    x.mean, x.std, x.min, x.max, x.p50, x.p95, x.p99
                ));
            }
        }
        None => s.push_str("  (no frames)\n"),
    }
    s.push_str(&format!(
        "\naccelerator lanes: {} worker(s), paced throughput {:.2} fps (mean wait {:.3} ms), saturated capacity {:.2} fps\n",
        out.lanes.workers, out.lanes.throughput_fps, out.lanes.mean_wait_ms, out.lane_capacity.throughput_fps
    ));
    s.push_str("\ntracking\n");
    s.push_str(&format!("  recognition rate      {:.4}\n", m.recognition_rate));
    for (end, rate) in &m.recognition_rate_per_window {
        s.push_str(&format!("    up to {end:>7.1} s      {rate:.4}\n"));
    }
    s.push_str(&format!("  id switches           {}\n", m.id_switches));
    s.push_str(&format!("  fragmentations        {}\n", m.track_fragmentations));
    s.push_str(&format!("  mostly tracked        {:.4}\n", m.mostly_tracked_fraction));
    if let Some(g) = out.gimbal_trace.last() {
        s.push_str(&format!("\nfinal gimbal pose: pan {:.3} deg, tilt {:.3} deg\n", g.pan, g.tilt));
    }
    s
}

pub fn cmd_track(detections: &Path, config: Option<&Path>, out: &Path) -> Result<()> {
    let config = match config {
        Some(p) => load_tracker(p)?,
        None => TrackerConfig::default(),
    };
    let records = read_records(open(detections)?)?;
    let n_frames = records.iter().map(|r| r.frame + 1).max().unwrap_or(0);
    let mut frames: Vec<Vec<Detection>> = vec![Vec::new(); n_frames];
    for LineRecord { frame, bbox, value, .. } in records {
        frames[frame].push(Detection::new(bbox, value.clamp(0.0, 1.0)));
    }

    let mut tracker = Tracker::new(config);
    let mut w = create(out)?;
    writeln!(w, "frame,track_id,cx,cy,w,h,status")?;
    for (f, dets) in frames.iter().enumerate() {
        let step = tracker.step(dets);
        for t in step.active.iter().filter(|t| t.time_since_update == 0) {
            let b = t.bbox;
            writeln!(w, "{f},{},{:.4},{:.4},{:.4},{:.4},{}", t.id, b.cx, b.cy, b.w, b.h, t.status.as_str())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_report(timing: &Path, before: Option<&Path>, format: Format, stdout: &mut dyn Write) -> Result<()> {
    let (names, timings) = read_timing_csv(open(timing)?)?;
    let report = latency_report(&timings, &names)?;
    let reduction = match before {
        Some(p) => {
            let (bn, bt) = read_timing_csv(open(p)?)?;
            let b = latency_report(&bt, &bn)?;
            Some((b.total.mean, reduction_percent(b.total.mean, report.total.mean)))
        }
        None => None,
    };

    match format {
        Format::Csv => {
            writeln!(stdout, "series,frames,mean,std,min,max,p50,p95,p99")?;
            for (name, s) in report.stages.iter().map(|(n, s)| (n.as_str(), s)).chain([("total_ms", &report.total)]) {
                writeln!(
                    stdout,
                    "{name},{},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3}",
                    report.frames, s.mean, s.std, s.min, s.max, s.p50, s.p95, s.p99
                )?;
            }
            if let Some((before_mean, pct)) = reduction {
                writeln!(stdout, "before_mean_ms,{before_mean:.3}")?;
                writeln!(stdout, "reduction_percent,{pct:.2}")?;
            }
        }
        Format::Json => {
            let mut v = serde_json::to_value(&report).map_err(std::io::Error::from)?;
            if let Some((before_mean, pct)) = reduction {
                v["before_mean_ms"] = before_mean.into();
                v["reduction_percent"] = pct.into();
            }
            writeln!(stdout, "{}", serde_json::to_string_pretty(&v).map_err(std::io::Error::from)?)?;
        }
    }
    Ok(())
}

pub fn cmd_decode(job: &Path, out: &Path) -> Result<()> {
    let job = DecodeJob::load(job)?;
    let maps = job
        .heads
        .iter()
        .map(|h| {
            let anchors: Vec<(f64, f64)> = h.anchors.iter().map(|a| (a[0], a[1])).collect();
            read_head_dump(open(&h.path)?, &anchors).map(|(_, m)| m)
        })
        .collect::<Result<Vec<FeatureMap>>>()?;
    let dets = decode_heads(&maps, &job.params)?;
    write_detections(create(out)?, &[(0, dets)])
}
