//! Frame loop: draw stage latencies, synthesize detections for the current
//! camera pose, track, and steer the gimbal towards the best confirmed track.

use std::sync::mpsc::sync_channel;
use std::thread;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gimbal::{gimbal_control, gimbal_step, GimbalCommand, GimbalSample};
use super::lanes::{schedule_lanes, LaneReport};
use super::latency::{Executor, FrameTiming, PipelineConfig};
use crate::simworld::{
    evaluate, generate, EvalConfig, FrameDraws, GroundTruthFrame, MetricsReport, ScenarioConfig, SynthDetector,
    TrackBox,
};
use crate::tracker::{Detection, Tracker, TrackerConfig};
use crate::Result;

const DETECTOR_STREAM: u64 = 1;
const LATENCY_STREAM: u64 = 2;

/// How frames move through the loop. Both modes produce identical output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecutionMode {
    #[default]
    Sequential,
    /// Latency and detector draws run on a producer thread ahead of the
    /// tracking thread, handing frames over a bounded queue in frame order.
    Pipelined { queue_depth: usize },
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub stage_names: Vec<String>,
    pub timings: Vec<FrameTiming>,
    pub metrics: MetricsReport,
    pub gimbal_trace: Vec<GimbalSample>,
    /// Accelerator lanes with frames arriving at the camera rate.
    pub lanes: LaneReport,
    /// Accelerator lanes with every frame queued at time zero.
    pub lane_capacity: LaneReport,
    /// Ground truth in camera coordinates, per frame.
    pub ground_truth: Vec<GroundTruthFrame>,
    pub detections: Vec<Vec<Detection>>,
    /// Confirmed tracks updated in each frame.
    pub tracks: Vec<Vec<TrackBox>>,
}

pub fn run(scenario: &ScenarioConfig, tracker: &TrackerConfig, pipe: &PipelineConfig) -> Result<RunOutput> {
    run_with_mode(scenario, tracker, pipe, ExecutionMode::Sequential)
}

struct Produced {
    timing: FrameTiming,
    world: GroundTruthFrame,
    draws: FrameDraws,
}

struct Producer<'a> {
    scenario: &'a ScenarioConfig,
    pipe: &'a PipelineConfig,
    detector: &'a SynthDetector,
}

impl Producer<'_> {
    fn frames(&self) -> impl Iterator<Item = Produced> + '_ {
        let mut det_rng = ChaCha8Rng::seed_from_u64(self.scenario.seed);
        det_rng.set_stream(DETECTOR_STREAM);
        let mut lat_rng = ChaCha8Rng::seed_from_u64(self.pipe.seed);
        lat_rng.set_stream(LATENCY_STREAM);
        generate(self.scenario).map(move |world| {
            let stage_ms = self.pipe.stages.iter().map(|s| s.latency.sample(&mut lat_rng)).collect();
            let timing = FrameTiming::new(world.index, stage_ms);
            let draws = self.detector.draw(world.targets.len(), &mut det_rng);
            Produced { timing, world, draws }
        })
    }
}

struct Consumer<'a> {
    pipe: &'a PipelineConfig,
    detector: &'a SynthDetector,
    tracker: Tracker,
    frame: (f64, f64),
    dt: f64,
    ppd: f64,
    gimbal: super::gimbal::GimbalState,
    timings: Vec<FrameTiming>,
    trace: Vec<GimbalSample>,
    ground_truth: Vec<GroundTruthFrame>,
    detections: Vec<Vec<Detection>>,
    tracks: Vec<Vec<TrackBox>>,
}

impl Consumer<'_> {
    fn consume(&mut self, p: Produced) {
        let (w, h) = self.frame;
        let view = p.world.shifted(self.gimbal.pan * self.ppd, self.gimbal.tilt * self.ppd, w, h);
        let dets = self.detector.realize(&view, &p.draws);
        let out = self.tracker.step(&dets);
        let reported: Vec<TrackBox> = out.reported().map(|t| TrackBox { id: t.id, bbox: t.bbox }).collect();

        let g = &self.pipe.gimbal;
        let lead = out.reported().max_by(|a, b| a.confidence.total_cmp(&b.confidence).then(b.id.cmp(&a.id)));
        let cmd = lead.map_or(GimbalCommand::default(), |t| {
            gimbal_control((t.bbox.cx, t.bbox.cy), self.frame, (g.k_pan, g.k_tilt), g.max_rate)
        });
        let next = gimbal_step(&self.gimbal, &cmd, self.dt);
        // the view moves by a known amount; carry the tracks along with it
        self.tracker.shift_tracks(-(next.pan - self.gimbal.pan) * self.ppd, -(next.tilt - self.gimbal.tilt) * self.ppd);
        self.gimbal = next;
        self.trace.push(GimbalSample {
            frame: p.world.index,
            pan: self.gimbal.pan,
            tilt: self.gimbal.tilt,
            pan_rate: cmd.pan_rate,
            tilt_rate: cmd.tilt_rate,
        });

        self.timings.push(p.timing);
        self.ground_truth.push(view);
        self.detections.push(dets);
        self.tracks.push(reported);
    }
}

pub fn run_with_mode(
    scenario: &ScenarioConfig,
    tracker: &TrackerConfig,
    pipe: &PipelineConfig,
    mode: ExecutionMode,
) -> Result<RunOutput> {
    scenario.validate()?;
    tracker.validate()?;
    pipe.validate()?;

    let detector = SynthDetector::new(scenario);
    let frame = (f64::from(scenario.frame_w), f64::from(scenario.frame_h));
    let producer = Producer { scenario, pipe, detector: &detector };
    let mut consumer = Consumer {
        pipe,
        detector: &detector,
        tracker: Tracker::new(tracker.clone()),
        frame,
        dt: 1.0 / scenario.fps,
        ppd: pipe.gimbal.pixels_per_degree(frame.0),
        gimbal: pipe.gimbal.initial_state(),
        timings: Vec::new(),
        trace: Vec::new(),
        ground_truth: Vec::new(),
        detections: Vec::new(),
        tracks: Vec::new(),
    };

    match mode {
        ExecutionMode::Sequential => producer.frames().for_each(|p| consumer.consume(p)),
        ExecutionMode::Pipelined { queue_depth } => thread::scope(|s| {
            let (tx, rx) = sync_channel(queue_depth.max(1));
            let producer = &producer;
            s.spawn(move || {
                for p in producer.frames() {
                    if tx.send(p).is_err() {
                        break;
                    }
                }
            });
            for p in rx {
                consumer.consume(p);
            }
        }),
    }

    let accel: Vec<f64> = consumer
        .timings
        .iter()
        .map(|t| {
            pipe.stages
                .iter()
                .zip(&t.stage_ms)
                .filter(|(s, _)| s.executor == Executor::Accelerator)
                .map(|(_, ms)| ms)
                .sum()
        })
        .collect();
    let period_ms = 1000.0 / scenario.fps;
    let paced: Vec<f64> = (0..accel.len()).map(|i| i as f64 * period_ms).collect();
    let lanes = schedule_lanes(&paced, &accel, pipe.accelerator_workers);
    let lane_capacity = schedule_lanes(&vec![0.0; accel.len()], &accel, pipe.accelerator_workers);

    let eval = EvalConfig { fps: scenario.fps, ..EvalConfig::default() };
    let metrics = evaluate(&consumer.ground_truth, &consumer.tracks, &eval)?;

    Ok(RunOutput {
        stage_names: pipe.stage_names(),
        timings: consumer.timings,
        metrics,
        gimbal_trace: consumer.trace,
        lanes,
        lane_capacity,
        ground_truth: consumer.ground_truth,
        detections: consumer.detections,
        tracks: consumer.tracks,
    })
}
