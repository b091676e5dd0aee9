use serde::Serialize;

/// Outcome of dispatching accelerator work over parallel lanes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaneReport {
    pub workers: usize,
    pub frames: usize,
    /// Last completion minus first arrival, ms.
    pub makespan_ms: f64,
    /// Frames per second over the makespan.
    pub throughput_fps: f64,
    pub mean_wait_ms: f64,
}

/// Round-robin dispatch: frame `i` runs on lane `i % workers`, starting when
/// both the frame has arrived and the lane is free.
pub fn schedule_lanes(arrivals_ms: &[f64], service_ms: &[f64], workers: usize) -> LaneReport {
    assert_eq!(arrivals_ms.len(), service_ms.len());
    let workers = workers.max(1);
    let mut free_at = vec![f64::NEG_INFINITY; workers];
    let (mut last_done, mut wait) = (f64::NEG_INFINITY, 0.0);
    for (i, (&arrive, &service)) in arrivals_ms.iter().zip(service_ms).enumerate() {
        let lane = i % workers;
        let start = arrive.max(free_at[lane]);
        wait += start - arrive;
        free_at[lane] = start + service;
        last_done = last_done.max(free_at[lane]);
    }
    let frames = arrivals_ms.len();
    let first = arrivals_ms.iter().copied().fold(f64::INFINITY, f64::min);
    let makespan_ms = if frames == 0 { 0.0 } else { last_done - first };
    LaneReport {
        workers,
        frames,
        makespan_ms,
        throughput_fps: if makespan_ms > 0.0 { frames as f64 * 1000.0 / makespan_ms } else { 0.0 },
        mean_wait_ms: if frames == 0 { 0.0 } else { wait / frames as f64 },
    }
}
