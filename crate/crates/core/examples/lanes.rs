//! Accelerator lanes: how many parallel workers a given service time needs to
//! keep up with the camera.

use gazetrack::pipeline::schedule_lanes;

fn main() {
    let fps = 30.0;
    let frames = 300;
    let arrivals: Vec<f64> = (0..frames).map(|i| i as f64 * 1000.0 / fps).collect();
    println!("service_ms  workers  paced_fps  mean_wait_ms  saturated_fps");
    for service in [20.0, 45.0, 90.0] {
        for workers in 1..=4 {
            let paced = schedule_lanes(&arrivals, &vec![service; frames], workers);
            let burst = schedule_lanes(&vec![0.0; frames], &vec![service; frames], workers);
            println!(
                "{service:>10.1} {workers:>8} {:>10.2} {:>13.2} {:>14.2}",
                paced.throughput_fps, paced.mean_wait_ms, burst.throughput_fps
            );
        }
    }
}
