//! The gimbal loop alone: a target parked off center and the camera pulling
//! it in, frame by frame.

use gazetrack::pipeline::{gimbal_control, gimbal_step, GimbalConfig};

fn main() {
    let g = GimbalConfig::default();
    let frame = (1920.0, 1080.0);
    let ppd = g.pixels_per_degree(frame.0);
    let dt = 1.0 / 30.0;
    // world position of the target, in pixels at zero pan/tilt
    let world = (960.0 + 350.0, 540.0 - 200.0);

    let mut st = g.initial_state();
    println!("frame   offset_px   pan_deg  tilt_deg");
    for k in 0..40 {
        let seen = (world.0 - st.pan * ppd, world.1 - st.tilt * ppd);
        let offset = (seen.0 - frame.0 / 2.0).hypot(seen.1 - frame.1 / 2.0);
        if k % 3 == 0 {
            println!("{k:>5} {offset:>11.2} {:>9.3} {:>9.3}", st.pan, st.tilt);
        }
        let cmd = gimbal_control(seen, frame, (g.k_pan, g.k_tilt), g.max_rate);
        st = gimbal_step(&st, &cmd, dt);
    }
}
