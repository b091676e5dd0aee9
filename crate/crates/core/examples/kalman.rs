//! Predict/update cycle of the box filter on a target moving at constant
//! velocity, with a detection dropout in the middle.

use gazetrack::filtering::{gating_distance, predict, update, KalmanTrackState, Measurement, MotionModel};
use gazetrack::geometry::{bbox_to_state, BBox};

fn main() -> gazetrack::Result<()> {
    let model = MotionModel::for_box(80.0, 60.0, 1.0 / 30.0);
    let truth = |k: usize| BBox::new(200.0 + 6.0 * k as f64, 300.0 + 2.0 * k as f64, 80.0, 60.0);

    let mut state = KalmanTrackState::initiate(&truth(0), &model);
    println!("frame  measured      est_cx   est_cy   vx/frame  gate_d2");
    for k in 1..40 {
        state = predict(&state, &model);
        // frames 20..25 have no detection
        let seen = !(20..25).contains(&k);
        let z = Measurement::from(bbox_to_state(&truth(k)).to_array());
        let d2 = gating_distance(&state, &z, &model)?;
        if seen {
            state = update(&state, &z, &model)?;
        }
        let b = state.bbox();
        println!(
            "{k:>5}  {:<8}  {:>9.2} {:>8.2} {:>9.3} {:>8.3}",
            if seen { "yes" } else { "-" },
            b.cx,
            b.cy,
            state.mean[4] * model.dt,
            d2
        );
    }
    Ok(())
}
