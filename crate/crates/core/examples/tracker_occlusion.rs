//! Two targets crossing, one of them hidden for a while. Prints the track
//! events and the ids reported each frame.

use gazetrack::geometry::BBox;
use gazetrack::tracker::{Detection, Tracker, TrackerConfig};

fn main() {
    let mut tracker = Tracker::new(TrackerConfig::default());
    for frame in 0..90 {
        let t = frame as f64;
        let mut dets = vec![Detection::new(BBox::new(200.0 + 5.0 * t, 300.0, 60.0, 40.0), 0.9)];
        // second target disappears behind something for 20 frames
        if !(40..60).contains(&frame) {
            dets.push(Detection::new(BBox::new(700.0 - 3.0 * t, 500.0 - t, 50.0, 50.0), 0.8));
        }
        let out = tracker.step(&dets);
        for id in &out.created {
            println!("frame {frame:>2}: created track {id}");
        }
        for id in &out.confirmed {
            println!("frame {frame:>2}: confirmed track {id}");
        }
        for id in &out.deleted {
            println!("frame {frame:>2}: deleted track {id}");
        }
        if frame % 10 == 0 || (38..62).contains(&frame) && frame % 4 == 0 {
            let ids: Vec<String> =
                out.active.iter().map(|s| format!("{}{}", s.id, if s.is_reported() { "" } else { "?" })).collect();
            println!("frame {frame:>2}: tracks [{}]  (? = not reported)", ids.join(", "));
        }
    }
}
