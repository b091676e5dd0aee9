//! IoU versus SIoU on a few box pairs.
//!
//! SIoU subtracts a penalty for center distance and shape mismatch, so two
//! pairs with equal IoU can still be told apart.

use gazetrack::geometry::{iou, siou, BBox, SIoUParams};

fn main() {
    let reference = BBox::new(100.0, 100.0, 40.0, 40.0);
    let pairs = [
        ("identical", BBox::new(100.0, 100.0, 40.0, 40.0)),
        ("shifted right", BBox::new(120.0, 100.0, 40.0, 40.0)),
        ("same center, wide", BBox::new(100.0, 100.0, 80.0, 20.0)),
        ("shifted and wide", BBox::new(110.0, 105.0, 80.0, 20.0)),
        ("disjoint", BBox::new(300.0, 100.0, 40.0, 40.0)),
    ];
    let p = SIoUParams::default();
    println!("{:<20} {:>7} {:>7} {:>7} {:>8}", "pair", "iou", "c_d", "c_s", "siou");
    for (name, b) in pairs {
        let s = siou(&reference, &b, &p);
        println!("{name:<20} {:>7.4} {:>7.4} {:>7.4} {:>8.4}", iou(&reference, &b), s.c_d, s.c_s, s.siou);
    }
}
