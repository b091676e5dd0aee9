//! Builds three synthetic YOLOv5 heads with a few planted objects, decodes
//! them, and writes the head dumps plus a `decode.toml` job so the same input
//! can be fed to `gazetrack decode`.
//!
//! `cargo run -p gazetrack --example decode_heads -- <dir>`

use std::fs;
use std::path::PathBuf;

use gazetrack::detect::{decode_heads, write_head_dump, DecodeParams, FeatureMap};

const ANCHORS: [[(f64, f64); 3]; 3] = [
    [(10.0, 13.0), (16.0, 30.0), (33.0, 23.0)],
    [(30.0, 61.0), (62.0, 45.0), (59.0, 119.0)],
    [(116.0, 90.0), (156.0, 198.0), (373.0, 326.0)],
];

fn logit(p: f64) -> f32 {
    (p / (1.0 - p)).ln() as f32
}

/// Raw values that decode to exactly `(cx, cy, w, h)` at the given cell.
fn plant(map: &mut FeatureMap, a: usize, cx: f64, cy: f64, w: f64, h: f64, score: f64) {
    let s = map.stride;
    let (x, y) = ((cx / s) as usize, (cy / s) as usize);
    let (aw, ah) = map.anchors[a];
    let base = ((y * map.grid_w + x) * map.anchors.len() + a) * 6;
    map.raw[base] = logit((cx / s - x as f64 + 0.5) / 2.0);
    map.raw[base + 1] = logit((cy / s - y as f64 + 0.5) / 2.0);
    map.raw[base + 2] = logit((w / aw).sqrt() / 2.0);
    map.raw[base + 3] = logit((h / ah).sqrt() / 2.0);
    map.raw[base + 4] = logit(score.sqrt());
    map.raw[base + 5] = logit(score.sqrt());
}

fn main() -> gazetrack::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "target/decode-demo".into()));
    fs::create_dir_all(dir.join("heads"))?;

    let params = DecodeParams::default();
    let mut maps: Vec<FeatureMap> = [8.0, 16.0, 32.0]
        .iter()
        .zip(ANCHORS)
        .map(|(&stride, anchors)| {
            let g = (params.input_size / stride) as usize;
            FeatureMap { grid_h: g, grid_w: g, stride, anchors: anchors.to_vec(), raw: vec![-12.0; g * g * 3 * 6] }
        })
        .collect();

    plant(&mut maps[0], 2, 100.0, 120.0, 30.0, 22.0, 0.92);
    plant(&mut maps[1], 1, 320.0, 300.0, 70.0, 50.0, 0.81);
    // a weaker duplicate of the same object from another anchor, removed by NMS
    plant(&mut maps[1], 0, 326.0, 300.0, 72.0, 50.0, 0.55);
    plant(&mut maps[2], 0, 500.0, 450.0, 120.0, 95.0, 0.66);
    // below the confidence threshold
    plant(&mut maps[2], 0, 150.0, 520.0, 120.0, 95.0, 0.1);

    let dets = decode_heads(&maps, &params)?;
    println!("decoded {} boxes", dets.len());
    for d in &dets {
        let b = d.bbox;
        println!("  cx {:>7.2} cy {:>7.2} w {:>6.2} h {:>6.2}  conf {:.3}", b.cx, b.cy, b.w, b.h, d.confidence);
    }

    let mut job =
        String::from("[params]\ninput_size = 640.0\nconf_threshold = 0.25\nnms_iou_threshold = 0.45\nn_classes = 1\n");
    for (name, map) in ["p3", "p4", "p5"].iter().zip(&maps) {
        write_head_dump(fs::File::create(dir.join(format!("heads/{name}.yhd")))?, map, 1)?;
        let anchors: Vec<String> = map.anchors.iter().map(|(w, h)| format!("[{w:?}, {h:?}]")).collect();
        job.push_str(&format!("\n[[heads]]\npath = \"heads/{name}.yhd\"\nanchors = [{}]\n", anchors.join(", ")));
    }
    fs::write(dir.join("decode.toml"), job)?;
    println!("wrote {}", dir.join("decode.toml").display());
    Ok(())
}
