//! INT8 round trip of a weight-like tensor and the resulting error.

use gazetrack::detect::{dequantize, quantize};
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

fn main() -> gazetrack::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let normal = Normal::new(0.0, 0.05).unwrap();
    let t: Vec<f64> = (0..4096).map(|_| normal.sample(&mut rng)).collect();

    let q = quantize(&t)?;
    let back = dequantize(&q);
    let max_abs = t.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let worst = t.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let rms = (t.iter().zip(&back).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / t.len() as f64).sqrt();

    println!("elements        {}", t.len());
    println!("max |x|         {max_abs:.6}");
    println!("position/scale  2^{} * {:.6}", q.position, q.scale);
    println!("step            {:.3e}", q.step());
    println!("worst error     {worst:.3e}  ({:.4} of range, bound {:.4})", worst / max_abs, 0.5 / 127.0);
    println!("rms error       {rms:.3e}");
    Ok(())
}
