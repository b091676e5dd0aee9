//! Rectangular assignment with forbidden pairs.
//!
//! The solver first maximises the number of matched pairs, then minimises the
//! total cost among those.

use gazetrack::assignment::{solve, CostMatrix};

fn main() {
    // rows: tracks, cols: detections; None is a pair that must not match
    let rows: [[Option<f64>; 4]; 3] = [
        [Some(0.2), Some(0.9), None, Some(0.7)],
        [Some(0.1), None, None, None],
        [None, Some(0.4), Some(0.3), Some(0.8)],
    ];
    let m = CostMatrix::from_fn(3, 4, |i, j| rows[i][j]);
    let a = solve(&m);
    for (i, j) in &a.pairs {
        println!("track {i} -> detection {j}  cost {:.2}", m.get(*i, *j).unwrap());
    }
    println!("total cost {:.2}", a.total_cost);
    println!("unmatched tracks {:?}, unmatched detections {:?}", a.unmatched_rows, a.unmatched_cols);

    // track 0 prefers detection 0 but gives it up so track 1 can match at all
    assert_eq!(a.pairs.len(), 3);
}
