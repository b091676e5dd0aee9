pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// `x * sigmoid(x)`
pub fn silu(x: f64) -> f64 {
    x / (1.0 + (-x).exp())
}

/// Piecewise-linear sigmoid: 0 below -3, 1 above 3, `x/6 + 1/2` between.
pub fn hard_sigmoid(x: f64) -> f64 {
    if x >= 3.0 {
        1.0
    } else if x <= -3.0 {
        0.0
    } else {
        x / 6.0 + 0.5
    }
}

pub fn hard_swish(x: f64) -> f64 {
    x * hard_sigmoid(x)
}
