//! Constant-velocity Kalman filter over the box state
//! `(u, v, s, r, u̇, v̇, ṡ)`.
//!
//! `u, v` is the box center, `s` its area and `r` its aspect ratio. The aspect
//! ratio carries no velocity. Measurements observe `(u, v, s, r)` directly.

use nalgebra::{SMatrix, SVector};
use serde::{Deserialize, Serialize};

use crate::geometry::{bbox_to_state, state_to_bbox, BBox, BoxState};
use crate::{Error, Result};

pub const STATE_DIM: usize = 7;
pub const MEAS_DIM: usize = 4;

pub type StateVector = SVector<f64, STATE_DIM>;
pub type StateMatrix = SMatrix<f64, STATE_DIM, STATE_DIM>;
pub type Measurement = SVector<f64, MEAS_DIM>;
pub type MeasMatrix = SMatrix<f64, MEAS_DIM, MEAS_DIM>;
type ObsMatrix = SMatrix<f64, MEAS_DIM, STATE_DIM>;

/// Chi-square 0.95 quantile with 4 degrees of freedom, the usual gate for a
/// `(u, v, s, r)` innovation.
pub const CHI2_95_4DOF: f64 = 9.4877;

/// Noise and timing configuration of the motion model. All noise terms are
/// diagonal variances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionModel {
    /// Seconds per frame.
    pub dt: f64,
    pub q_diag: [f64; STATE_DIM],
    pub r_diag: [f64; MEAS_DIM],
    pub p0_diag: [f64; STATE_DIM],
}

impl MotionModel {
    /// Noise scaled to a typical target of `w × h` pixels: position noise is
    /// proportional to the box height, area noise to the area.
    pub fn for_box(w: f64, h: f64, dt: f64) -> Self {
        let area = w * h;
        let ratio = w / h;
        let pos = h / 20.0;
        // per-frame velocity jitter, expressed per second
        let vel = h / 160.0 / dt;
        let area_vel = 0.01 * area / dt;
        Self {
            dt,
            q_diag: [
                pos * pos,
                pos * pos,
                (0.05 * area).powi(2),
                (0.01 * ratio).powi(2),
                vel * vel,
                vel * vel,
                area_vel * area_vel,
            ],
            r_diag: [pos * pos, pos * pos, (0.1 * area).powi(2), (0.05 * ratio).powi(2)],
            p0_diag: [
                (2.0 * pos).powi(2),
                (2.0 * pos).powi(2),
                (0.2 * area).powi(2),
                (0.1 * ratio).powi(2),
                (10.0 * vel).powi(2),
                (10.0 * vel).powi(2),
                (10.0 * area_vel).powi(2),
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("motion.dt must be > 0, got {}", self.dt)));
        }
        let all = self.q_diag.iter().chain(&self.r_diag).chain(&self.p0_diag);
        if all.into_iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(Error::Config("motion noise variances must be finite and >= 0".into()));
        }
        Ok(())
    }

    /// Transition matrix: identity with `dt` coupling u, v, s to their rates.
    pub fn transition(&self) -> StateMatrix {
        let mut f = StateMatrix::identity();
        f[(0, 4)] = self.dt;
        f[(1, 5)] = self.dt;
        f[(2, 6)] = self.dt;
        f
    }

    pub fn process_noise(&self) -> StateMatrix {
        StateMatrix::from_diagonal(&StateVector::from(self.q_diag))
    }

    pub fn measurement_noise(&self) -> MeasMatrix {
        MeasMatrix::from_diagonal(&Measurement::from(self.r_diag))
    }
}

impl Default for MotionModel {
    /// A 96 × 64 px target at 30 fps.
    fn default() -> Self {
        Self::for_box(96.0, 64.0, 1.0 / 30.0)
    }
}

fn observation() -> ObsMatrix {
    ObsMatrix::identity()
}

/// Gaussian belief over the 7-dim box state.
#[derive(Debug, Clone, PartialEq)]
pub struct KalmanTrackState {
    pub mean: StateVector,
    pub cov: StateMatrix,
}

impl KalmanTrackState {
    /// Starts a track at a first detection with zero rates.
    pub fn initiate(b: &BBox, model: &MotionModel) -> Self {
        let st = bbox_to_state(b);
        let mean = StateVector::from([st.u, st.v, st.s, st.r, 0.0, 0.0, 0.0]);
        let cov = StateMatrix::from_diagonal(&StateVector::from(model.p0_diag));
        Self { mean, cov }
    }

    pub fn measurement_mean(&self) -> Measurement {
        Measurement::new(self.mean[0], self.mean[1], self.mean[2], self.mean[3])
    }

    /// Current mean as a box. Non-positive area or ratio (possible after long
    /// extrapolation) is floored to a tiny positive value.
    pub fn bbox(&self) -> BBox {
        let st = BoxState { u: self.mean[0], v: self.mean[1], s: self.mean[2].max(1e-6), r: self.mean[3].max(1e-6) };
        state_to_bbox(&st).expect("floored state is valid")
    }
}

/// Time update: `x' = F x`, `P' = F P Fᵀ + Q`.
pub fn predict(state: &KalmanTrackState, model: &MotionModel) -> KalmanTrackState {
    let f = model.transition();
    let mean = f * state.mean;
    let cov = f * state.cov * f.transpose() + model.process_noise();
    KalmanTrackState { mean, cov }
}

fn innovation_cov(state: &KalmanTrackState, model: &MotionModel) -> MeasMatrix {
    let h = observation();
    h * state.cov * h.transpose() + model.measurement_noise()
}

/// Measurement update with a `(u, v, s, r)` observation, using the Joseph
/// form for the covariance.
pub fn update(state: &KalmanTrackState, z: &Measurement, model: &MotionModel) -> Result<KalmanTrackState> {
    let h = observation();
    let s = innovation_cov(state, model);
    let s_inv = s.cholesky().ok_or(Error::SingularUpdate)?.inverse();
    let gain = state.cov * h.transpose() * s_inv;
    let innovation = z - h * state.mean;
    let mean = state.mean + gain * innovation;

    let i_kh = StateMatrix::identity() - gain * h;
    let cov = i_kh * state.cov * i_kh.transpose() + gain * model.measurement_noise() * gain.transpose();
    let cov = 0.5 * (cov + cov.transpose());
    Ok(KalmanTrackState { mean, cov })
}

/// Squared Mahalanobis distance of `z` under the predicted measurement
/// distribution `N(H x, H P Hᵀ + R)`.
pub fn gating_distance(state: &KalmanTrackState, z: &Measurement, model: &MotionModel) -> Result<f64> {
    let s = innovation_cov(state, model);
    let chol = s.cholesky().ok_or(Error::SingularUpdate)?;
    let d = z - state.measurement_mean();
    let y = chol.solve(&d);
    Ok(d.dot(&y).max(0.0))
}

/// Precomputed inverse innovation covariance for gating many measurements
/// against one track.
#[derive(Debug, Clone)]
pub struct Gate {
    mean: Measurement,
    s_inv: MeasMatrix,
}

impl Gate {
    pub fn new(state: &KalmanTrackState, model: &MotionModel) -> Result<Self> {
        let s = innovation_cov(state, model);
        let s_inv = s.cholesky().ok_or(Error::SingularUpdate)?.inverse();
        Ok(Self { mean: state.measurement_mean(), s_inv })
    }

    pub fn distance(&self, z: &Measurement) -> f64 {
        let d = z - self.mean;
        (d.transpose() * self.s_inv * d)[(0, 0)].max(0.0)
    }
}

/// Confidence-weighted blend of a prediction and a measurement:
/// `(1 - w) * pred + w * meas` with `w = conf_meas / (conf_pred + conf_meas)`.
pub fn scalar_fuse(pred: f64, conf_pred: f64, meas: f64, conf_meas: f64) -> Result<f64> {
    let total = conf_pred + conf_meas;
    if total <= 0.0 || conf_pred < 0.0 || conf_meas < 0.0 {
        return Err(Error::DegenerateWeights);
    }
    let w = conf_meas / total;
    Ok((1.0 - w) * pred + w * meas)
}
