//! Proportional pan/tilt control.
//!
//! Angles are degrees; positive pan turns the view right and positive tilt
//! turns it down, so image content shifts by `-angle · pixels_per_degree`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GimbalConfig {
    /// deg/s per unit normalized horizontal offset.
    pub k_pan: f64,
    /// deg/s per unit normalized vertical offset.
    pub k_tilt: f64,
    /// deg/s.
    pub max_rate: f64,
    pub pan_limits: [f64; 2],
    pub tilt_limits: [f64; 2],
    /// Horizontal field of view, degrees; sets pixels per degree.
    pub hfov_deg: f64,
}

impl Default for GimbalConfig {
    fn default() -> Self {
        Self {
            k_pan: 54.0,
            k_tilt: 54.0,
            max_rate: 120.0,
            pan_limits: [-170.0, 170.0],
            tilt_limits: [-60.0, 60.0],
            hfov_deg: 30.0,
        }
    }
}

impl GimbalConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.max_rate > 0.0
            && self.hfov_deg > 0.0
            && self.k_pan >= 0.0
            && self.k_tilt >= 0.0
            && self.pan_limits[0] <= 0.0
            && self.pan_limits[1] >= 0.0
            && self.tilt_limits[0] <= 0.0
            && self.tilt_limits[1] >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config("pipeline.gimbal: gains, rate, fov or limits out of range".into()))
        }
    }

    pub fn pixels_per_degree(&self, frame_w: f64) -> f64 {
        frame_w / self.hfov_deg
    }

    pub fn initial_state(&self) -> GimbalState {
        GimbalState {
            pan: 0.0,
            tilt: 0.0,
            pan_limits: self.pan_limits,
            tilt_limits: self.tilt_limits,
            max_rate: self.max_rate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GimbalState {
    pub pan: f64,
    pub tilt: f64,
    pub pan_limits: [f64; 2],
    pub tilt_limits: [f64; 2],
    /// deg/s.
    pub max_rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GimbalCommand {
    pub pan_rate: f64,
    pub tilt_rate: f64,
}

/// One row of the gimbal trace: pose after applying the frame's command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GimbalSample {
    pub frame: usize,
    pub pan: f64,
    pub tilt: f64,
    pub pan_rate: f64,
    pub tilt_rate: f64,
}

/// Rate command proportional to the target's normalized offset from the
/// frame center, clamped to `±max_rate`.
pub fn gimbal_control(target: (f64, f64), frame: (f64, f64), gains: (f64, f64), max_rate: f64) -> GimbalCommand {
    let (hw, hh) = (0.5 * frame.0, 0.5 * frame.1);
    let pan = gains.0 * (target.0 - hw) / hw;
    let tilt = gains.1 * (target.1 - hh) / hh;
    GimbalCommand { pan_rate: pan.clamp(-max_rate, max_rate), tilt_rate: tilt.clamp(-max_rate, max_rate) }
}

/// Integrates a rate command over `dt` seconds, respecting rate and angle limits.
pub fn gimbal_step(state: &GimbalState, cmd: &GimbalCommand, dt: f64) -> GimbalState {
    let r = state.max_rate;
    let pan = state.pan + cmd.pan_rate.clamp(-r, r) * dt;
    let tilt = state.tilt + cmd.tilt_rate.clamp(-r, r) * dt;
    GimbalState {
        pan: pan.clamp(state.pan_limits[0], state.pan_limits[1]),
        tilt: tilt.clamp(state.tilt_limits[0], state.tilt_limits[1]),
        ..*state
    }
}
