//! Dual-loop tactile pushing controller.
//!
//! The inner loop servos the sensed contact pose to a reference pose with a
//! six-channel PID over the SE(3) pose error. The outer loop measures the
//! bearing of the target in the corrected sensor frame and slides the sensor
//! sideways along the object perimeter until the sensor axis points at the
//! target. Both corrections are chained in the sensor frame and applied to the
//! current pusher pose to give the next absolute command.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pose::{normalize_deg, EulerPose, Transform};
use crate::tactile::PosePrediction;

/// Closed interval `[lo, hi]`.
pub type Range = [f64; 2];

fn clip(v: f64, r: Range) -> f64 {
    v.clamp(r[0], r[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControllerConfig {
    /// Reference sensor pose in the contact frame.
    #[serde(rename = "ref_pose_mm_deg")]
    pub ref_pose: EulerPose,
    /// Diagonals of the servo gain matrices, ordered `(x, y, z, alpha, beta, gamma)`.
    pub kp_diag: [f64; 6],
    pub ki_diag: [f64; 6],
    pub kd_diag: [f64; 6],
    #[serde(rename = "integral_clip_translation_mm")]
    pub integral_clip_translation: Range,
    #[serde(rename = "integral_clip_rotation_deg")]
    pub integral_clip_rotation: Range,
    /// Alignment gains (mm per degree).
    #[serde(rename = "alignment_kp")]
    pub kp: f64,
    #[serde(rename = "alignment_ki")]
    pub ki: f64,
    #[serde(rename = "alignment_kd")]
    pub kd: f64,
    #[serde(rename = "alignment_output_clip_mm")]
    pub alignment_output_clip: Range,
    #[serde(rename = "theta_ref_deg")]
    pub theta_ref: f64,
    #[serde(rename = "approach_zone_radius_mm")]
    pub approach_zone_radius: f64,
    #[serde(rename = "termination_radius_mm")]
    pub termination_radius: f64,
    #[serde(rename = "tap_forward_mm")]
    pub tap_forward: f64,
    #[serde(rename = "tap_back_mm")]
    pub tap_back: f64,
    /// Consecutive no-contact taps tolerated before giving up.
    pub reacquire_taps: usize,
    #[serde(rename = "reacquire_advance_mm")]
    pub reacquire_advance: f64,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        Self {
            ref_pose: EulerPose::new(0.0, 0.0, 2.0, 0.0, 0.0, 0.0),
            kp_diag: [0.0, 0.0, 0.9, 0.9, 0.9, 0.0],
            ki_diag: [0.0, 0.0, 0.1, 0.1, 0.1, 0.0],
            kd_diag: [0.0; 6],
            integral_clip_translation: [-5.0, 5.0],
            integral_clip_rotation: [-25.0, 25.0],
            kp: 0.2,
            ki: 0.0,
            kd: 0.5,
            alignment_output_clip: [-5.0, 5.0],
            theta_ref: 0.0,
            approach_zone_radius: 60.0,
            termination_radius: 20.0,
            tap_forward: 10.0,
            tap_back: 5.0,
            reacquire_taps: 5,
            reacquire_advance: 2.0,
        }
    }
}

impl ControllerConfig {
    // negated comparisons so NaN fails validation
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let finite = |field: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::invariant(format!("controller.{field}"), "must be finite"))
            }
        };
        for (i, v) in self.ref_pose.to_array().into_iter().enumerate() {
            finite(&format!("ref_pose_mm_deg[{i}]"), v)?;
        }
        for (name, d) in [
            ("kp_diag", self.kp_diag),
            ("ki_diag", self.ki_diag),
            ("kd_diag", self.kd_diag),
        ] {
            for v in d {
                finite(name, v)?;
            }
        }
        for (name, r) in [
            ("integral_clip_translation_mm", self.integral_clip_translation),
            ("integral_clip_rotation_deg", self.integral_clip_rotation),
            ("alignment_output_clip_mm", self.alignment_output_clip),
        ] {
            if !(r[0].is_finite() && r[1].is_finite() && r[0] <= r[1]) {
                return Err(Error::invariant(
                    format!("controller.{name}"),
                    "must be a nonempty range",
                ));
            }
        }
        for (name, v) in [
            ("alignment_kp", self.kp),
            ("alignment_ki", self.ki),
            ("alignment_kd", self.kd),
            ("theta_ref_deg", self.theta_ref),
        ] {
            finite(name, v)?;
        }
        if !(self.termination_radius > 0.0) {
            return Err(Error::invariant("controller.termination_radius_mm", "must be positive"));
        }
        if !(self.approach_zone_radius > self.termination_radius) {
            return Err(Error::invariant(
                "controller.approach_zone_radius_mm",
                "must exceed the termination radius",
            ));
        }
        if !(self.tap_forward > 0.0 && self.tap_back >= 0.0 && self.tap_back <= self.tap_forward) {
            return Err(Error::invariant(
                "controller.tap_back_mm",
                "need 0 <= back <= forward, forward > 0",
            ));
        }
        if !(self.reacquire_advance >= 0.0) {
            return Err(Error::invariant(
                "controller.reacquire_advance_mm",
                "must be non-negative",
            ));
        }
        Ok(())
    }

    fn channel_clip(&self, i: usize) -> Range {
        if i < 3 {
            self.integral_clip_translation
        } else {
            self.integral_clip_rotation
        }
    }
}

/// Per-trial controller memory.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ControllerState {
    pub integral6: [f64; 6],
    pub prev_error6: [f64; 6],
    pub integral_theta: f64,
    pub prev_epsilon: f64,
    pub alignment_engaged: bool,
    pub tap_count: usize,
    /// Consecutive taps without contact.
    pub misses: usize,
    /// Alpha of the last contact prediction.
    pub last_alpha: f64,
}

impl ControllerState {
    pub fn new() -> Self {
        Self {
            alignment_engaged: true,
            ..Self::default()
        }
    }
}

/// Sensor-frame pose error `pred^-1 * ref` as a six-vector.
pub fn servo_error(pred_pose: &Transform, ref_pose: &Transform) -> EulerPose {
    pred_pose.inverse().compose(ref_pose).to_euler()
}

/// One tick of the six-channel PID. The integral is clipped per channel
/// before it is used.
pub fn pid6_step(state: &mut ControllerState, error6: &EulerPose, cfg: &ControllerConfig) -> EulerPose {
    let e = error6.to_array();
    let mut u = [0.0; 6];
    for i in 0..6 {
        state.integral6[i] = clip(state.integral6[i] + e[i], cfg.channel_clip(i));
        let de = e[i] - state.prev_error6[i];
        u[i] = cfg.kp_diag[i] * e[i] + cfg.ki_diag[i] * state.integral6[i] + cfg.kd_diag[i] * de;
    }
    state.prev_error6 = e;
    EulerPose::from_array(u)
}

/// Bearing (degrees) and in-plane distance (mm) of the target seen from the
/// corrected sensor frame.
pub fn target_bearing(u_correction: &Transform, pusher_pose: &Transform, target_pose: &Transform) -> (f64, f64) {
    let p = u_correction
        .inverse()
        .compose(&pusher_pose.inverse())
        .compose(target_pose)
        .to_euler();
    (p.y.atan2(p.z).to_degrees(), p.y.hypot(p.z))
}

/// One tick of the alignment PID: lateral perimeter move in mm.
///
/// Angle errors and their differences are wrapped so a bearing crossing
/// +-180 degrees does not kick the derivative.
pub fn alignment_pid_step(state: &mut ControllerState, theta: f64, cfg: &ControllerConfig) -> f64 {
    if !state.alignment_engaged {
        return 0.0;
    }
    let eps = normalize_deg(cfg.theta_ref - theta);
    state.integral_theta += eps;
    let deps = normalize_deg(eps - state.prev_epsilon);
    state.prev_epsilon = eps;
    clip(
        cfg.kp * eps + cfg.ki * state.integral_theta + cfg.kd * deps,
        cfg.alignment_output_clip,
    )
}

/// `pusher_pose * u_servo * Trans(0, v, 0)`.
pub fn compose_command(u_servo: &Transform, v: f64, pusher_pose: &Transform) -> Transform {
    pusher_pose
        .compose(u_servo)
        .compose(&Transform::from_translation(0.0, v, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Continue,
    TargetReached,
    LostContact,
}

/// Everything one control tick produced, for logging.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlOutput {
    /// Next absolute pusher pose; `None` once the target is reached or contact
    /// is lost for good.
    pub command: Option<Transform>,
    pub status: Status,
    pub theta: f64,
    /// Target distance in the correction frame.
    pub r: f64,
    /// Distance from the tip centre to the target in the plane.
    pub r_tip: f64,
    pub v: f64,
    pub servo_error: EulerPose,
}

fn planar_distance(a: &Transform, b: &Transform) -> f64 {
    (a.translation.y - b.translation.y).hypot(a.translation.z - b.translation.z)
}

/// One pass of the control loop for the pose predicted at the current
/// pusher pose.
///
/// The target test comes first. A missing contact advances the sensor along
/// the last contact normal with both PID memories held, and after
/// `reacquire_taps` consecutive misses the trial is abandoned.
pub fn control_step(
    pred: &PosePrediction,
    pusher_pose: &Transform,
    target_pose: &Transform,
    state: &mut ControllerState,
    cfg: &ControllerConfig,
) -> ControlOutput {
    let r_tip = planar_distance(pusher_pose, target_pose);
    let (theta0, r0) = target_bearing(&Transform::identity(), pusher_pose, target_pose);
    let mut out = ControlOutput {
        command: None,
        status: Status::TargetReached,
        theta: theta0,
        r: r0,
        r_tip,
        v: 0.0,
        servo_error: EulerPose::ZERO,
    };
    if r_tip < cfg.termination_radius {
        return out;
    }
    state.tap_count += 1;

    let Some(pred_euler) = pred.to_euler() else {
        state.misses += 1;
        if state.misses >= cfg.reacquire_taps {
            out.status = Status::LostContact;
            return out;
        }
        let normal = Transform::rot_x(-state.last_alpha);
        let step = normal.transform_vector(&nalgebra::Vector3::new(0.0, 0.0, cfg.reacquire_advance));
        out.command = Some(pusher_pose.compose(&Transform::from_translation(step.x, step.y, step.z)));
        out.status = Status::Continue;
        return out;
    };
    state.misses = 0;
    state.last_alpha = pred_euler.alpha;

    let error = servo_error(&pred_euler.to_transform(), &cfg.ref_pose.to_transform());
    let u = pid6_step(state, &error, cfg).to_transform();
    let (theta, r) = target_bearing(&u, pusher_pose, target_pose);
    state.alignment_engaged = r > cfg.approach_zone_radius;
    let v = alignment_pid_step(state, theta, cfg);
    out.command = Some(compose_command(&u, v, pusher_pose));
    out.status = Status::Continue;
    out.theta = theta;
    out.r = r;
    out.v = v;
    out.servo_error = error;
    out
}
