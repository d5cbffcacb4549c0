use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::controller::{control_step, ControllerState, Status};
use crate::dynamics::{simulate_tap, TapMotion, SUBSTEP_MM};
use crate::error::PhysicsFault;
use crate::pose::{EulerPose, Transform};
use crate::scene::{cross, ObjectShape, PlanarPose, PlanarSensor, Scenario, Vec2, WorldState};
use crate::tactile::{apply_noise, sense_contact, PosePrediction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Reached,
    LostContact,
    MaxTaps,
    PhysicsFault,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Reached => "reached",
            Outcome::LostContact => "lost_contact",
            Outcome::MaxTaps => "max_taps",
            Outcome::PhysicsFault => "physics_fault",
        }
    }
}

/// One control tick: the state seen and the decision taken.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TapLog {
    pub tap: usize,
    /// Pusher pose at which the contact was sensed.
    pub pusher: EulerPose,
    pub object: PlanarPose,
    pub prediction: PosePrediction,
    pub theta_deg: f64,
    pub r_mm: f64,
    pub r_tip_mm: f64,
    pub v_mm: f64,
    pub servo_error: EulerPose,
    /// Servo integral after this tick.
    pub integral6: [f64; 6],
    pub alignment_engaged: bool,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub scenario_id: String,
    pub seed: u64,
    pub shape: ObjectShape,
    pub target: EulerPose,
    pub taps: Vec<TapLog>,
    pub outcome: Outcome,
    pub y_targ_mm: Option<f64>,
    pub tap_total: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<PhysicsFault>,
    /// Excluded from equality-based determinism checks.
    pub wall_time_ms: f64,
}

impl TrialRecord {
    pub fn final_pusher(&self) -> Option<EulerPose> {
        self.taps.last().map(|t| t.pusher)
    }

    /// Record with the wall clock zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> TrialRecord {
        TrialRecord {
            wall_time_ms: 0.0,
            ..self.clone()
        }
    }
}

/// Perpendicular in-plane distance from the sensor's central-axis line to the
/// target point.
pub fn compute_y_targ(final_pusher_pose: &Transform, target_pose: &Transform) -> f64 {
    let sensor = PlanarSensor::from_transform(final_pusher_pose);
    let target = Vec2::new(target_pose.translation.y, target_pose.translation.z);
    cross(&sensor.axis(), &(target - sensor.position)).abs()
}

/// Runs sense, control and tap until the controller stops or `max_taps`
/// physical taps have been made. Noise draws come from `scenario.rng_seed`.
pub fn run_trial(scenario: &Scenario) -> TrialRecord {
    let started = Instant::now();
    let cfg = &scenario.controller;
    let target = scenario.target();
    let motion = TapMotion {
        forward: cfg.tap_forward,
        back: cfg.tap_back,
        substep: SUBSTEP_MM,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.rng_seed);
    let mut world = WorldState::new(scenario.object_start_pose, scenario.pusher_start());
    let mut state = ControllerState::new();
    let mut taps = Vec::new();
    let mut fault = None;

    let outcome = loop {
        let truth = sense_contact(&world, &scenario.object, &scenario.tip);
        let pred = apply_noise(&truth, &scenario.noise, &mut rng);
        let out = control_step(&pred, &world.pusher_pose, &target, &mut state, cfg);
        taps.push(TapLog {
            tap: world.tap_index,
            pusher: world.pusher_pose.to_euler(),
            object: world.object_pose,
            prediction: pred,
            theta_deg: out.theta,
            r_mm: out.r,
            r_tip_mm: out.r_tip,
            v_mm: out.v,
            servo_error: out.servo_error,
            integral6: state.integral6,
            alignment_engaged: state.alignment_engaged,
            status: out.status,
        });
        match (out.status, out.command) {
            (Status::TargetReached, _) => break Outcome::Reached,
            (Status::LostContact, _) => break Outcome::LostContact,
            _ if world.tap_index >= scenario.max_taps => break Outcome::MaxTaps,
            (Status::Continue, Some(command)) => {
                match simulate_tap(&world, &scenario.object, &scenario.tip, &command, &motion) {
                    Ok((next, _)) => world = next,
                    Err(f) => {
                        fault = Some(f);
                        break Outcome::PhysicsFault;
                    }
                }
            }
            (Status::Continue, None) => unreachable!("continue always carries a command"),
        }
    };

    // from the logged pose, so the record and its log agree exactly
    let y_targ_mm = taps
        .last()
        .filter(|_| outcome == Outcome::Reached)
        .map(|t| compute_y_targ(&t.pusher.to_transform(), &target));
    TrialRecord {
        scenario_id: scenario.id.clone(),
        seed: scenario.rng_seed,
        shape: scenario.object.clone(),
        target: scenario.target_pose,
        tap_total: taps.len(),
        taps,
        outcome,
        y_targ_mm,
        fault,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    }
}
