use proptest::prelude::*;
use tactile_push::controller::{compose_command, control_step, pid6_step, ControllerConfig, ControllerState, Status};
use tactile_push::harness::{run_trial, Outcome};
use tactile_push::scene::ScenarioFile;
use tactile_push::tactile::PosePrediction;
use tactile_push::{EulerPose, Transform};

fn pose_strategy() -> impl Strategy<Value = EulerPose> {
    (
        -300.0..300.0f64,
        -300.0..300.0f64,
        -300.0..300.0f64,
        -180.0..180.0f64,
        -60.0..60.0f64,
        -180.0..180.0f64,
    )
        .prop_map(|(x, y, z, a, b, g)| EulerPose::new(x, y, z, a, b, g))
}

fn prediction_strategy() -> impl Strategy<Value = PosePrediction> {
    prop_oneof![
        9 => (-1.0..6.0f64, -45.0..45.0f64, -20.0..20.0f64).prop_map(|(z, a, b)| PosePrediction::contact(z, a, b)),
        1 => Just(PosePrediction::no_contact()),
    ]
}

fn close(a: &Transform, b: &Transform, tol: f64) -> bool {
    (a.rotation - b.rotation).amax() < tol && (a.translation - b.translation).amax() < tol
}

proptest! {
    #[test]
    fn memories_and_outputs_stay_clipped(
        preds in prop::collection::vec(prediction_strategy(), 1..40),
        pusher in pose_strategy(),
        target in pose_strategy(),
    ) {
        let cfg = ControllerConfig::default();
        let mut state = ControllerState::new();
        let (p, t) = (pusher.to_transform(), target.to_transform());
        for pred in &preds {
            let out = control_step(pred, &p, &t, &mut state, &cfg);
            for (i, v) in state.integral6.iter().enumerate() {
                let lim = if i < 3 { 5.0 } else { 25.0 };
                prop_assert!(v.abs() <= lim);
            }
            prop_assert!(out.v.abs() <= 5.0);
            if !state.alignment_engaged {
                prop_assert_eq!(out.v, 0.0);
            }
            if out.status != Status::Continue {
                prop_assert!(out.command.is_none());
                break;
            }
        }
    }

    #[test]
    fn identity_correction_keeps_pose(pusher in pose_strategy()) {
        let p = pusher.to_transform();
        prop_assert!(close(&compose_command(&Transform::identity(), 0.0, &p), &p, 1e-9));
    }

    #[test]
    fn lateral_move_is_along_sensor_y(pusher in pose_strategy(), v in -5.0..5.0f64) {
        let p = pusher.to_transform();
        let c = compose_command(&Transform::identity(), v, &p);
        let d = c.translation - p.translation;
        let y_axis = p.rotation * nalgebra::Vector3::y();
        prop_assert!((d - y_axis * v).norm() < 1e-9);
    }

    #[test]
    fn zero_error_gives_zero_correction(steps in 1usize..20) {
        let cfg = ControllerConfig::default();
        let mut state = ControllerState::new();
        for _ in 0..steps {
            let u = pid6_step(&mut state, &EulerPose::ZERO, &cfg);
            prop_assert_eq!(u, EulerPose::ZERO);
        }
    }

    #[test]
    fn reference_contact_with_target_ahead_goes_straight(dist in 80.0..400.0f64) {
        let cfg = ControllerConfig::default();
        let mut state = ControllerState::new();
        let pred = PosePrediction::contact(2.0, 0.0, 0.0);
        let target = Transform::from_translation(0.0, 0.0, dist);
        let out = control_step(&pred, &Transform::identity(), &target, &mut state, &cfg);
        prop_assert_eq!(out.status, Status::Continue);
        prop_assert!(close(&out.command.unwrap(), &Transform::identity(), 1e-9));
    }
}

fn mirrored(sign: f64) -> ScenarioFile {
    let mut f = ScenarioFile::new(if sign > 0.0 { "right" } else { "left" });
    f.object_start_pose_mm_deg = Some([0.0, 40.0, sign * 12.0]);
    f.target_pose_mm_deg = [0.0, sign * 150.0, 380.0, 0.0, 0.0, 0.0];
    f.noise_enabled = false;
    f
}

// Penetration is only resolved to a tolerance, so mirrored runs agree to
// that order rather than to rounding.
const MIRROR_TOL: f64 = 0.05;

#[test]
fn mirrored_scenarios_mirror_trajectories() {
    let a = run_trial(&mirrored(1.0).resolve().unwrap());
    let b = run_trial(&mirrored(-1.0).resolve().unwrap());
    assert_eq!(a.outcome, Outcome::Reached);
    assert_eq!(b.outcome, a.outcome);
    assert_eq!(a.tap_total, b.tap_total);
    let mut worst: f64 = 0.0;
    for (ta, tb) in a.taps.iter().zip(&b.taps) {
        for d in [
            ta.pusher.y + tb.pusher.y,
            ta.pusher.z - tb.pusher.z,
            ta.pusher.alpha + tb.pusher.alpha,
            ta.object.y + tb.object.y,
            ta.object.z - tb.object.z,
            ta.object.alpha + tb.object.alpha,
            ta.v_mm + tb.v_mm,
        ] {
            worst = worst.max(d.abs());
        }
    }
    assert!(worst < MIRROR_TOL, "largest mirror mismatch {worst}");
    assert!((a.y_targ_mm.unwrap() - b.y_targ_mm.unwrap()).abs() < MIRROR_TOL);
}
