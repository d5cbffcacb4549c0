//! The two control loops on hand-made sensor readings.
//!
//! `cargo run --example controller_step`

use tactile_push::controller::{
    alignment_pid_step, compose_command, control_step, pid6_step, servo_error, target_bearing, ControllerConfig,
    ControllerState,
};
use tactile_push::pose::{EulerPose, Transform};
use tactile_push::tactile::PosePrediction;

fn main() {
    let cfg = ControllerConfig::default();
    let reference = cfg.ref_pose.to_transform();

    let pred = EulerPose::new(0.0, 0.0, 3.0, 6.0, 0.0, 0.0).to_transform();
    let e = servo_error(&pred, &reference);
    let mut state = ControllerState::new();
    let u = pid6_step(&mut state, &e, &cfg);
    println!("servo error {e:?}\ncorrection  {u:?}");

    let pusher = Transform::identity();
    let target = EulerPose::new(0.0, 200.0, 400.0, 0.0, 0.0, 0.0).to_transform();
    let (theta, r) = target_bearing(&u.to_transform(), &pusher, &target);
    let v = alignment_pid_step(&mut state, theta, &cfg);
    println!("bearing {theta:.2} deg at {r:.1} mm -> lateral move {v:.2} mm");
    println!(
        "command {:?}",
        compose_command(&u.to_transform(), v, &pusher).to_euler()
    );

    // the same through the combined step
    let mut state = ControllerState::new();
    let out = control_step(
        &PosePrediction::contact(3.0, 6.0, 0.0),
        &pusher,
        &target,
        &mut state,
        &cfg,
    );
    println!(
        "control_step: {:?} command {:?}",
        out.status,
        out.command.map(|c| c.to_euler())
    );
}
