//! Compose, invert and convert rigid poses.
//!
//! `cargo run --example pose_algebra`

use tactile_push::pose::{transform_to_euler, EulerPose, Transform, WORK_FRAME_IN_BASE};

fn main() {
    let sensor = EulerPose::new(0.0, 0.0, 200.0, -150.0, 0.0, 0.0);
    let target = EulerPose::new(0.0, 200.0, 400.0, 0.0, 0.0, 0.0);
    let (s, t) = (sensor.to_transform(), target.to_transform());

    // target seen from the sensor frame
    let rel = s.inverse().compose(&t).to_euler();
    println!("target in sensor frame: {rel:?}");

    // round trip through the matrix form
    let back = transform_to_euler(&sensor.to_transform());
    println!("e2t -> t2e round trip: {back:?}");

    // the work frame sits at beta = -90, the gimbal-lock branch
    let w = WORK_FRAME_IN_BASE.to_transform();
    println!("work frame in base: {:?}", w.to_euler());
    println!("sensor in base:     {:?}", (w * s).to_euler());

    let mut chain = Transform::identity();
    let step = EulerPose::new(1.0, 0.0, 0.5, 3.0, 0.0, 0.0).to_transform();
    for _ in 0..1000 {
        chain = chain * step;
    }
    println!(
        "1000 composed steps: {:?}, orthonormality error {:.2e}",
        chain.to_euler(),
        chain.orthonormality_error()
    );
}
