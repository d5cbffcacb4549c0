//! Limit-surface twists, motion cones and one simulated tap.
//!
//! `cargo run --example push_physics`

use tactile_push::dynamics::{
    limit_surface_twist, motion_cone, quasi_static_response, simulate_tap, ContactMode, ContactState, TapMotion, Wrench,
};
use tactile_push::scene::{shape_by_name, PlanarPose, PlanarSensor, PusherTip, Vec2, WorldState};

fn main() {
    let square = shape_by_name("blue_square").unwrap();
    let pose = PlanarPose::new(0.0, 30.0, 0.0);

    let t = limit_surface_twist(
        &Wrench {
            fy: 0.0,
            fz: 1.0,
            m: 10.0,
        },
        &square,
    )
    .unwrap();
    println!("twist for (0 N, 1 N, 10 N mm): {t:?}");

    for offset in [0.0, 10.0, 25.0] {
        let contact = ContactState {
            point: Vec2::new(offset, 0.0),
            normal: Vec2::new(0.0, 1.0),
            mode: ContactMode::Sticking,
            penetration: 0.0,
        };
        let (l, r) = motion_cone(&contact, &square, &pose).unwrap();
        let push = quasi_static_response(&square, &pose, &contact.point, &contact.normal, &Vec2::new(0.0, 1.0));
        println!(
            "contact at y={offset:4}: motion cone [{:.3?}, {:.3?}], straight push {:?}",
            r.as_slice(),
            l.as_slice(),
            push.mode
        );
    }

    let tip = PusherTip::default();
    let sensor = PlanarSensor {
        position: Vec2::new(15.0, -18.0),
        heading: 0.0,
    };
    let world = WorldState::new(pose, sensor.to_transform());
    let (next, samples) = simulate_tap(&world, &square, &tip, &world.pusher_pose, &TapMotion::default()).unwrap();
    println!(
        "{} substeps; object {:?} -> {:?}",
        samples.len(),
        world.object_pose,
        next.object_pose
    );
}
