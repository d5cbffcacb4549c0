//! Simulated contact-pose predictions with and without noise.
//!
//! `cargo run --example tactile_sensing`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tactile_push::scene::{shape_by_name, PlanarPose, PlanarSensor, PusherTip, Vec2, WorldState};
use tactile_push::tactile::{apply_noise, prediction_to_pose, sense_contact, NoiseModel};

fn main() {
    let square = shape_by_name("blue_square").unwrap();
    let tip = PusherTip::default();
    let object = PlanarPose::new(0.0, 30.0, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    for (z, heading) in [(-18.0, 0.0), (-17.0, 8.0), (-19.5, 0.0), (-25.0, 0.0)] {
        let sensor = PlanarSensor {
            position: Vec2::new(0.0, z),
            heading,
        };
        let world = WorldState::new(object, sensor.to_transform());
        let truth = sense_contact(&world, &square, &tip);
        let noisy = apply_noise(&truth, &NoiseModel::default(), &mut rng);
        println!("tip z={z:6} heading={heading:4}: truth {truth:?}");
        println!("{:32} noisy {noisy:?}", "");
        if let Ok(t) = prediction_to_pose(&noisy) {
            println!("{:32} pose {:?}", "", t.to_euler());
        }
    }
}
