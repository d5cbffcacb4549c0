//! Simulated tactile pose perception.
//!
//! A geometric oracle reads the contact depth and in-plane contact angle off
//! the ground-truth world, limits them to the range the perception model was
//! trained on, and optionally perturbs them with Gaussian noise whose sigmas
//! equal the model's reported mean absolute errors.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pose::{normalize_deg, EulerPose, Transform};
use crate::scene::{closest_boundary_point, heading_of, ObjectShape, PusherTip, WorldState};

/// Trained depth range, mm.
pub const DEPTH_RANGE: (f64, f64) = (1.0, 5.0);
/// Trained angle range for alpha and beta, degrees.
pub const ANGLE_RANGE: (f64, f64) = (-20.0, 20.0);

/// Predicted sensor pose relative to the contact frame.
///
/// Only `z`, `alpha` and `beta` are ever predicted; `x`, `y` and `gamma` are
/// identically zero and so are not stored.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PosePrediction {
    pub z_depth: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub in_contact: bool,
    pub clamped: bool,
}

impl PosePrediction {
    pub fn no_contact() -> Self {
        Self::default()
    }

    /// A contact prediction limited to the trained range.
    pub fn contact(z_depth: f64, alpha: f64, beta: f64) -> Self {
        let (z_depth, cz) = clamp_flag(z_depth, DEPTH_RANGE);
        let (alpha, ca) = clamp_flag(alpha, ANGLE_RANGE);
        let (beta, cb) = clamp_flag(beta, ANGLE_RANGE);
        Self {
            z_depth: Some(z_depth),
            alpha: Some(alpha),
            beta: Some(beta),
            in_contact: true,
            clamped: cz || ca || cb,
        }
    }

    /// `(0, 0, z, alpha, beta, 0)`, or `None` without contact.
    pub fn to_euler(&self) -> Option<EulerPose> {
        match (self.in_contact, self.z_depth, self.alpha, self.beta) {
            (true, Some(z), Some(a), Some(b)) => Some(EulerPose::new(0.0, 0.0, z, a, b, 0.0)),
            _ => None,
        }
    }
}

fn clamp_flag(v: f64, (lo, hi): (f64, f64)) -> (f64, bool) {
    let c = v.clamp(lo, hi);
    (c, c != v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseModel {
    #[serde(rename = "sigma_z_mm")]
    pub sigma_z: f64,
    #[serde(rename = "sigma_alpha_deg")]
    pub sigma_alpha: f64,
    #[serde(rename = "sigma_beta_deg")]
    pub sigma_beta: f64,
    pub enabled: bool,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            sigma_z: 0.1,
            sigma_alpha: 0.39,
            sigma_beta: 0.34,
            enabled: true,
        }
    }
}

impl NoiseModel {
    pub fn disabled() -> Self {
        Self {
            enabled: false,
            ..Self::default()
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self {
            sigma_z: self.sigma_z * factor,
            sigma_alpha: self.sigma_alpha * factor,
            sigma_beta: self.sigma_beta * factor,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("noise.sigma_z_mm", self.sigma_z),
            ("noise.sigma_alpha_deg", self.sigma_alpha),
            ("noise.sigma_beta_deg", self.sigma_beta),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invariant(field, "sigma must be non-negative"));
            }
        }
        Ok(())
    }
}

/// Reads the contact pose off the world.
///
/// Depth is the tip radius minus the distance from the tip centre to the
/// nearest object boundary point. Alpha is the heading of the sensor axis
/// minus the heading of the inward contact normal, so a sensor rotated by a
/// positive (counter-clockwise about `+x`) angle from the perpendicular reads
/// positive alpha. Depths in `(0, 1)` are reported as 1 mm with `clamped` set.
pub fn sense_contact(world: &WorldState, shape: &ObjectShape, tip: &PusherTip) -> PosePrediction {
    let sensor = world.sensor();
    let bp = closest_boundary_point(shape, &world.object_pose, &sensor.position);
    let depth = tip.radius - bp.signed_distance;
    if depth <= 0.0 {
        return PosePrediction::no_contact();
    }
    let inward = -bp.outward_normal;
    let alpha = normalize_deg(sensor.heading - heading_of(&inward));
    PosePrediction::contact(depth, alpha, 0.0)
}

/// Adds independent zero-mean Gaussian errors to `z`, `alpha` and `beta`, then
/// re-limits to the trained range.
pub fn apply_noise<R: Rng + ?Sized>(pred: &PosePrediction, noise: &NoiseModel, rng: &mut R) -> PosePrediction {
    let Some(e) = pred.to_euler() else {
        return *pred;
    };
    if !noise.enabled {
        return *pred;
    }
    let mut draw = |sigma: f64| -> f64 {
        if sigma > 0.0 {
            Normal::new(0.0, sigma).map(|n| n.sample(rng)).unwrap_or(0.0)
        } else {
            0.0
        }
    };
    let dz = draw(noise.sigma_z);
    let da = draw(noise.sigma_alpha);
    let db = draw(noise.sigma_beta);
    let mut out = PosePrediction::contact(e.z + dz, e.alpha + da, e.beta + db);
    out.clamped |= pred.clamped;
    out
}

/// Pose of the sensor in the contact frame implied by a prediction.
pub fn prediction_to_pose(pred: &PosePrediction) -> Result<Transform> {
    pred.to_euler().map(|e| e.to_transform()).ok_or(Error::NoContact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{shape_by_name, PlanarPose, PlanarSensor, Vec2};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn square_world(tip_centre: Vec2, heading: f64) -> (WorldState, ObjectShape) {
        let shape = shape_by_name("blue_square").unwrap();
        // near edge of the square sits on z = 0
        let object = PlanarPose::new(0.0, 30.0, 0.0);
        let sensor = PlanarSensor {
            position: tip_centre,
            heading,
        };
        (WorldState::new(object, sensor.to_transform()), shape)
    }

    #[test]
    fn reference_configuration_reads_two_millimetres() {
        let (w, s) = square_world(Vec2::new(0.0, -18.0), 0.0);
        let p = sense_contact(&w, &s, &PusherTip::default());
        assert!(p.in_contact && !p.clamped);
        assert_relative_eq!(p.z_depth.unwrap(), 2.0, epsilon = 1e-12);
        assert_relative_eq!(p.alpha.unwrap(), 0.0, epsilon = 1e-12);
        assert_eq!(p.beta, Some(0.0));
    }

    #[test]
    fn out_of_reach_is_no_contact() {
        let (w, s) = square_world(Vec2::new(0.0, -22.0), 0.0);
        let p = sense_contact(&w, &s, &PusherTip::default());
        assert!(!p.in_contact);
        assert_eq!(p.z_depth, None);
        assert_eq!(p.alpha, None);
        assert_eq!(p.to_euler(), None);
    }

    #[test]
    fn rotated_axis_reads_signed_alpha() {
        let (w, s) = square_world(Vec2::new(0.0, -18.0), 10.0);
        let p = sense_contact(&w, &s, &PusherTip::default());
        assert_relative_eq!(p.z_depth.unwrap(), 2.0, epsilon = 1e-12);
        assert_relative_eq!(p.alpha.unwrap(), 10.0, epsilon = 1e-12);
        let (w, s) = square_world(Vec2::new(0.0, -18.0), -10.0);
        assert_relative_eq!(
            sense_contact(&w, &s, &PusherTip::default()).alpha.unwrap(),
            -10.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn shallow_and_deep_contacts_are_clamped() {
        let (w, s) = square_world(Vec2::new(0.0, -19.5), 0.0);
        let p = sense_contact(&w, &s, &PusherTip::default());
        assert!(p.in_contact && p.clamped);
        assert_eq!(p.z_depth, Some(1.0));
        let (w, s) = square_world(Vec2::new(0.0, -10.0), 35.0);
        let p = sense_contact(&w, &s, &PusherTip::default());
        assert!(p.clamped);
        assert_eq!(p.z_depth, Some(5.0));
        assert_eq!(p.alpha, Some(20.0));
    }

    #[test]
    fn disabled_noise_is_identity() {
        let p = PosePrediction::contact(2.0, 3.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(apply_noise(&p, &NoiseModel::disabled(), &mut rng), p);
        let none = PosePrediction::no_contact();
        assert_eq!(apply_noise(&none, &NoiseModel::default(), &mut rng), none);
    }

    #[test]
    fn noise_is_deterministic_per_seed() {
        let p = PosePrediction::contact(2.0, 3.0, 0.0);
        let a = apply_noise(&p, &NoiseModel::default(), &mut ChaCha8Rng::seed_from_u64(42));
        let b = apply_noise(&p, &NoiseModel::default(), &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
        assert_ne!(a, p);
    }

    #[test]
    fn noise_statistics_match_gaussian_mae() {
        let noise = NoiseModel::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = PosePrediction::contact(3.0, 0.0, 0.0);
        let n = 100_000;
        let (mut sum, mut abs) = (0.0, 0.0);
        for _ in 0..n {
            let dz = apply_noise(&p, &noise, &mut rng).z_depth.unwrap() - 3.0;
            sum += dz;
            abs += dz.abs();
        }
        let mean = sum / n as f64;
        let mae = abs / n as f64;
        assert!(mean.abs() < 3.0 * noise.sigma_z / (n as f64).sqrt());
        let expected_mae = noise.sigma_z * (2.0 / std::f64::consts::PI).sqrt();
        assert!(
            (mae - expected_mae).abs() < 0.05 * expected_mae,
            "{mae} vs {expected_mae}"
        );
    }

    #[test]
    fn noisy_outputs_stay_in_range() {
        let noise = NoiseModel::default().scaled(20.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = PosePrediction::contact(4.9, 19.5, 0.0);
        for _ in 0..2000 {
            let q = apply_noise(&p, &noise, &mut rng);
            let e = q.to_euler().unwrap();
            assert!((1.0..=5.0).contains(&e.z));
            assert!((-20.0..=20.0).contains(&e.alpha));
            assert_eq!((e.x, e.y, e.gamma), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn prediction_pose_matrices() {
        let t = prediction_to_pose(&PosePrediction::contact(2.0, 0.0, 0.0)).unwrap();
        assert!(t.max_abs_diff(&Transform::from_translation(0.0, 0.0, 2.0)) < 1e-15);
        let t = prediction_to_pose(&PosePrediction::contact(2.0, 10.0, 0.0)).unwrap();
        let expected = Transform::from_translation(0.0, 0.0, 2.0).compose(&Transform::rot_x(10.0));
        assert!(t.max_abs_diff(&expected) < 1e-15);
        assert!(matches!(
            prediction_to_pose(&PosePrediction::no_contact()),
            Err(Error::NoContact)
        ));
    }
}
