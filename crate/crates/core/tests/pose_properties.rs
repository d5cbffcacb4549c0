use approx::assert_relative_eq;
use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;
use tactile_push::pose::{normalize_deg, EulerPose, Transform};

/// Rotation built from axis-angle factors, independent of the Euler code.
fn oracle_rotation(alpha: f64, beta: f64, gamma: f64) -> Matrix3<f64> {
    let rot = |axis: Vector3<f64>, deg: f64| {
        nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), deg.to_radians()).into_inner()
    };
    rot(Vector3::z(), gamma) * rot(Vector3::y(), beta) * rot(Vector3::x(), alpha)
}

fn angle_diff(a: f64, b: f64) -> f64 {
    normalize_deg(a - b).abs()
}

fn pose() -> impl Strategy<Value = EulerPose> {
    (
        -500.0..500.0f64,
        -500.0..500.0f64,
        -500.0..500.0f64,
        -180.0..180.0f64,
        -89.9..89.9f64,
        -180.0..180.0f64,
    )
        .prop_map(|(x, y, z, a, b, g)| EulerPose::new(x, y, z, a, b, g))
}

proptest! {
    #[test]
    fn matrix_matches_axis_angle_oracle(e in pose()) {
        let t = e.to_transform();
        let r = oracle_rotation(e.alpha, e.beta, e.gamma);
        prop_assert!((t.rotation - r).amax() < 1e-12);
        prop_assert_eq!(t.translation, Vector3::new(e.x, e.y, e.z));
    }

    #[test]
    fn euler_round_trip(e in pose()) {
        let back = e.to_transform().to_euler();
        prop_assert!(angle_diff(back.alpha, e.alpha) < 1e-6);
        prop_assert!(angle_diff(back.beta, e.beta) < 1e-6);
        prop_assert!(angle_diff(back.gamma, e.gamma) < 1e-6);
        prop_assert!((back.x - e.x).abs() < 1e-12);
    }

    #[test]
    fn inverse_composes_to_identity(e in pose()) {
        let t = e.to_transform();
        prop_assert!(t.compose(&t.inverse()).max_abs_diff(&Transform::identity()) < 1e-9);
        prop_assert!(t.inverse().compose(&t).max_abs_diff(&Transform::identity()) < 1e-9);
    }

    #[test]
    fn composition_is_associative(a in pose(), b in pose(), c in pose()) {
        let (a, b, c) = (a.to_transform(), b.to_transform(), c.to_transform());
        let left = a.compose(&b).compose(&c);
        let right = a.compose(&b.compose(&c));
        prop_assert!(left.max_abs_diff(&right) < 1e-9);
    }

    #[test]
    fn inverse_of_product_reverses(a in pose(), b in pose()) {
        let (a, b) = (a.to_transform(), b.to_transform());
        let lhs = a.compose(&b).inverse();
        let rhs = b.inverse().compose(&a.inverse());
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-9);
    }

    #[test]
    fn gimbal_lock_reproduces_matrix(a in -180.0..180.0f64, g in -180.0..180.0f64, up in any::<bool>()) {
        let beta = if up { 90.0 } else { -90.0 };
        let t = EulerPose::new(1.0, 2.0, 3.0, a, beta, g).to_transform();
        let e = t.to_euler();
        prop_assert_eq!(e.gamma, 0.0);
        prop_assert!(e.to_transform().max_abs_diff(&t) < 1e-9);
    }

    #[test]
    fn normalized_angles_stay_in_half_open_range(a in -1e4..1e4f64) {
        let n = normalize_deg(a);
        prop_assert!(n > -180.0 && n <= 180.0);
        prop_assert!(((a - n) / 360.0 - ((a - n) / 360.0).round()).abs() < 1e-9);
    }
}

#[test]
fn points_transform_like_the_oracle() {
    let e = EulerPose::new(10.0, -5.0, 2.0, 30.0, 45.0, -60.0);
    let p = Vector3::new(1.0, 2.0, 3.0);
    let expected = oracle_rotation(30.0, 45.0, -60.0) * p + Vector3::new(10.0, -5.0, 2.0);
    assert_relative_eq!(e.to_transform().transform_point(&p), expected, epsilon = 1e-12);
    let back = e.to_transform().inverse().transform_point(&expected);
    assert_relative_eq!(back, p, epsilon = 1e-12);
}
