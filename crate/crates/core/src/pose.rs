//! Rigid SE(3) transforms and their extrinsic-xyz Euler parameterization.
//!
//! Every pose at an API boundary is `(x, y, z, alpha, beta, gamma)` with
//! translations in millimetres and angles in degrees. The rotation is built as
//! `Rz(gamma) * Ry(beta) * Rx(alpha)`, i.e. rotations about the fixed x, then
//! y, then z axes.

use std::ops::Mul;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

/// Orthonormality drift that triggers re-projection after a composition.
const DRIFT_TOLERANCE: f64 = 1e-9;

/// Below this `cos(beta)` the extraction takes the gimbal-lock branch.
const GIMBAL_EPS: f64 = 1e-12;

/// Wraps an angle in degrees into `(-180, 180]`.
pub fn normalize_deg(angle: f64) -> f64 {
    let a = angle.rem_euclid(360.0);
    if a > 180.0 {
        a - 360.0
    } else {
        a
    }
}

/// A rigid transform `[R | p]`. `a.compose(&b)` is the matrix product `a * b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl Default for Transform {
    fn default() -> Self {
        Self::identity()
    }
}

impl Transform {
    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn from_parts(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Self {
        Self { rotation, translation }
    }

    pub fn from_translation(x: f64, y: f64, z: f64) -> Self {
        Self::from_parts(Matrix3::identity(), Vector3::new(x, y, z))
    }

    pub fn rot_x(deg: f64) -> Self {
        Self::from_parts(rot_x(deg.to_radians()), Vector3::zeros())
    }

    pub fn rot_y(deg: f64) -> Self {
        Self::from_parts(rot_y(deg.to_radians()), Vector3::zeros())
    }

    pub fn rot_z(deg: f64) -> Self {
        Self::from_parts(rot_z(deg.to_radians()), Vector3::zeros())
    }

    /// `self * other`: maps frame-C coordinates through B into A.
    pub fn compose(&self, other: &Transform) -> Transform {
        let out = Transform {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        };
        if out.orthonormality_error() > DRIFT_TOLERANCE {
            out.reorthonormalized()
        } else {
            out
        }
    }

    pub fn inverse(&self) -> Transform {
        let rt = self.rotation.transpose();
        Transform {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    pub fn transform_point(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.translation
    }

    pub fn transform_vector(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * v
    }

    /// Frobenius norm of `R^T R - I`.
    pub fn orthonormality_error(&self) -> f64 {
        (self.rotation.transpose() * self.rotation - Matrix3::identity()).norm()
    }

    /// Projects the rotation back onto SO(3) with Gram-Schmidt on its columns.
    pub fn reorthonormalized(&self) -> Transform {
        let c0 = self.rotation.column(0).normalize();
        let c1 = self.rotation.column(1);
        let c1 = (c1 - c0 * c0.dot(&c1)).normalize();
        let c2 = c0.cross(&c1);
        Transform {
            rotation: Matrix3::from_columns(&[c0, c1, c2]),
            translation: self.translation,
        }
    }

    /// Largest absolute elementwise difference of the 3x4 blocks.
    pub fn max_abs_diff(&self, other: &Transform) -> f64 {
        let r = (self.rotation - other.rotation).amax();
        let t = (self.translation - other.translation).amax();
        r.max(t)
    }

    pub fn to_euler(&self) -> EulerPose {
        transform_to_euler(self)
    }
}

impl Mul for Transform {
    type Output = Transform;

    fn mul(self, rhs: Transform) -> Transform {
        self.compose(&rhs)
    }
}

impl Mul<&Transform> for &Transform {
    type Output = Transform;

    fn mul(self, rhs: &Transform) -> Transform {
        self.compose(rhs)
    }
}

/// Six-vector pose parameterization: millimetres and degrees.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EulerPose {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerPose {
    pub const ZERO: EulerPose = EulerPose {
        x: 0.0,
        y: 0.0,
        z: 0.0,
        alpha: 0.0,
        beta: 0.0,
        gamma: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64, alpha: f64, beta: f64, gamma: f64) -> Self {
        Self {
            x,
            y,
            z,
            alpha,
            beta,
            gamma,
        }
    }

    pub fn from_array(v: [f64; 6]) -> Self {
        Self::new(v[0], v[1], v[2], v[3], v[4], v[5])
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.x, self.y, self.z, self.alpha, self.beta, self.gamma]
    }

    pub fn to_transform(self) -> Transform {
        euler_to_transform(&self)
    }

    /// Same pose with every angle wrapped into `(-180, 180]`.
    pub fn normalized(self) -> Self {
        Self {
            alpha: normalize_deg(self.alpha),
            beta: normalize_deg(self.beta),
            gamma: normalize_deg(self.gamma),
            ..self
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

fn rot_x(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

fn rot_y(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

fn rot_z(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// `e2t`: Euler six-vector to rigid transform.
pub fn euler_to_transform(e: &EulerPose) -> Transform {
    let r = rot_z(e.gamma.to_radians()) * rot_y(e.beta.to_radians()) * rot_x(e.alpha.to_radians());
    Transform::from_parts(r, Vector3::new(e.x, e.y, e.z))
}

/// `t2e`: rigid transform to Euler six-vector.
///
/// At gimbal lock (`|beta| = 90`) only `alpha - gamma` (or `alpha + gamma`) is
/// observable; the returned pose fixes `gamma = 0`.
pub fn transform_to_euler(t: &Transform) -> EulerPose {
    let r = &t.rotation;
    let cos_beta = (r[(0, 0)] * r[(0, 0)] + r[(1, 0)] * r[(1, 0)]).sqrt();
    let beta = (-r[(2, 0)]).atan2(cos_beta);
    let (alpha, gamma) = if cos_beta > GIMBAL_EPS {
        (r[(2, 1)].atan2(r[(2, 2)]), r[(1, 0)].atan2(r[(0, 0)]))
    } else {
        // gamma = 0 leaves R[1][1] = cos(alpha), R[1][2] = -sin(alpha)
        ((-r[(1, 2)]).atan2(r[(1, 1)]), 0.0)
    };
    EulerPose {
        x: t.translation.x,
        y: t.translation.y,
        z: t.translation.z,
        alpha: normalize_deg(alpha.to_degrees()),
        beta: normalize_deg(beta.to_degrees()),
        gamma: normalize_deg(gamma.to_degrees()),
    }
}

/// Pose of the work (task) frame in the robot base frame on the reference rig.
pub const WORK_FRAME_IN_BASE: EulerPose = EulerPose {
    x: -85.0,
    y: -330.0,
    z: 70.0,
    alpha: 180.0,
    beta: -90.0,
    gamma: 0.0,
};
