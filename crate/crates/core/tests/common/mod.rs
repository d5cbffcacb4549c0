//! Independent reference computations shared by the integration tests.

#![allow(dead_code)]

use nalgebra::Vector2;
use rand::Rng;
use tactile_push::dynamics::ContactMode;
use tactile_push::scene::{builtin_shapes, closest_boundary_point, ObjectShape, PlanarPose};

pub type V = Vector2<f64>;

pub fn cross(a: &V, b: &V) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Counter-clockwise quarter turn.
pub fn quarter(v: &V) -> V {
    V::new(-v.y, v.x)
}

/// A pushed contact: shape, pose, contact point, inward normal, push
/// direction.
#[derive(Debug, Clone)]
pub struct ContactConfig {
    pub shape: ObjectShape,
    pub pose: PlanarPose,
    pub point: V,
    pub normal: V,
    pub push: V,
}

pub fn random_contact<R: Rng>(rng: &mut R) -> ContactConfig {
    let shapes = builtin_shapes();
    let base = &shapes[rng.random_range(0..shapes.len())];
    let shape = base.with_friction_scaled(
        rng.random_range(0.5..1.5),
        rng.random_range(0.5..1.5),
        rng.random_range(0.0..2.4),
    );
    let pose = PlanarPose::new(
        rng.random_range(-100.0..100.0),
        rng.random_range(-100.0..100.0),
        rng.random_range(-180.0..180.0),
    );
    let a: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let q = pose.position() + V::new(a.cos(), a.sin()) * rng.random_range(60.0..120.0);
    let bp = closest_boundary_point(&shape, &pose, &q);
    let normal = -bp.outward_normal;
    let tilt: f64 = rng.random_range(-80.0f64..80.0).to_radians();
    let (s, c) = tilt.sin_cos();
    let push = V::new(c * normal.x - s * normal.y, s * normal.x + c * normal.y);
    ContactConfig {
        shape,
        pose,
        point: bp.point,
        normal,
        push,
    }
}

pub fn cof_world(cfg: &ContactConfig) -> V {
    let c = cfg.shape.cof();
    let (s, co) = cfg.pose.alpha.to_radians().sin_cos();
    V::new(co * c.x - s * c.y + cfg.pose.y, s * c.x + co * c.y + cfg.pose.z)
}

/// Half the gradient of `H = (fy/F)^2 + (fz/F)^2 + (m/M)^2`: the twist
/// `(vy, vz, omega)` for a force applied at `point`.
pub fn twist_for_force(cfg: &ContactConfig, f: &V) -> [f64; 3] {
    let r = cfg.point - cof_world(cfg);
    let m = cross(&r, f);
    let (ff, mm) = (cfg.shape.f_max, cfg.shape.m_max);
    [f.x / (ff * ff), f.y / (ff * ff), m / (mm * mm)]
}

pub fn point_velocity(cfg: &ContactConfig, tw: &[f64; 3]) -> V {
    let r = cfg.point - cof_world(cfg);
    V::new(tw[0], tw[1]) + quarter(&r) * tw[2]
}

/// Twist scaled so that translation and rotation have comparable units.
pub fn scaled(cfg: &ContactConfig, tw: &[f64; 3]) -> [f64; 3] {
    let c = cfg.shape.m_max / cfg.shape.f_max;
    [tw[0], tw[1], tw[2] * c]
}

pub fn cosine(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

#[derive(Debug, Clone, Copy)]
pub struct OracleResult {
    pub tau: f64,
    pub mode: ContactMode,
    pub twist: [f64; 3],
    pub violation: f64,
    /// Smallest angle (rad) between the push and a motion-cone edge.
    pub edge_margin: f64,
}

/// Searches `n` forces `normal + tau mu t`, `tau` in `[-1, 1]`, for the one
/// whose contact-point velocity best satisfies slip complementarity with the
/// push: no tangential slip inside the cone, slip in the friction direction
/// on its edges.
pub fn friction_cone_search(cfg: &ContactConfig, n: usize) -> OracleResult {
    let t = quarter(&cfg.normal);
    let mu = cfg.shape.mu_contact;
    let u = cfg.push.normalize();
    let slip_t = |tau: f64| -> Option<(f64, [f64; 3])> {
        let f = cfg.normal + t * (tau * mu);
        let tw = twist_for_force(cfg, &f);
        let vp = point_velocity(cfg, &tw);
        let vn = vp.dot(&cfg.normal);
        if vn <= 0.0 {
            return None;
        }
        let k = u.dot(&cfg.normal) / vn;
        Some(((u - vp * k).dot(&t), tw))
    };
    let mut best = (f64::INFINITY, 0.0, ContactMode::Sticking, [0.0; 3]);
    for i in 0..n {
        let tau = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
        let Some((st, tw)) = slip_t(tau) else { continue };
        let (viol, mode) = if i == n - 1 {
            (st.abs().min((-st).max(0.0)), ContactMode::SlidingLeft)
        } else if i == 0 {
            (st.abs().min(st.max(0.0)), ContactMode::SlidingRight)
        } else {
            (st.abs(), ContactMode::Sticking)
        };
        if viol < best.0 {
            best = (viol, tau, mode, tw);
        }
    }
    let edge_dir = |tau: f64| point_velocity(cfg, &twist_for_force(cfg, &(cfg.normal + t * (tau * mu)))).normalize();
    let margin = |e: V| cross(&e, &u).atan2(e.dot(&u)).abs();
    OracleResult {
        tau: best.1,
        mode: best.2,
        twist: best.3,
        violation: best.0,
        edge_margin: margin(edge_dir(1.0)).min(margin(edge_dir(-1.0))),
    }
}

/// Rotation sense by majority vote of the moments about the CoF of the two
/// friction-cone edges and the push line. `None` when a vote is too close to
/// zero to count.
pub fn voting_sense(cfg: &ContactConfig) -> Option<f64> {
    let r = cfg.point - cof_world(cfg);
    let t = quarter(&cfg.normal);
    let mu = cfg.shape.mu_contact;
    let votes = [
        cross(&r, &(cfg.normal + t * mu).normalize()),
        cross(&r, &(cfg.normal - t * mu).normalize()),
        cross(&r, &cfg.push.normalize()),
    ];
    if votes.iter().any(|v| v.abs() < 1e-3) {
        return None;
    }
    let sum: f64 = votes.iter().map(|v| v.signum()).sum();
    Some(sum.signum())
}
