//! Quasi-static single-point pushing.
//!
//! Support friction is modelled by an ellipsoidal limit surface with force
//! semi-axis `f_max` and moment semi-axis `m_max`: a wrench `(fy, fz, m)` at
//! the centre of friction produces a twist along the surface normal,
//! `(vy, vz, omega) ∝ (fy / f_max², fz / f_max², m / m_max²)`.
//!
//! The pusher is a rigid disc of radius `tip.contact_radius()` with Coulomb
//! friction `mu_contact` at its single contact point. Each substep moves the
//! disc, and if it overlaps the object the object is advanced along the
//! sticking or sliding twist until the overlap is gone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, PhysicsFault, Result};
use crate::pose::Transform;
use crate::scene::{
    closest_boundary_point, cross, perp, rotate, ObjectShape, PlanarPose, PlanarSensor, PusherTip, Vec2, WorldState,
};

/// Largest pusher displacement resolved in one substep, mm.
pub const SUBSTEP_MM: f64 = 0.5;
/// Overlap left after resolution, mm.
pub const PENETRATION_TOLERANCE: f64 = 0.01;
pub const MAX_RESOLVE_ITERATIONS: usize = 50;

/// Force on the object at its centre of friction: N, N, N mm.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Wrench {
    pub fy: f64,
    pub fz: f64,
    pub m: f64,
}

/// Planar object twist at the centre of friction. Only the direction is
/// meaningful under quasi-static motion.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Twist2 {
    pub vy: f64,
    pub vz: f64,
    /// Radians per unit pseudo-time about `+x`.
    pub omega: f64,
}

impl Twist2 {
    pub fn linear(&self) -> Vec2 {
        Vec2::new(self.vy, self.vz)
    }

    /// Velocity of a material point at offset `r` from the CoF.
    pub fn point_velocity(&self, r: &Vec2) -> Vec2 {
        self.linear() + perp(r) * self.omega
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactMode {
    Separated,
    Sticking,
    /// Force on the friction-cone edge on the `+t` side, `t` being the inward
    /// normal turned by +90 degrees.
    SlidingLeft,
    SlidingRight,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactState {
    /// Work frame, mm.
    pub point: Vec2,
    /// Unit normal pointing into the object.
    pub normal: Vec2,
    pub mode: ContactMode,
    /// Disc-object overlap, mm; negative for a gap.
    pub penetration: f64,
}

/// Twist direction for a support wrench under the ellipsoidal limit surface.
///
/// The result is normalized so that `(vy, vz, omega * m_max / f_max)` has unit
/// length.
pub fn limit_surface_twist(wrench: &Wrench, shape: &ObjectShape) -> Result<Twist2> {
    if wrench.fy == 0.0 && wrench.fz == 0.0 && wrench.m == 0.0 {
        return Err(Error::ZeroWrench);
    }
    let f2 = shape.f_max * shape.f_max;
    let m2 = shape.m_max * shape.m_max;
    let (vy, vz, omega) = (wrench.fy / f2, wrench.fz / f2, wrench.m / m2);
    let length = shape.m_max / shape.f_max;
    let norm = (vy * vy + vz * vz + (omega * length).powi(2)).sqrt();
    Ok(Twist2 {
        vy: vy / norm,
        vz: vz / norm,
        omega: omega / norm,
    })
}

fn wrench_at(force: &Vec2, lever: &Vec2) -> Wrench {
    Wrench {
        fy: force.x,
        fz: force.y,
        m: cross(lever, force),
    }
}

/// Friction-cone edges `(left, right)` for an inward normal: `n ± mu t`.
fn friction_cone(normal: &Vec2, mu: f64) -> (Vec2, Vec2) {
    let t = perp(normal);
    (normal + t * mu, normal - t * mu)
}

fn cof_world(shape: &ObjectShape, object_pose: &PlanarPose) -> Vec2 {
    object_pose.to_world(&shape.cof())
}

/// Edges `(left, right)` of the motion cone: unit contact-point velocities
/// produced by forces on the two friction-cone edges.
///
/// With `mu_contact = 0` both edges equal the image of the pure normal force.
pub fn motion_cone(contact: &ContactState, shape: &ObjectShape, object_pose: &PlanarPose) -> Result<(Vec2, Vec2)> {
    if contact.mode == ContactMode::Separated {
        return Err(Error::invariant("contact.mode", "motion cone needs an active contact"));
    }
    let lever = contact.point - cof_world(shape, object_pose);
    let (fl, fr) = friction_cone(&contact.normal, shape.mu_contact);
    let edge = |f: &Vec2| -> Result<Vec2> {
        Ok(limit_surface_twist(&wrench_at(f, &lever), shape)?
            .point_velocity(&lever)
            .normalize())
    };
    Ok((edge(&fl)?, edge(&fr)?))
}

/// Object response to a contact-point push in direction `push_dir`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiStaticResponse {
    pub mode: ContactMode,
    /// Contact force direction on the object.
    pub force: Vec2,
    pub twist: Twist2,
    /// Velocity of the object's material contact point under `twist`.
    pub contact_velocity: Vec2,
}

/// Sticking if `push_dir` lies inside the motion cone, otherwise sliding with
/// the force pinned to the friction-cone edge on the side `push_dir` leaves.
///
/// `push_dir` must have a positive component along `normal`.
pub fn quasi_static_response(
    shape: &ObjectShape,
    object_pose: &PlanarPose,
    point: &Vec2,
    normal: &Vec2,
    push_dir: &Vec2,
) -> QuasiStaticResponse {
    let lever = point - cof_world(shape, object_pose);
    let s = perp(&lever);
    let c2 = (shape.m_max / shape.f_max).powi(2);
    // contact-point velocity per unit force: A f = f + s (s.f) / c^2
    let image = |f: &Vec2| f + s * (s.dot(f) / c2);
    let (fl, fr) = friction_cone(normal, shape.mu_contact);
    let (el, er) = (image(&fl), image(&fr));
    let u = push_dir.normalize();
    let past_left = cross(&u, &el) < 0.0;
    let past_right = cross(&er, &u) < 0.0;

    let (mode, force) = match (past_left, past_right) {
        (false, false) => {
            // A^-1 u by Sherman-Morrison
            let f = u - s * (s.dot(&u) / (c2 + s.norm_squared()));
            (ContactMode::Sticking, f)
        }
        (true, false) => (ContactMode::SlidingLeft, fl),
        (false, true) => (ContactMode::SlidingRight, fr),
        (true, true) => {
            if u.dot(&el.normalize()) >= u.dot(&er.normalize()) {
                (ContactMode::SlidingLeft, fl)
            } else {
                (ContactMode::SlidingRight, fr)
            }
        }
    };
    // force is never zero: it has a unit normal component or is A^-1 u
    let twist = limit_surface_twist(&wrench_at(&force, &lever), shape).unwrap_or_default();
    QuasiStaticResponse {
        mode,
        force,
        twist,
        contact_velocity: twist.point_velocity(&lever),
    }
}

/// Moves the object along `twist` scaled by `scale`, rotating about its CoF.
pub fn advance_object(object_pose: &PlanarPose, shape: &ObjectShape, twist: &Twist2, scale: f64) -> PlanarPose {
    let cof = cof_world(shape, object_pose);
    let alpha = object_pose.alpha + (twist.omega * scale).to_degrees();
    let new_cof = cof + twist.linear() * scale;
    let origin = new_cof - rotate(&shape.cof(), alpha);
    PlanarPose::new(origin.x, origin.y, alpha)
}

/// Moves the pusher disc from `pusher_centre` by `disp` and resolves any
/// resulting overlap by advancing the object along the quasi-static twist.
pub fn resolve_contact(
    object_pose: &PlanarPose,
    pusher_centre: &Vec2,
    shape: &ObjectShape,
    tip: &PusherTip,
    disp: &Vec2,
) -> std::result::Result<(PlanarPose, ContactState), PhysicsFault> {
    let centre = pusher_centre + disp;
    let radius = tip.contact_radius();
    let dir = if disp.norm() > 0.0 {
        disp.normalize()
    } else {
        Vec2::zeros()
    };
    let mut pose = *object_pose;
    let mut mode = ContactMode::Separated;
    for iteration in 0..=MAX_RESOLVE_ITERATIONS {
        let bp = closest_boundary_point(shape, &pose, &centre);
        let penetration = radius - bp.signed_distance;
        let normal = -bp.outward_normal;
        if penetration <= PENETRATION_TOLERANCE {
            return Ok((
                pose,
                ContactState {
                    point: bp.point,
                    normal,
                    mode,
                    penetration,
                },
            ));
        }
        if iteration == MAX_RESOLVE_ITERATIONS {
            return Err(PhysicsFault {
                iterations: iteration,
                residual_mm: penetration,
                pusher_y: centre.x,
                pusher_z: centre.y,
            });
        }
        // a disc sliding tangentially over a corner still pushes along the normal
        let push_dir = if dir.dot(&normal) > 1e-6 { dir } else { normal };
        let response = quasi_static_response(shape, &pose, &bp.point, &normal, &push_dir);
        let normal_speed = response.contact_velocity.dot(&normal);
        if normal_speed <= 0.0 {
            return Err(PhysicsFault {
                iterations: iteration,
                residual_mm: penetration,
                pusher_y: centre.x,
                pusher_z: centre.y,
            });
        }
        pose = advance_object(&pose, shape, &response.twist, penetration / normal_speed);
        mode = response.mode;
    }
    unreachable!("loop returns on its last iteration")
}

/// One physics substep on a world: the pusher moves by `disp` (at most
/// [`SUBSTEP_MM`]) keeping its heading.
pub fn resolve_substep(
    world: &WorldState,
    shape: &ObjectShape,
    tip: &PusherTip,
    disp: &Vec2,
) -> std::result::Result<(PlanarPose, ContactState), PhysicsFault> {
    debug_assert!(disp.norm() <= SUBSTEP_MM + 1e-9, "substep too long: {}", disp.norm());
    resolve_contact(&world.object_pose, &world.sensor().position, shape, tip, disp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TapPhase {
    Relocate,
    Forward,
    Back,
}

/// State after one physics substep of a tap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TapSample {
    pub phase: TapPhase,
    pub pusher_y: f64,
    pub pusher_z: f64,
    pub pusher_heading: f64,
    pub object: PlanarPose,
    pub mode: ContactMode,
    pub penetration: f64,
}

/// Tap actuation: forward stroke, back stroke, substep length (mm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TapMotion {
    pub forward: f64,
    pub back: f64,
    pub substep: f64,
}

impl Default for TapMotion {
    fn default() -> Self {
        Self {
            forward: 10.0,
            back: 5.0,
            substep: SUBSTEP_MM,
        }
    }
}

fn shortest_turn(from: f64, to: f64) -> f64 {
    crate::pose::normalize_deg(to - from)
}

/// Relocates the pusher to `commanded` in a straight in-plane line, then taps
/// `forward` mm along the commanded axis and withdraws `back` mm. Every leg is
/// substepped through the contact physics.
///
/// The commanded pose is projected onto the support plane: its out-of-plane
/// components are held by the surface.
pub fn simulate_tap(
    world: &WorldState,
    shape: &ObjectShape,
    tip: &PusherTip,
    commanded: &Transform,
    motion: &TapMotion,
) -> std::result::Result<(WorldState, Vec<TapSample>), PhysicsFault> {
    let start = world.sensor();
    let goal = PlanarSensor::from_transform(commanded);
    let mut object = world.object_pose;
    let mut centre = start.position;
    let mut trajectory = Vec::new();

    let mut leg = |phase: TapPhase,
                   delta: Vec2,
                   heading_from: f64,
                   turn: f64,
                   object: &mut PlanarPose,
                   centre: &mut Vec2|
     -> std::result::Result<(), PhysicsFault> {
        let length = delta.norm();
        let steps = (length / motion.substep).ceil().max(1.0) as usize;
        let step = delta / steps as f64;
        for k in 1..=steps {
            let (pose, contact) = resolve_contact(object, centre, shape, tip, &step)?;
            *object = pose;
            *centre += step;
            trajectory.push(TapSample {
                phase,
                pusher_y: centre.x,
                pusher_z: centre.y,
                pusher_heading: crate::pose::normalize_deg(heading_from + turn * k as f64 / steps as f64),
                object: pose,
                mode: contact.mode,
                penetration: contact.penetration,
            });
        }
        Ok(())
    };

    let turn = shortest_turn(start.heading, goal.heading);
    leg(
        TapPhase::Relocate,
        goal.position - start.position,
        start.heading,
        turn,
        &mut object,
        &mut centre,
    )?;
    let axis = goal.axis();
    leg(
        TapPhase::Forward,
        axis * motion.forward,
        goal.heading,
        0.0,
        &mut object,
        &mut centre,
    )?;
    leg(
        TapPhase::Back,
        -axis * motion.back,
        goal.heading,
        0.0,
        &mut object,
        &mut centre,
    )?;

    let next = WorldState {
        object_pose: object,
        pusher_pose: PlanarSensor {
            position: centre,
            heading: goal.heading,
        }
        .to_transform(),
        tap_index: world.tap_index + 1,
    };
    Ok((next, trajectory))
}
