//! World geometry: the support plane, object shapes, the pusher tip and
//! scenario configuration.
//!
//! The support plane is the `(y, z)` plane of the work frame and its normal is
//! `+x`. An in-plane heading is the extrinsic `alpha` angle, so a planar pose
//! `(y, z, alpha)` is the six-vector `(0, y, z, alpha, 0, 0)`. A sensor with
//! heading `0` points its central axis along work `+z` and its own `+y` axis
//! along work `+y`.

mod scenario;
mod shape;

pub use scenario::{
    load_scenario, parse_scenario, ObjectSpec, Scenario, ScenarioFile, DEFAULT_MAX_TAPS, DEFAULT_TARGET,
};
pub use shape::{
    builtin_shapes, closest_boundary_point, shape_by_name, BoundaryPoint, Feature, ObjectShape, Outline, Vec2,
    DEFAULT_MU_CONTACT, IRREGULAR_NAMES, PRISM_NAMES,
};
pub(crate) use shape::{cross, direction_of, heading_of, perp, rotate};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pose::{normalize_deg, EulerPose, Transform};

/// Planar pose of an object frame in the work frame: mm, mm, degrees.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanarPose {
    pub y: f64,
    pub z: f64,
    pub alpha: f64,
}

impl PlanarPose {
    pub fn new(y: f64, z: f64, alpha: f64) -> Self {
        Self {
            y,
            z,
            alpha: normalize_deg(alpha),
        }
    }

    pub fn position(&self) -> Vec2 {
        Vec2::new(self.y, self.z)
    }

    pub fn to_world(&self, local: &Vec2) -> Vec2 {
        rotate(local, self.alpha) + self.position()
    }

    pub fn to_local(&self, world: &Vec2) -> Vec2 {
        rotate(&(world - self.position()), -self.alpha)
    }

    pub fn to_euler(&self) -> EulerPose {
        EulerPose::new(0.0, self.y, self.z, self.alpha, 0.0, 0.0)
    }
}

/// Hemispherical sensor tip seen from above: a disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PusherTip {
    /// Sensing radius: depth is measured against this surface.
    #[serde(rename = "radius_mm")]
    pub radius: f64,
    /// Skin compression at which the tip starts driving the object. Rigid
    /// contact happens on a disc of radius `radius - compliance`.
    #[serde(rename = "compliance_mm")]
    pub compliance: f64,
}

impl Default for PusherTip {
    fn default() -> Self {
        // 7 mm = 5 mm tap retraction + 2 mm reference depth, so a pushing tap
        // leaves the sensor resting at the reference depth.
        Self {
            radius: 20.0,
            compliance: 7.0,
        }
    }
}

impl PusherTip {
    pub fn contact_radius(&self) -> f64 {
        self.radius - self.compliance
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::invariant("tip.radius_mm", "must be positive"));
        }
        if !(self.compliance >= 0.0 && self.compliance < self.radius) {
            return Err(Error::invariant("tip.compliance_mm", "must lie in [0, radius)"));
        }
        Ok(())
    }
}

/// In-plane view of a sensor pose: tip centre and central-axis heading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarSensor {
    pub position: Vec2,
    /// Degrees; the axis direction is `(-sin h, cos h)` in `(y, z)`.
    pub heading: f64,
}

impl PlanarSensor {
    pub fn from_transform(t: &Transform) -> Self {
        let axis = Vec2::new(t.rotation[(1, 2)], t.rotation[(2, 2)]);
        let heading = if axis.norm() > 1e-12 { heading_of(&axis) } else { 0.0 };
        Self {
            position: Vec2::new(t.translation.y, t.translation.z),
            heading,
        }
    }

    pub fn axis(&self) -> Vec2 {
        direction_of(self.heading)
    }

    /// Sensor `+y` direction in the plane.
    pub fn lateral(&self) -> Vec2 {
        rotate(&Vec2::new(1.0, 0.0), self.heading)
    }

    pub fn to_transform(&self) -> Transform {
        EulerPose::new(0.0, self.position.x, self.position.y, self.heading, 0.0, 0.0).to_transform()
    }
}

/// Ground-truth simulation state for one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldState {
    pub object_pose: PlanarPose,
    pub pusher_pose: Transform,
    pub tap_index: usize,
}

impl WorldState {
    pub fn new(object_pose: PlanarPose, pusher_pose: Transform) -> Self {
        Self {
            object_pose: PlanarPose::new(object_pose.y, object_pose.z, object_pose.alpha),
            pusher_pose,
            tap_index: 0,
        }
    }

    pub fn sensor(&self) -> PlanarSensor {
        PlanarSensor::from_transform(&self.pusher_pose)
    }
}

/// Object heading that turns the object-frame direction `local_dir` onto the
/// work-frame direction `world_dir`.
fn heading_aligning(local_dir: &Vec2, world_dir: &Vec2) -> f64 {
    normalize_deg(heading_of(world_dir) - heading_of(local_dir))
}

/// Places the object with its CoF on the sensor axis and slides it along the
/// axis until the sensed contact depth equals `depth_mm`.
pub fn place_in_front(
    shape: &ObjectShape,
    sensor: &Transform,
    tip: &PusherTip,
    object_heading_deg: f64,
    depth_mm: f64,
) -> PlanarPose {
    let s = PlanarSensor::from_transform(sensor);
    let axis = s.axis();
    let cof_world_offset = rotate(&shape.cof(), object_heading_deg);
    let pose_at = |t: f64| {
        let p = s.position + axis * t - cof_world_offset;
        PlanarPose::new(p.x, p.y, object_heading_deg)
    };
    let want = tip.radius - depth_mm;
    let gap = |t: f64| closest_boundary_point(shape, &pose_at(t), &s.position).signed_distance - want;
    let mut lo = 0.0;
    let mut hi = shape.outline.max_radius_about(&shape.cof()) + tip.radius + 10.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    pose_at(0.5 * (lo + hi))
}

/// Places a polygon so that edge `edge` faces the sensor, tilted by
/// `angle_deg`, with the foot of the sensor on that edge `offset_mm` along the
/// edge from its midpoint, at sensed depth `depth_mm`.
pub fn place_against_edge(
    shape: &ObjectShape,
    sensor: &Transform,
    tip: &PusherTip,
    edge: usize,
    offset_mm: f64,
    angle_deg: f64,
    depth_mm: f64,
) -> Result<PlanarPose> {
    let v = shape
        .outline
        .vertices()
        .ok_or_else(|| Error::invariant("outline", "edge placement needs a polygon"))?;
    if edge >= v.len() {
        return Err(Error::invariant("edge", format!("shape has {} edges", v.len())));
    }
    let (a, b) = (v[edge], v[(edge + 1) % v.len()]);
    let dir_local = (b - a).normalize();
    let normal_local = Vec2::new(dir_local.y, -dir_local.x);
    let mid_local = (a + b) * 0.5;

    let s = PlanarSensor::from_transform(sensor);
    let normal_world = rotate(&(-s.axis()), angle_deg);
    let heading = heading_aligning(&normal_local, &normal_world);
    let dir_world = rotate(&dir_local, heading);
    let foot = s.position - normal_world * (tip.radius - depth_mm);
    let mid_world = foot - dir_world * offset_mm;
    let p = mid_world - rotate(&mid_local, heading);
    Ok(PlanarPose::new(p.x, p.y, heading))
}

/// Places the object so that `vertex` points straight at the sensor with the
/// CoF behind it on the sensor axis: the least stable way to start a push.
/// Circles have no corners and are placed at heading 0.
pub fn place_corner_first(
    shape: &ObjectShape,
    sensor: &Transform,
    tip: &PusherTip,
    vertex: usize,
    depth_mm: f64,
) -> PlanarPose {
    let s = PlanarSensor::from_transform(sensor);
    let heading = match shape.outline.vertices() {
        Some(v) => heading_aligning(&(v[vertex % v.len()] - shape.cof()), &(-s.axis())),
        None => 0.0,
    };
    place_in_front(shape, sensor, tip, heading, depth_mm)
}
