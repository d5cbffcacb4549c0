//! Object outlines, support friction parameters and the closest-boundary-point
//! kernel used by both the contact physics and the tactile oracle.

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use super::PlanarPose;
use crate::error::{Error, Result};

/// A point or direction in the support plane. Component 0 is the work-frame
/// `y` coordinate, component 1 is the work-frame `z` coordinate.
pub type Vec2 = Vector2<f64>;

/// Support-surface friction coefficient used to derive `f_max`.
pub const SUPPORT_MU: f64 = 0.5;
/// m/s^2
pub const GRAVITY: f64 = 9.81;
/// `m_max = MOMENT_FACTOR * mean_support_radius * f_max`
pub const MOMENT_FACTOR: f64 = 0.6;

/// Planar footprint of an object, expressed in the object frame (mm).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outline {
    /// Counter-clockwise simple polygon.
    Polygon { vertices_mm: Vec<[f64; 2]> },
    /// Circle centred on the object-frame origin.
    Circle { radius_mm: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectShape {
    pub name: String,
    pub outline: Outline,
    /// Centre of friction in the object frame.
    #[serde(rename = "cof_offset_mm")]
    pub cof_offset: [f64; 2],
    /// Maximum support friction force, N.
    #[serde(rename = "f_max_n")]
    pub f_max: f64,
    /// Maximum support friction moment about the CoF, N mm.
    #[serde(rename = "m_max_nmm")]
    pub m_max: f64,
    /// Pusher-object Coulomb coefficient.
    pub mu_contact: f64,
}

/// Which boundary feature a closest point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Edge(usize),
    Vertex(usize),
    Arc,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    /// Closest boundary point, work frame.
    pub point: Vec2,
    /// Unit normal pointing out of the object, work frame.
    pub outward_normal: Vec2,
    pub feature: Feature,
    /// Distance from the query to `point`, negative when the query is inside.
    pub signed_distance: f64,
}

pub(crate) fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Rotates a plane vector by +90 degrees (the sense of a positive alpha).
pub(crate) fn perp(v: &Vec2) -> Vec2 {
    Vec2::new(-v.y, v.x)
}

pub(crate) fn rotate(v: &Vec2, deg: f64) -> Vec2 {
    let (s, c) = deg.to_radians().sin_cos();
    Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

/// Heading (degrees) of a direction, with `0` meaning the work +z axis and
/// positive angles turning towards -y.
pub(crate) fn heading_of(dir: &Vec2) -> f64 {
    (-dir.x).atan2(dir.y).to_degrees()
}

pub(crate) fn direction_of(heading_deg: f64) -> Vec2 {
    let (s, c) = heading_deg.to_radians().sin_cos();
    Vec2::new(-s, c)
}

fn polygon_signed_area(v: &[Vec2]) -> f64 {
    let n = v.len();
    (0..n).map(|i| cross(&v[i], &v[(i + 1) % n])).sum::<f64>() * 0.5
}

fn segments_intersect(a: &Vec2, b: &Vec2, c: &Vec2, d: &Vec2) -> bool {
    let d1 = cross(&(b - a), &(c - a));
    let d2 = cross(&(b - a), &(d - a));
    let d3 = cross(&(d - c), &(a - c));
    let d4 = cross(&(d - c), &(b - c));
    (d1 * d2 <= 0.0) && (d3 * d4 <= 0.0)
}

/// Point-in-polygon by crossing number.
fn polygon_contains(v: &[Vec2], p: &Vec2) -> bool {
    let n = v.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (v[i], v[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// `int sec^3 u du`
fn sec3_antiderivative(u: f64) -> f64 {
    let sec = 1.0 / u.cos();
    let tan = u.tan();
    0.5 * (sec * tan + (sec + tan).abs().ln())
}

/// Mean distance from the origin over the polygon's area, exact per edge via
/// the polar integral of each fan triangle.
fn polygon_mean_radius(v: &[Vec2]) -> f64 {
    let n = v.len();
    let mut integral = 0.0;
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        let orient = cross(&a, &b);
        if orient.abs() < 1e-12 {
            continue;
        }
        let e = b - a;
        let foot = a - e * (a.dot(&e) / e.norm_squared());
        let h = foot.norm();
        if h < 1e-12 {
            continue;
        }
        let ua = cross(&foot, &a).atan2(foot.dot(&a));
        let ub = cross(&foot, &b).atan2(foot.dot(&b));
        let part = h.powi(3) / 3.0 * (sec3_antiderivative(ub) - sec3_antiderivative(ua)).abs();
        integral += orient.signum() * part;
    }
    integral / polygon_signed_area(v)
}

fn regular_polygon(n: usize, radius: f64, phase_deg: f64) -> Vec<[f64; 2]> {
    (0..n)
        .map(|i| {
            let a = (phase_deg + 360.0 * i as f64 / n as f64).to_radians();
            [radius * a.cos(), radius * a.sin()]
        })
        .collect()
}

impl Outline {
    pub fn vertices(&self) -> Option<Vec<Vec2>> {
        match self {
            Outline::Polygon { vertices_mm } => Some(vertices_mm.iter().map(|v| Vec2::new(v[0], v[1])).collect()),
            Outline::Circle { .. } => None,
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Outline::Polygon { .. } => polygon_signed_area(&self.vertices().unwrap_or_default()),
            Outline::Circle { radius_mm } => std::f64::consts::PI * radius_mm * radius_mm,
        }
    }

    pub fn centroid(&self) -> Vec2 {
        match self {
            Outline::Circle { .. } => Vec2::zeros(),
            Outline::Polygon { .. } => {
                let v = self.vertices().unwrap_or_default();
                let n = v.len();
                let mut c = Vec2::zeros();
                for i in 0..n {
                    let (a, b) = (v[i], v[(i + 1) % n]);
                    c += (a + b) * cross(&a, &b);
                }
                c / (6.0 * polygon_signed_area(&v))
            }
        }
    }

    pub fn contains(&self, p: &Vec2) -> bool {
        match self {
            Outline::Circle { radius_mm } => p.norm() < *radius_mm,
            Outline::Polygon { .. } => polygon_contains(&self.vertices().unwrap_or_default(), p),
        }
    }

    /// Mean distance from `about` over the outline's area.
    pub fn mean_radius_about(&self, about: &Vec2) -> f64 {
        let shifted: Vec<Vec2> = match self {
            Outline::Polygon { .. } => self.vertices().unwrap_or_default(),
            Outline::Circle { radius_mm } => regular_polygon(512, *radius_mm, 0.0)
                .into_iter()
                .map(|v| Vec2::new(v[0], v[1]))
                .collect(),
        };
        let shifted: Vec<Vec2> = shifted.iter().map(|v| v - about).collect();
        polygon_mean_radius(&shifted)
    }

    /// Largest distance from `about` to any boundary point.
    pub fn max_radius_about(&self, about: &Vec2) -> f64 {
        match self {
            Outline::Circle { radius_mm } => radius_mm + about.norm(),
            Outline::Polygon { .. } => self
                .vertices()
                .unwrap_or_default()
                .iter()
                .map(|v| (v - about).norm())
                .fold(0.0, f64::max),
        }
    }

    /// Evenly spaced boundary samples in the object frame.
    pub fn sample_boundary(&self, count: usize) -> Vec<Vec2> {
        match self {
            Outline::Circle { radius_mm } => (0..count)
                .map(|i| {
                    let a = std::f64::consts::TAU * i as f64 / count as f64;
                    Vec2::new(radius_mm * a.cos(), radius_mm * a.sin())
                })
                .collect(),
            Outline::Polygon { .. } => {
                let v = self.vertices().unwrap_or_default();
                let n = v.len();
                let perimeter: f64 = (0..n).map(|i| (v[(i + 1) % n] - v[i]).norm()).sum();
                let step = perimeter / count as f64;
                let mut out = Vec::with_capacity(count);
                let mut edge = 0;
                let mut walked = 0.0;
                for k in 0..count {
                    let s = k as f64 * step;
                    loop {
                        let len = (v[(edge + 1) % n] - v[edge]).norm();
                        if s <= walked + len || edge == n - 1 {
                            let t = ((s - walked) / len).clamp(0.0, 1.0);
                            out.push(v[edge] + (v[(edge + 1) % n] - v[edge]) * t);
                            break;
                        }
                        walked += len;
                        edge += 1;
                    }
                }
                out
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Outline::Circle { radius_mm } => {
                if !(radius_mm.is_finite() && *radius_mm > 0.0) {
                    return Err(Error::invariant("outline.radius_mm", "radius must be positive"));
                }
            }
            Outline::Polygon { vertices_mm } => {
                if vertices_mm.len() < 3 {
                    return Err(Error::invariant("outline.vertices_mm", "need at least 3 vertices"));
                }
                if vertices_mm.iter().flatten().any(|c| !c.is_finite()) {
                    return Err(Error::invariant("outline.vertices_mm", "non-finite coordinate"));
                }
                let v = self.vertices().unwrap_or_default();
                if polygon_signed_area(&v) <= 0.0 {
                    return Err(Error::invariant(
                        "outline.vertices_mm",
                        "polygon must be counter-clockwise with positive area",
                    ));
                }
                let n = v.len();
                for i in 0..n {
                    for j in (i + 1)..n {
                        let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                        if adjacent {
                            continue;
                        }
                        if segments_intersect(&v[i], &v[(i + 1) % n], &v[j], &v[(j + 1) % n]) {
                            return Err(Error::invariant(
                                "outline.vertices_mm",
                                format!("edges {i} and {j} intersect"),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Closest boundary point to `p`, all in the object frame.
    fn closest_local(&self, p: &Vec2) -> BoundaryPoint {
        match self {
            Outline::Circle { radius_mm } => {
                let d = p.norm();
                let dir = if d > 1e-12 { p / d } else { Vec2::new(0.0, 1.0) };
                BoundaryPoint {
                    point: dir * *radius_mm,
                    outward_normal: dir,
                    feature: Feature::Arc,
                    signed_distance: d - radius_mm,
                }
            }
            Outline::Polygon { .. } => {
                let v = self.vertices().unwrap_or_default();
                let n = v.len();
                let mut best_d2 = f64::INFINITY;
                let mut best = (Vec2::zeros(), Feature::Vertex(0));
                for i in 0..n {
                    let a = v[i];
                    let b = v[(i + 1) % n];
                    let e = b - a;
                    let t = ((p - a).dot(&e) / e.norm_squared()).clamp(0.0, 1.0);
                    let q = a + e * t;
                    let d2 = (p - q).norm_squared();
                    if d2 < best_d2 {
                        best_d2 = d2;
                        let feature = if t <= 0.0 {
                            Feature::Vertex(i)
                        } else if t >= 1.0 {
                            Feature::Vertex((i + 1) % n)
                        } else {
                            Feature::Edge(i)
                        };
                        best = (q, feature);
                    }
                }
                let (point, feature) = best;
                let inside = polygon_contains(&v, p);
                let dist = best_d2.sqrt();
                let edge_normal = |i: usize| {
                    let e = v[(i + 1) % n] - v[i];
                    Vec2::new(e.y, -e.x).normalize()
                };
                let outward_normal = match feature {
                    Feature::Edge(i) => edge_normal(i),
                    Feature::Vertex(_) if dist > 1e-12 => {
                        if inside {
                            (point - p) / dist
                        } else {
                            (p - point) / dist
                        }
                    }
                    Feature::Vertex(i) => (edge_normal((i + n - 1) % n) + edge_normal(i)).normalize(),
                    Feature::Arc => unreachable!("polygons have no arcs"),
                };
                BoundaryPoint {
                    point,
                    outward_normal,
                    feature,
                    signed_distance: if inside { -dist } else { dist },
                }
            }
        }
    }
}

impl ObjectShape {
    /// Builds a shape with support friction derived from its mass:
    /// `f_max = mu_s m g` and `m_max = 0.6 * mean_radius * f_max`, with the CoF
    /// at the area centroid.
    pub fn from_mass(name: &str, outline: Outline, mass_kg: f64, mu_contact: f64) -> Self {
        let cof = outline.centroid();
        let f_max = SUPPORT_MU * mass_kg * GRAVITY;
        let m_max = MOMENT_FACTOR * outline.mean_radius_about(&cof) * f_max;
        Self {
            name: name.to_string(),
            outline,
            cof_offset: [cof.x, cof.y],
            f_max,
            m_max,
            mu_contact,
        }
    }

    pub fn cof(&self) -> Vec2 {
        Vec2::new(self.cof_offset[0], self.cof_offset[1])
    }

    pub fn is_convex(&self) -> bool {
        match self.outline.vertices() {
            None => true,
            Some(v) => {
                let n = v.len();
                (0..n).all(|i| cross(&(v[(i + 1) % n] - v[i]), &(v[(i + 2) % n] - v[(i + 1) % n])) >= -1e-12)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.outline.validate()?;
        if !(self.f_max.is_finite() && self.f_max > 0.0) {
            return Err(Error::invariant("f_max_n", "must be positive"));
        }
        if !(self.m_max.is_finite() && self.m_max > 0.0) {
            return Err(Error::invariant("m_max_nmm", "must be positive"));
        }
        if !(self.mu_contact.is_finite() && self.mu_contact >= 0.0) {
            return Err(Error::invariant("mu_contact", "must be non-negative"));
        }
        if !self.outline.contains(&self.cof()) {
            return Err(Error::invariant(
                "cof_offset_mm",
                "centre of friction lies outside the outline",
            ));
        }
        Ok(())
    }

    /// Same shape with support and contact friction scaled.
    pub fn with_friction_scaled(&self, f_max: f64, m_max: f64, mu_contact: f64) -> Self {
        Self {
            f_max: self.f_max * f_max,
            m_max: self.m_max * m_max,
            mu_contact: self.mu_contact * mu_contact,
            ..self.clone()
        }
    }

    /// Outline vertices (or circle samples) placed at `pose`, work frame.
    pub fn world_outline(&self, pose: &PlanarPose, circle_samples: usize) -> Vec<Vec2> {
        let local = match &self.outline {
            Outline::Polygon { .. } => self.outline.vertices().unwrap_or_default(),
            Outline::Circle { .. } => self.outline.sample_boundary(circle_samples),
        };
        local.iter().map(|p| pose.to_world(p)).collect()
    }
}

/// Globally nearest boundary point of `shape` placed at `object_pose` to the
/// work-plane point `p`.
///
/// Edge-interior points carry the edge normal; vertex points carry the
/// direction between the vertex and `p`.
pub fn closest_boundary_point(shape: &ObjectShape, object_pose: &PlanarPose, p: &Vec2) -> BoundaryPoint {
    let local = object_pose.to_local(p);
    let bp = shape.outline.closest_local(&local);
    BoundaryPoint {
        point: object_pose.to_world(&bp.point),
        outward_normal: rotate(&bp.outward_normal, object_pose.alpha),
        ..bp
    }
}

fn polygon(vertices: &[[f64; 2]]) -> Outline {
    Outline::Polygon {
        vertices_mm: vertices.to_vec(),
    }
}

fn rectangle(width: f64, height: f64) -> Outline {
    let (w, h) = (width / 2.0, height / 2.0);
    polygon(&[[-w, -h], [w, -h], [w, h], [-w, h]])
}

fn stadium(length: f64, width: f64, arc_segments: usize) -> Outline {
    let r = width / 2.0;
    let half = length / 2.0 - r;
    let mut v = Vec::new();
    for i in 0..=arc_segments {
        let a = (-90.0 + 180.0 * i as f64 / arc_segments as f64).to_radians();
        v.push([half + r * a.cos(), r * a.sin()]);
    }
    for i in 0..=arc_segments {
        let a = (90.0 + 180.0 * i as f64 / arc_segments as f64).to_radians();
        v.push([-half + r * a.cos(), r * a.sin()]);
    }
    polygon(&v)
}

fn ellipse(semi_y: f64, semi_z: f64, segments: usize) -> Outline {
    let v: Vec<[f64; 2]> = (0..segments)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / segments as f64;
            [semi_y * a.cos(), semi_z * a.sin()]
        })
        .collect();
    polygon(&v)
}

/// Disc of radius 35 mm with a 15 x 14 mm handle tab on the +y side.
fn mug_outline() -> Outline {
    let r: f64 = 35.0;
    let half_tab = 7.0;
    let tab_len = 15.0;
    let a0 = (half_tab / r).asin();
    let segments = 40;
    let mut v = vec![[r * a0.cos() + tab_len, -half_tab], [r * a0.cos() + tab_len, half_tab]];
    for i in 0..=segments {
        let a = a0 + (std::f64::consts::TAU - 2.0 * a0) * i as f64 / segments as f64;
        v.push([r * a.cos(), r * a.sin()]);
    }
    // the loop ends at the tab's lower junction
    polygon(&v)
}

/// Default pusher-object Coulomb coefficient.
pub const DEFAULT_MU_CONTACT: f64 = 0.5;

/// The built-in object catalog.
///
/// Prisms (used for the contact-offset and start-pose grids):
///
/// | name              | outline                         | mass   |
/// |-------------------|---------------------------------|--------|
/// | `blue_square`     | square, side 60 mm              | 0.20 kg |
/// | `red_square`      | square, side 40 mm              | 0.09 kg |
/// | `yellow_triangle` | equilateral triangle, side 70 mm | 0.10 kg |
/// | `circle`          | circle, radius 35 mm            | 0.17 kg |
/// | `rectangle`       | 80 x 50 mm                      | 0.22 kg |
///
/// Irregular outlines (random-orientation grid):
///
/// | name             | outline                                   | mass    |
/// |------------------|-------------------------------------------|---------|
/// | `mustard_bottle` | 32-gon ellipse, semi-axes 35 x 22 mm      | 0.30 kg |
/// | `spray_bottle`   | stadium 72 x 40 mm                         | 0.25 kg |
/// | `mug`            | disc r = 35 mm + 15 x 14 mm handle (non-convex) | 0.35 kg |
/// | `l_block`        | 70 mm L with 35 mm arms (non-convex)       | 0.15 kg |
/// | `rubiks_cube`    | square, side 57 mm                         | 0.10 kg |
///
/// The CoF sits at the area centroid, `mu_contact` is 0.5 for all entries.
pub fn builtin_shapes() -> Vec<ObjectShape> {
    let tri_side: f64 = 70.0;
    let tri_h = tri_side * 3f64.sqrt() / 2.0;
    let mu = DEFAULT_MU_CONTACT;
    vec![
        ObjectShape::from_mass("blue_square", rectangle(60.0, 60.0), 0.20, mu),
        ObjectShape::from_mass("red_square", rectangle(40.0, 40.0), 0.09, mu),
        ObjectShape::from_mass(
            "yellow_triangle",
            polygon(&[
                [-tri_side / 2.0, -tri_h / 3.0],
                [tri_side / 2.0, -tri_h / 3.0],
                [0.0, 2.0 * tri_h / 3.0],
            ]),
            0.10,
            mu,
        ),
        ObjectShape::from_mass("circle", Outline::Circle { radius_mm: 35.0 }, 0.17, mu),
        ObjectShape::from_mass("rectangle", rectangle(80.0, 50.0), 0.22, mu),
        ObjectShape::from_mass("mustard_bottle", ellipse(35.0, 22.0, 32), 0.30, mu),
        ObjectShape::from_mass("spray_bottle", stadium(72.0, 40.0, 8), 0.25, mu),
        ObjectShape::from_mass("mug", mug_outline(), 0.35, mu),
        ObjectShape::from_mass(
            "l_block",
            polygon(&[
                [0.0, 0.0],
                [70.0, 0.0],
                [70.0, 35.0],
                [35.0, 35.0],
                [35.0, 70.0],
                [0.0, 70.0],
            ]),
            0.15,
            mu,
        ),
        ObjectShape::from_mass("rubiks_cube", rectangle(57.0, 57.0), 0.10, mu),
    ]
}

pub fn shape_by_name(name: &str) -> Option<ObjectShape> {
    builtin_shapes().into_iter().find(|s| s.name == name)
}

/// Names of the five prisms used for the start-pose grid.
pub const PRISM_NAMES: [&str; 5] = ["blue_square", "red_square", "yellow_triangle", "circle", "rectangle"];

/// Names of the irregular outlines used for the random-orientation grid.
pub const IRREGULAR_NAMES: [&str; 5] = ["mustard_bottle", "spray_bottle", "mug", "l_block", "rubiks_cube"];
