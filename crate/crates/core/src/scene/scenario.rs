//! Scenario files.
//!
//! A scenario is a JSON object whose field names carry their units. Every
//! field except `id` is optional:
//!
//! ```json
//! {
//!   "id": "exp1_baseline",
//!   "object": { "catalog": "blue_square" },
//!   "object_start_pose_mm_deg": [0.0, 48.0, 0.0],
//!   "pusher_start_pose_mm_deg": [0, 0, 0, 0, 0, 0],
//!   "target_pose_mm_deg": [0, 200, 400, 0, 0, 0],
//!   "controller": { "kp_diag": [0, 0, 0.9, 0.9, 0.9, 0] },
//!   "tip": { "radius_mm": 20.0, "compliance_mm": 7.0 },
//!   "noise": { "sigma_z_mm": 0.1, "sigma_alpha_deg": 0.39, "sigma_beta_deg": 0.34 },
//!   "noise_enabled": true,
//!   "rng_seed": 1,
//!   "max_taps": 300
//! }
//! ```
//!
//! `object` is either `{"catalog": name}` or `{"custom": shape}` with a shape
//! written as in the catalog export. Without `object_start_pose_mm_deg` the
//! object is placed on the sensor axis at the reference contact depth.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{place_in_front, shape_by_name, ObjectShape, PlanarPose, PusherTip};
use crate::controller::ControllerConfig;
use crate::error::{Error, Result};
use crate::pose::{EulerPose, Transform};
use crate::tactile::NoiseModel;

pub const DEFAULT_MAX_TAPS: usize = 300;
pub const DEFAULT_TARGET: [f64; 6] = [0.0, 200.0, 400.0, 0.0, 0.0, 0.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectSpec {
    Catalog(String),
    Custom(ObjectShape),
}

/// On-disk scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub id: String,
    #[serde(default = "default_object")]
    pub object: ObjectSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object_start_pose_mm_deg: Option<[f64; 3]>,
    #[serde(default)]
    pub pusher_start_pose_mm_deg: [f64; 6],
    #[serde(default = "default_target")]
    pub target_pose_mm_deg: [f64; 6],
    #[serde(default)]
    pub controller: ControllerConfig,
    #[serde(default)]
    pub tip: PusherTip,
    #[serde(default)]
    pub noise: NoiseModel,
    #[serde(default = "default_true")]
    pub noise_enabled: bool,
    #[serde(default)]
    pub rng_seed: u64,
    #[serde(default = "default_max_taps")]
    pub max_taps: usize,
}

fn default_object() -> ObjectSpec {
    ObjectSpec::Catalog("blue_square".into())
}

fn default_target() -> [f64; 6] {
    DEFAULT_TARGET
}

fn default_true() -> bool {
    true
}

fn default_max_taps() -> usize {
    DEFAULT_MAX_TAPS
}

/// A validated scenario with every default resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub object: ObjectShape,
    pub object_start_pose: PlanarPose,
    pub pusher_start_pose: EulerPose,
    pub target_pose: EulerPose,
    pub controller: ControllerConfig,
    pub tip: PusherTip,
    /// `enabled` mirrors the file's `noise_enabled`.
    pub noise: NoiseModel,
    pub rng_seed: u64,
    pub max_taps: usize,
}

impl Scenario {
    /// Default scenario around `shape`, object placed on the sensor axis.
    pub fn with_shape(id: impl Into<String>, shape: ObjectShape) -> Self {
        let file = ScenarioFile {
            id: id.into(),
            object: ObjectSpec::Custom(shape),
            ..ScenarioFile::new("")
        };
        file.resolve().expect("catalog defaults are valid")
    }

    pub fn pusher_start(&self) -> Transform {
        self.pusher_start_pose.to_transform()
    }

    pub fn target(&self) -> Transform {
        self.target_pose.to_transform()
    }

    pub fn noise_enabled(&self) -> bool {
        self.noise.enabled
    }

    pub fn validate(&self) -> Result<()> {
        self.object.validate()?;
        self.controller.validate()?;
        self.tip.validate()?;
        self.noise.validate()?;
        if self.max_taps == 0 {
            return Err(Error::invariant("max_taps", "must be positive"));
        }
        let finite = |field: &str, v: &[f64]| {
            if v.iter().all(|x| x.is_finite()) {
                Ok(())
            } else {
                Err(Error::invariant(field, "must be finite"))
            }
        };
        finite("pusher_start_pose_mm_deg", &self.pusher_start_pose.to_array())?;
        finite("target_pose_mm_deg", &self.target_pose.to_array())?;
        let p = &self.object_start_pose;
        finite("object_start_pose_mm_deg", &[p.y, p.z, p.alpha])?;
        let (s, t) = (self.pusher_start_pose, self.target_pose);
        if (s.y - t.y).hypot(s.z - t.z) < 1e-9 {
            return Err(Error::invariant(
                "target_pose_mm_deg",
                "coincides with the pusher start",
            ));
        }
        Ok(())
    }

    /// Round-trippable file form with the shape and start pose spelled out.
    pub fn to_file(&self) -> ScenarioFile {
        let p = self.object_start_pose;
        ScenarioFile {
            id: self.id.clone(),
            object: ObjectSpec::Custom(self.object.clone()),
            object_start_pose_mm_deg: Some([p.y, p.z, p.alpha]),
            pusher_start_pose_mm_deg: self.pusher_start_pose.to_array(),
            target_pose_mm_deg: self.target_pose.to_array(),
            controller: self.controller,
            tip: self.tip,
            noise: self.noise,
            noise_enabled: self.noise.enabled,
            rng_seed: self.rng_seed,
            max_taps: self.max_taps,
        }
    }
}

impl ScenarioFile {
    /// All-default file with the given id.
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            object: default_object(),
            object_start_pose_mm_deg: None,
            pusher_start_pose_mm_deg: [0.0; 6],
            target_pose_mm_deg: DEFAULT_TARGET,
            controller: ControllerConfig::default(),
            tip: PusherTip::default(),
            noise: NoiseModel::default(),
            noise_enabled: true,
            rng_seed: 0,
            max_taps: DEFAULT_MAX_TAPS,
        }
    }

    pub fn resolve(self) -> Result<Scenario> {
        let object = match self.object {
            ObjectSpec::Catalog(name) => shape_by_name(&name).ok_or_else(|| Error::Schema {
                field: "object.catalog".into(),
                message: format!("unknown catalog shape `{name}`"),
            })?,
            ObjectSpec::Custom(shape) => shape,
        };
        object.validate()?;
        self.tip.validate()?;
        let pusher_start_pose = EulerPose::from_array(self.pusher_start_pose_mm_deg);
        let object_start_pose = match self.object_start_pose_mm_deg {
            Some([y, z, a]) => PlanarPose::new(y, z, a),
            None => place_in_front(
                &object,
                &pusher_start_pose.to_transform(),
                &self.tip,
                0.0,
                self.controller.ref_pose.z,
            ),
        };
        let scenario = Scenario {
            id: self.id,
            object,
            object_start_pose,
            pusher_start_pose,
            target_pose: EulerPose::from_array(self.target_pose_mm_deg),
            controller: self.controller,
            tip: self.tip,
            noise: NoiseModel {
                enabled: self.noise_enabled,
                ..self.noise
            },
            rng_seed: self.rng_seed,
            max_taps: self.max_taps,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

/// Parses and validates scenario JSON. `origin` only labels errors.
pub fn parse_scenario(text: &str, origin: &Path) -> Result<Scenario> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: ScenarioFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_data() {
            Error::Schema {
                field,
                message: inner.to_string(),
            }
        } else {
            Error::Parse {
                path: origin.to_path_buf(),
                source: inner,
            }
        }
    })?;
    de.end().map_err(|source| Error::Parse {
        path: origin.to_path_buf(),
        source,
    })?;
    file.resolve()
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text, path)
}
