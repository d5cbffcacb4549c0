//! Experiment grids.
//!
//! * Contact grid: blue square, edge offsets -30..30 mm in 10 mm steps times
//!   contact angles -20, 0, 20 degrees, sensor at the origin.
//! * Start-pose grid: five prisms times three sensor start poses, each object
//!   placed corner-first on the sensor axis.
//! * Irregular grid: irregular outlines at the second start pose with a
//!   uniformly random object orientation per trial.
//! * Robustness grid: the contact grid under every corner of a +-50% box on
//!   `(f_max, m_max, mu_contact)`, with scaled sensor noise.
//!
//! Each trial's seed comes from [`trial_seed`], so results do not depend on
//! how trials are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::Metrics;
use super::trial::{run_trial, TrialRecord};
use crate::error::{Error, Result};
use crate::pose::EulerPose;
use crate::scene::{
    place_against_edge, place_corner_first, place_in_front, shape_by_name, ObjectShape, Scenario, IRREGULAR_NAMES,
    PRISM_NAMES,
};
use crate::tactile::NoiseModel;

pub const EXP1_OFFSETS_MM: [f64; 7] = [-30.0, -20.0, -10.0, 0.0, 10.0, 20.0, 30.0];
pub const EXP1_ANGLES_DEG: [f64; 3] = [-20.0, 0.0, 20.0];
pub const TARGET: EulerPose = EulerPose {
    x: 0.0,
    y: 200.0,
    z: 400.0,
    alpha: 0.0,
    beta: 0.0,
    gamma: 0.0,
};
/// Sensor start poses of the start-pose grid.
pub const START_POSES: [EulerPose; 3] = [
    EulerPose {
        x: 0.0,
        y: 0.0,
        z: 0.0,
        alpha: 0.0,
        beta: 0.0,
        gamma: 0.0,
    },
    EulerPose {
        x: 0.0,
        y: 0.0,
        z: 200.0,
        alpha: -150.0,
        beta: 0.0,
        gamma: 0.0,
    },
    EulerPose {
        x: 0.0,
        y: 200.0,
        z: 150.0,
        alpha: 45.0,
        beta: 0.0,
        gamma: 0.0,
    },
];

/// splitmix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// `splitmix64(splitmix64(splitmix64(master) ^ cell) ^ trial)`.
pub fn trial_seed(master: u64, cell: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ cell) ^ trial)
}

/// Separates the orientation draws of the irregular grid from the noise
/// stream of the same trial.
const ORIENTATION_STREAM: u64 = 0x6f72_6965_6e74;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub trials_per_cell: usize,
    pub master_seed: u64,
    pub noise: NoiseModel,
    pub max_taps: usize,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            trials_per_cell: 3,
            master_seed: 0,
            noise: NoiseModel::default(),
            max_taps: crate::scene::DEFAULT_MAX_TAPS,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub name: String,
    pub metrics: Metrics,
    pub records: Vec<TrialRecord>,
}

/// A grid cell: an id and a scenario builder for one trial index.
struct Cell<'a> {
    id: String,
    build: Box<dyn Fn(u64) -> Result<Scenario> + Send + Sync + 'a>,
}

fn base_scenario(id: String, shape: ObjectShape, start: EulerPose, cfg: &ExperimentConfig) -> Scenario {
    let mut s = Scenario::with_shape(id, shape);
    s.pusher_start_pose = start;
    s.target_pose = TARGET;
    s.noise = cfg.noise;
    s.max_taps = cfg.max_taps;
    s
}

fn catalog(name: &str) -> Result<ObjectShape> {
    shape_by_name(name).ok_or_else(|| Error::Schema {
        field: "object.catalog".into(),
        message: format!("unknown catalog shape `{name}`"),
    })
}

fn contact_cells<'a>(shape: ObjectShape, tag: &str, cfg: &'a ExperimentConfig) -> Vec<Cell<'a>> {
    let mut cells = Vec::new();
    for &offset in &EXP1_OFFSETS_MM {
        for &angle in &EXP1_ANGLES_DEG {
            let shape = shape.clone();
            let id = format!("{tag}off{offset:+}/ang{angle:+}");
            let cell_id = id.clone();
            cells.push(Cell {
                id,
                build: Box::new(move |_| {
                    let mut s = base_scenario(cell_id.clone(), shape.clone(), START_POSES[0], cfg);
                    let depth = s.controller.ref_pose.z;
                    s.object_start_pose =
                        place_against_edge(&shape, &s.pusher_start(), &s.tip, 0, offset, angle, depth)?;
                    Ok(s)
                }),
            });
        }
    }
    cells
}

fn run_cells(name: &str, cells: Vec<Cell<'_>>, cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let mut jobs = Vec::with_capacity(cells.len() * cfg.trials_per_cell);
    for (ci, cell) in cells.iter().enumerate() {
        for t in 0..cfg.trials_per_cell {
            let mut s = (cell.build)(t as u64)?;
            s.id = format!("{name}/{}/t{t}", cell.id);
            s.rng_seed = trial_seed(cfg.master_seed, ci as u64, t as u64);
            s.validate()?;
            jobs.push(s);
        }
    }
    let run = || jobs.par_iter().map(run_trial).collect::<Vec<_>>();
    let records = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::ThreadPool(e.to_string()))?
            .install(run),
        None => run(),
    };
    Ok(ExperimentResult {
        name: name.to_string(),
        metrics: Metrics::from_records(&records),
        records,
    })
}

/// `trials` runs of one scenario. Trial seeds come from
/// `trial_seed(master_seed, 0, t)`.
pub fn run_repeated(scenario: &Scenario, cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let cell = Cell {
        id: scenario.id.clone(),
        build: Box::new(|_| Ok(scenario.clone())),
    };
    run_cells("run", vec![cell], cfg)
}

/// Contact-offset grid: 7 offsets x 3 angles x `trials_per_cell`.
pub fn run_experiment_1(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    run_cells("exp1", contact_cells(catalog("blue_square")?, "", cfg), cfg)
}

/// Start-pose grid over `shapes` (the five prisms by default).
pub fn run_experiment_2(shapes: &[ObjectShape], cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    if shapes.is_empty() {
        return Err(Error::invariant("shapes", "need at least one shape"));
    }
    let mut cells = Vec::new();
    for shape in shapes {
        for (si, &start) in START_POSES.iter().enumerate() {
            let shape = shape.clone();
            let id = format!("{}/start{}", shape.name, si + 1);
            cells.push(Cell {
                id,
                build: Box::new(move |_| {
                    let mut s = base_scenario(String::new(), shape.clone(), start, cfg);
                    let depth = s.controller.ref_pose.z;
                    s.object_start_pose = place_corner_first(&shape, &s.pusher_start(), &s.tip, 0, depth);
                    Ok(s)
                }),
            });
        }
    }
    run_cells("exp2", cells, cfg)
}

/// Random-orientation grid at the second start pose.
pub fn run_experiment_3(shapes: &[ObjectShape], cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    if shapes.is_empty() {
        return Err(Error::invariant("shapes", "need at least one shape"));
    }
    let mut cells = Vec::new();
    for (ci, shape) in shapes.iter().enumerate() {
        let shape = shape.clone();
        cells.push(Cell {
            id: shape.name.clone(),
            build: Box::new(move |t| {
                let mut s = base_scenario(String::new(), shape.clone(), START_POSES[1], cfg);
                let heading = orientation_draw(cfg.master_seed, ci as u64, t);
                let depth = s.controller.ref_pose.z;
                s.object_start_pose = place_in_front(&shape, &s.pusher_start(), &s.tip, heading, depth);
                Ok(s)
            }),
        });
    }
    run_cells("exp3", cells, cfg)
}

/// Object heading of the irregular grid for one trial, uniform in
/// `[-180, 180)` degrees.
pub fn orientation_draw(master: u64, cell: u64, trial: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(master ^ ORIENTATION_STREAM, cell, trial));
    rng.random_range(-180.0..180.0)
}

/// Contact grid under the eight corners of `(f_max, m_max, mu_contact)`
/// scaled by `1 -+ spread`, noise sigmas scaled by `noise_scale`.
pub fn run_robustness(cfg: &ExperimentConfig, spread: f64, noise_scale: f64) -> Result<ExperimentResult> {
    let base = catalog("blue_square")?;
    let cfg = ExperimentConfig {
        noise: cfg.noise.scaled(noise_scale),
        ..cfg.clone()
    };
    let lo_hi = [1.0 - spread, 1.0 + spread];
    let mut cells = Vec::new();
    for &f in &lo_hi {
        for &m in &lo_hi {
            for &mu in &lo_hi {
                let shape = base.with_friction_scaled(f, m, mu);
                let tag = format!("f{f}/m{m}/mu{mu}/");
                cells.extend(contact_cells(shape, &tag, &cfg));
            }
        }
    }
    run_cells("robustness", cells, &cfg)
}

/// The five prisms of the start-pose grid.
pub fn prism_shapes() -> Vec<ObjectShape> {
    PRISM_NAMES.iter().filter_map(|n| shape_by_name(n)).collect()
}

/// The irregular outlines of the random-orientation grid.
pub fn irregular_shapes() -> Vec<ObjectShape> {
    IRREGULAR_NAMES.iter().filter_map(|n| shape_by_name(n)).collect()
}
