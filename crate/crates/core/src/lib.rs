//! Tactile-servoing push control on a simulated planar pushing world.
//!
//! A hemispherical tactile sensor pushes prism-shaped objects across a flat
//! surface toward a target. The controller sees only the contact pose the
//! sensor reports; the world underneath is a quasi-static pushing simulator.
//!
//! * [`pose`]: SE(3) transforms and extrinsic-xyz Euler poses.
//! * [`scene`]: shapes, contact geometry, placement and scenario files.
//! * [`dynamics`]: limit-surface pushing physics and the tap actuator.
//! * [`tactile`]: simulated contact-pose perception with noise.
//! * [`controller`]: the tactile-servoing and target-alignment loops.
//! * [`harness`]: trials, experiment grids, metrics, export and plots.

pub mod controller;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod pose;
pub mod scene;
pub mod tactile;

pub use error::{Error, PhysicsFault, Result};
pub use pose::{EulerPose, Transform};
