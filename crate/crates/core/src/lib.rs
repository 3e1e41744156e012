//! Strain-based surface pressure estimation toolkit.
//!
//! Builds the linear-elastic forward model of a thin-walled shell
//! (stiffness `A`, strain observer `B`, pressure-to-force map `C`),
//! databases synthetic surface-pressure snapshots over flight conditions,
//! reduces them to POD bases and snapshot priors, and precomputes affine
//! inverse maps `q = T d + k` that estimate pressure quantities from
//! strain measurements in real time, with posterior uncertainty.

pub mod aero;
pub mod artifacts;
pub mod atmosphere;
pub mod container;
pub mod error;
pub mod estimator;
pub mod fem;
pub mod mesh;
pub mod noise;
pub mod pressure;
pub mod reduction;
pub mod sparse;

pub use error::{Error, Result};
pub use mesh::{build_box_mesh, build_shell_mesh, place_sensors, tag_boundaries};
pub use mesh::{GeometryParams, Mesh, SensorConfig, SensorKind, SensorSpec, SurfaceTag};
