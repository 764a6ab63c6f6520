//! Constant-solid-angle surfaces spanned by closed polyline boundaries.
//!
//! The kernel is `no_std` (with `alloc`). Scene files, the command line and
//! parallel execution live in the `omegasurf` crate.

#![no_std]
// `!(x > 0.0)` is used on purpose to reject NaN; index loops mirror the matrix maths
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod boundary;
pub mod curvature;
pub mod error;
pub mod exec;
pub mod gradient;
pub mod math;
pub mod projection;
pub mod solid_angle;
pub mod spatial;
pub mod sum;
pub mod surface;
pub mod tensor;
pub mod vec3;

pub use boundary::{BoundaryLoop, BoundarySet, BoundingBox};
pub use curvature::CurvatureFrame;
pub use error::{Error, Result};
pub use exec::{Executor, Sequential};
pub use projection::{ProjectionResult, ProjectionStatus, SolverConfig};
pub use solid_angle::{FieldSample, PotentialConvention};
pub use tensor::Tensor3;
pub use vec3::{Point3, Vec3};
pub use surface::{SeedGrid, SurfaceMesh};
