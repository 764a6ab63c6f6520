//! Scene files, output formats, a rayon executor, the acceptance suite and
//! the `omegasurf` command line on top of `omegasurf-core`.

pub mod cli;
pub mod formats;
pub mod parallel;
pub mod scene;
pub mod validate;

pub use omegasurf_core as core;
