//! Simulation of the local time fractional stable motion (LTFSM) by a
//! LePage shot-noise series whose terms integrate mollified local times of
//! independent fractional Brownian motions.
//!
//! * [`stochastics`]: seeded random streams, Poisson arrivals and a
//!   Chambers–Mallows–Stuck stable sampler used as an oracle.
//! * [`fbm`]: exact fBm generators (circulant embedding, Cholesky).
//! * [`localtime`]: kernel-smoothed occupation integrals.
//! * [`shotnoise`]: generic series assembly and moment bounds.
//! * [`ltfsm`]: tuning, the LTFSM simulators and a random-walk baseline.
//! * [`validation`]: empirical CFs, regression, KS distance.

// Negated comparisons are how NaN arguments get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fbm;
pub mod localtime;
pub mod ltfsm;
pub mod path;
pub mod registry;
pub mod shotnoise;
pub mod stochastics;
pub mod validation;

pub use error::{Error, Result};
pub use path::SamplePath;
pub use registry::{Named, Registry};
