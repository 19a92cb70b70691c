//! The local time fractional stable motion
//! `Y(t) = Σ_n Γ_n^{-1/α} G_n φ(X_n)^{-1/α} l_n(X_n, t)` approximated by a
//! truncated series with mollified, discretised fBm local times, plus the
//! random-walk baseline for `H = 1/2`.

mod config;
mod methods;
mod rwrr;
mod series;
mod tuning;

pub use config::SeriesConfig;
pub use methods::{monte_carlo, path_methods, MethodSettings, PathMethod, PreparedMethod, Rwrr, Series, SeriesGaussian};
pub use rwrr::{simulate_rwrr_baseline, simulate_rwrr_with};
pub use series::{
    simulate_ltfsm, simulate_ltfsm_gaussian_density, ImportanceDensity, LaplaceHalf, LtfsmSimulator,
    StandardNormal, TermDraw,
};
pub use tuning::{bandwidth_formula, crossover_index, truncation_formula, tune, MeshRule, TuningParams};
