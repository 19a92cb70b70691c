use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::path::SamplePath;
use crate::registry::{Named, Registry};
use crate::stochastics::RandomStream;

use super::config::SeriesConfig;
use super::rwrr::simulate_rwrr_baseline;
use super::series::LtfsmSimulator;
use super::tuning::tune;

/// Everything a path method may need to set itself up.
#[derive(Clone, Debug, PartialEq)]
pub struct MethodSettings {
    pub config: SeriesConfig,
    /// Walk length for the random-walk baseline.
    pub rwrr_steps: usize,
}

impl MethodSettings {
    pub const DEFAULT_RWRR_STEPS: usize = 10_000;

    pub fn new(config: SeriesConfig) -> Self {
        Self {
            config,
            rwrr_steps: Self::DEFAULT_RWRR_STEPS,
        }
    }
}

/// A way of producing LTFSM sample paths.
pub trait PathMethod: Named + Send + Sync {
    fn prepare(&self, settings: &MethodSettings) -> Result<Box<dyn PreparedMethod>>;
}

/// A path method bound to its settings, ready to sample.
pub trait PreparedMethod: Send + Sync {
    fn simulate(&self, stream: &RandomStream) -> Result<SamplePath>;

    /// Derived parameters worth reporting, as key/value pairs.
    fn describe(&self) -> Vec<(String, String)>;
}

struct PreparedSeries(LtfsmSimulator);

impl PreparedMethod for PreparedSeries {
    fn simulate(&self, stream: &RandomStream) -> Result<SamplePath> {
        self.0.simulate(stream)
    }

    fn describe(&self) -> Vec<(String, String)> {
        let p = self.0.params();
        vec![
            ("importance_density".into(), self.0.density().name().into()),
            ("P".into(), p.truncation.to_string()),
            ("N".into(), p.crossover.to_string()),
            ("k".into(), p.bandwidth.get().to_string()),
        ]
    }
}

/// Series with Laplace-distributed term locations.
pub struct Series;

impl Named for Series {
    fn name(&self) -> &'static str {
        "series"
    }
}

impl PathMethod for Series {
    fn prepare(&self, settings: &MethodSettings) -> Result<Box<dyn PreparedMethod>> {
        let params = tune(&settings.config)?;
        Ok(Box::new(PreparedSeries(LtfsmSimulator::laplace(&settings.config, &params)?)))
    }
}

/// Series with standard-normal term locations.
pub struct SeriesGaussian;

impl Named for SeriesGaussian {
    fn name(&self) -> &'static str {
        "series-gaussian"
    }
}

impl PathMethod for SeriesGaussian {
    fn prepare(&self, settings: &MethodSettings) -> Result<Box<dyn PreparedMethod>> {
        let params = tune(&settings.config)?;
        Ok(Box::new(PreparedSeries(LtfsmSimulator::gaussian(&settings.config, &params)?)))
    }
}

struct PreparedRwrr {
    alpha: f64,
    steps: usize,
    horizon: f64,
    grid_points: usize,
}

impl PreparedMethod for PreparedRwrr {
    fn simulate(&self, stream: &RandomStream) -> Result<SamplePath> {
        simulate_rwrr_baseline(self.alpha, self.steps, self.horizon, self.grid_points, stream)
    }

    fn describe(&self) -> Vec<(String, String)> {
        vec![("steps".into(), self.steps.to_string())]
    }
}

/// Random walk with random rewards; only defined for `H = 1/2`.
pub struct Rwrr;

impl Named for Rwrr {
    fn name(&self) -> &'static str {
        "rwrr"
    }
}

impl PathMethod for Rwrr {
    fn prepare(&self, settings: &MethodSettings) -> Result<Box<dyn PreparedMethod>> {
        let c = &settings.config;
        if c.hurst != 0.5 {
            return Err(Error::Config(format!(
                "the rwrr method approximates H = 0.5 only, got hurst = {}",
                c.hurst
            )));
        }
        if !(c.alpha > 0.0 && c.alpha < 2.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 2), got {}", c.alpha)));
        }
        if settings.rwrr_steps == 0 {
            return Err(Error::Config("steps must be at least 1".into()));
        }
        if !(c.horizon > 0.0) || c.grid_points == 0 {
            return Err(Error::Config("T must be positive and grid at least 1".into()));
        }
        Ok(Box::new(PreparedRwrr {
            alpha: c.alpha,
            steps: settings.rwrr_steps,
            horizon: c.horizon,
            grid_points: c.grid_points,
        }))
    }
}

pub fn path_methods() -> Registry<dyn PathMethod> {
    let mut reg: Registry<dyn PathMethod> = Registry::new("path method");
    reg.register(Box::new(Series))
        .register(Box::new(SeriesGaussian))
        .register(Box::new(Rwrr));
    reg
}

/// `paths` replicates; replicate `r` uses `RandomStream::new(seed, r)`.
/// Results are in replicate order regardless of scheduling.
pub fn monte_carlo(method: &dyn PreparedMethod, paths: usize, seed: u64) -> Result<Vec<SamplePath>> {
    (0..paths as u64)
        .into_par_iter()
        .map(|r| method.simulate(&RandomStream::new(seed, r)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings() -> MethodSettings {
        let mut c = SeriesConfig::new(1.0, 0.5);
        c.epsilon = 0.7;
        c.grid_points = 10;
        c.max_points = 32;
        let mut s = MethodSettings::new(c);
        s.rwrr_steps = 200;
        s
    }

    #[test]
    fn registry_lists_all_methods() {
        let reg = path_methods();
        assert_eq!(reg.names(), vec!["series", "series-gaussian", "rwrr"]);
        assert!(reg.get("exact").is_err());
    }

    #[test]
    fn every_method_runs_reproducibly() {
        let reg = path_methods();
        for name in reg.names() {
            let m = reg.get(name).unwrap().prepare(&settings()).unwrap();
            let a = monte_carlo(m.as_ref(), 4, 99).unwrap();
            let b = monte_carlo(m.as_ref(), 4, 99).unwrap();
            assert_eq!(a, b, "{name}");
            assert_eq!(a.len(), 4);
            assert!(a.iter().all(|p| p.len() == 11 && p.values[0] == 0.0));
            assert_ne!(a[0], a[1], "{name}");
        }
    }

    #[test]
    fn rwrr_needs_brownian_hurst() {
        let mut s = settings();
        s.config.hurst = 0.3;
        assert!(matches!(Rwrr.prepare(&s), Err(Error::Config(_))));
    }
}
