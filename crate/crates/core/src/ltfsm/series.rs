use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fbm::{generators, FbmGenerator, FbmPath};
use crate::localtime::discretized_occupation;
use crate::path::{uniform_grid, SamplePath};
use crate::registry::Named;
use crate::shotnoise::{SeriesSum, SeriesTerm};
use crate::stochastics::{poisson_arrivals, sample_gaussian, sample_laplace_half, Variates};

use super::config::SeriesConfig;
use super::tuning::TuningParams;

/// Sampling density `φ` of the term locations `X_n`. Each term carries the
/// compensating factor `φ(X_n)^{-1/α}`.
pub trait ImportanceDensity: Named + Send + Sync {
    fn sample(&self, stream: &mut dyn Variates) -> f64;

    /// `φ(x)^{-1/α}`.
    fn weight(&self, x: f64, alpha: f64) -> f64;
}

/// Laplace(0, 1/2), density `e^{-2|x|}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct LaplaceHalf;

impl Named for LaplaceHalf {
    fn name(&self) -> &'static str {
        "laplace"
    }
}

impl ImportanceDensity for LaplaceHalf {
    fn sample(&self, stream: &mut dyn Variates) -> f64 {
        sample_laplace_half(stream)
    }

    fn weight(&self, x: f64, alpha: f64) -> f64 {
        (2.0 * x.abs() / alpha).exp()
    }
}

/// Standard normal. The weight keeps the `(2π)^{1/(2α)}` factor of
/// `φ^{-1/α}` so the law matches the Laplace variant exactly.
#[derive(Clone, Copy, Debug, Default)]
pub struct StandardNormal;

impl Named for StandardNormal {
    fn name(&self) -> &'static str {
        "gaussian"
    }
}

impl ImportanceDensity for StandardNormal {
    fn sample(&self, stream: &mut dyn Variates) -> f64 {
        sample_gaussian(stream)
    }

    fn weight(&self, x: f64, alpha: f64) -> f64 {
        (2.0 * std::f64::consts::PI).powf(0.5 / alpha) * (x * x / (2.0 * alpha)).exp()
    }
}

/// Every random input of one series term.
#[derive(Clone, Debug)]
pub struct TermDraw {
    pub index: usize,
    pub gamma: f64,
    pub gaussian: f64,
    pub location: f64,
    pub importance_weight: f64,
    pub path: FbmPath,
}

/// Truncated series `Σ_{n ≤ P} Γ_n^{-1/α} G_n φ(X_n)^{-1/α} I_{n,k}(X_n, t)`.
///
/// Arrivals come from substream 0 of the supplied stream and term `n`
/// draws `G_n`, then `X_n`, then its fBm path from substream `n`, so any
/// subset of terms can be regenerated independently.
pub struct LtfsmSimulator {
    config: SeriesConfig,
    params: TuningParams,
    times: Vec<f64>,
    density: Box<dyn ImportanceDensity>,
    generator: Box<dyn FbmGenerator>,
}

impl LtfsmSimulator {
    pub fn new(
        config: &SeriesConfig,
        params: &TuningParams,
        density: Box<dyn ImportanceDensity>,
    ) -> Result<Self> {
        config.validate()?;
        let (p, n) = (params.truncation, params.crossover);
        if !((n + 1) as f64 * config.alpha > config.q) || p <= n {
            return Err(Error::Config(format!(
                "tuning needs (P+1)alpha > (N+1)alpha > q, got P = {p}, N = {n}, alpha = {}, q = {}",
                config.alpha, config.q
            )));
        }
        let generator = generators().take(&config.fbm_generator)?;
        Ok(Self {
            config: config.clone(),
            params: params.clone(),
            times: uniform_grid(config.horizon, config.grid_points)?,
            density,
            generator,
        })
    }

    pub fn laplace(config: &SeriesConfig, params: &TuningParams) -> Result<Self> {
        Self::new(config, params, Box::new(LaplaceHalf))
    }

    pub fn gaussian(config: &SeriesConfig, params: &TuningParams) -> Result<Self> {
        Self::new(config, params, Box::new(StandardNormal))
    }

    pub fn config(&self) -> &SeriesConfig {
        &self.config
    }

    pub fn params(&self) -> &TuningParams {
        &self.params
    }

    pub fn density(&self) -> &dyn ImportanceDensity {
        self.density.as_ref()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// `Γ_1, …, Γ_P`.
    pub fn arrivals<V: Variates>(&self, stream: &V) -> Result<Vec<f64>> {
        let mut s = stream.substream(0);
        Ok(poisson_arrivals(self.params.truncation, &mut s)?.into_vec())
    }

    pub fn draw_term<V: Variates>(&self, n: usize, gamma: f64, stream: &V) -> Result<TermDraw> {
        let mut s = stream.substream(n as u64);
        let gaussian = s.gaussian();
        let location = self.density.sample(&mut s);
        let importance_weight = self.density.weight(location, self.config.alpha);
        let points = self.params.mesh.points(n, gamma);
        let path = self
            .generator
            .generate(self.config.hurst, self.config.horizon, points, &mut s)?;
        Ok(TermDraw {
            index: n,
            gamma,
            gaussian,
            location,
            importance_weight,
            path,
        })
    }

    /// The term assembled from its draws; the curve value at `t = 0` is 0.
    pub fn assemble(&self, draw: &TermDraw) -> Result<SeriesTerm> {
        let mut curve =
            discretized_occupation(&draw.path, self.params.bandwidth, draw.location, &self.times)?
                .values;
        curve[0] = 0.0;
        Ok(SeriesTerm {
            gamma: draw.gamma,
            weight: draw.gaussian * draw.importance_weight,
            location: draw.location,
            inner_curve: curve,
        })
    }

    fn check_range(&self, range: &RangeInclusive<usize>) -> Result<()> {
        if *range.start() == 0 || *range.end() > self.params.truncation {
            return Err(Error::Domain(format!(
                "term range {range:?} outside 1..={}",
                self.params.truncation
            )));
        }
        Ok(())
    }

    /// Logged draws for the terms in `range`.
    pub fn draws<V: Variates + Sync>(&self, stream: &V, range: RangeInclusive<usize>) -> Result<Vec<TermDraw>> {
        self.check_range(&range)?;
        let gammas = self.arrivals(stream)?;
        range
            .into_par_iter()
            .map(|n| self.draw_term(n, gammas[n - 1], stream))
            .collect()
    }

    /// Series restricted to the terms in `range`, summed in index order.
    pub fn partial_sum<V: Variates + Sync>(&self, stream: &V, range: RangeInclusive<usize>) -> Result<Vec<f64>> {
        self.check_range(&range)?;
        let gammas = self.arrivals(stream)?;
        let terms: Vec<SeriesTerm> = range
            .into_par_iter()
            .map(|n| self.assemble(&self.draw_term(n, gammas[n - 1], stream)?))
            .collect::<Result<_>>()?;
        let mut sum = SeriesSum::new(self.config.alpha, self.times.len())?;
        for t in &terms {
            sum.add_term(t)?;
        }
        Ok(sum.into_values())
    }

    pub fn simulate<V: Variates + Sync>(&self, stream: &V) -> Result<SamplePath> {
        let values = self.partial_sum(stream, 1..=self.params.truncation)?;
        SamplePath::new(self.times.clone(), values)
    }
}

/// One LTFSM path with Laplace-distributed term locations.
pub fn simulate_ltfsm<V: Variates + Sync>(
    config: &SeriesConfig,
    params: &TuningParams,
    stream: &V,
) -> Result<SamplePath> {
    LtfsmSimulator::laplace(config, params)?.simulate(stream)
}

/// One LTFSM path with standard-normal term locations.
pub fn simulate_ltfsm_gaussian_density<V: Variates + Sync>(
    config: &SeriesConfig,
    params: &TuningParams,
    stream: &V,
) -> Result<SamplePath> {
    LtfsmSimulator::gaussian(config, params)?.simulate(stream)
}
