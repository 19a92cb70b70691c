use crate::error::{Error, Result};
use crate::localtime::KernelBandwidth;

use super::config::SeriesConfig;

const MAX_COUNT: f64 = 1e12;

/// Floor that snaps values within a relative 1e-9 of an integer upward, so
/// exact powers such as `4^5` are not lost to rounding.
fn snap_floor(x: f64) -> f64 {
    (x + 1e-9 * x.abs().max(1.0)).floor()
}

fn snap_ceil(x: f64) -> f64 {
    (x - 1e-9 * x.abs().max(1.0)).ceil()
}

/// Per-term fBm grid sizes.
///
/// Head terms (`n ≤ N`) use `⌊Γ_n^{-1/(δ'α)} k^{(2+δ)/δ'}⌋`, tail terms
/// `⌊k^{(2+δ)/δ'} n^{-β/δ'}⌋`. Both are clamped to `[1, max_points]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshRule {
    pub crossover: usize,
    pub base: f64,
    pub gamma_exponent: f64,
    pub index_exponent: f64,
    pub max_points: usize,
}

impl MeshRule {
    fn clamp(&self, raw: f64) -> usize {
        let v = snap_floor(raw);
        if !(v >= 1.0) {
            1
        } else if v >= self.max_points as f64 {
            self.max_points
        } else {
            v as usize
        }
    }

    pub fn head(&self, gamma: f64) -> usize {
        self.clamp(gamma.powf(self.gamma_exponent) * self.base)
    }

    pub fn tail(&self, n: usize) -> usize {
        self.clamp(self.base * (n as f64).powf(self.index_exponent))
    }

    /// Grid size for term `n` with arrival `gamma`.
    pub fn points(&self, n: usize, gamma: f64) -> usize {
        if n <= self.crossover {
            self.head(gamma)
        } else {
            self.tail(n)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TuningParams {
    /// Truncation length `P`.
    pub truncation: usize,
    /// Head/tail crossover `N`.
    pub crossover: usize,
    pub bandwidth: KernelBandwidth,
    pub mesh: MeshRule,
}

/// `C_P ε^{-2ηα/(2-α)}` before rounding.
pub fn truncation_formula(config: &SeriesConfig) -> f64 {
    let a = config.alpha;
    config.c_p * config.epsilon.powf(-2.0 * config.eta * a / (2.0 - a))
}

/// `C_k ε^{-η/δ}` before rounding.
pub fn bandwidth_formula(config: &SeriesConfig) -> f64 {
    config.c_k * config.epsilon.powf(-config.eta / config.delta)
}

/// Smallest `N` with `(N + 1)α > q`.
pub fn crossover_index(alpha: f64, q: f64) -> usize {
    let mut n = (q / alpha).floor().max(1.0) as usize - 1;
    while (n + 1) as f64 * alpha <= q {
        n += 1;
    }
    n
}

fn count(name: &str, raw: f64) -> Result<usize> {
    let v = snap_ceil(raw);
    if !(v.is_finite() && v <= MAX_COUNT) {
        return Err(Error::Config(format!(
            "{name} = {raw:e} is too large to simulate; increase epsilon or lower the constant"
        )));
    }
    Ok(v.max(1.0) as usize)
}

pub fn tune(config: &SeriesConfig) -> Result<TuningParams> {
    config.validate()?;
    let crossover = crossover_index(config.alpha, config.q);
    let truncation = count("P", truncation_formula(config))?.max(crossover + 1);
    let k = count("k", bandwidth_formula(config))?;
    let bandwidth = KernelBandwidth::new(k as u64)?;
    let dp = config.delta_prime;
    let mesh = MeshRule {
        crossover,
        base: (k as f64).powf((2.0 + config.delta) / dp),
        gamma_exponent: -1.0 / (dp * config.alpha),
        index_exponent: -config.beta / dp,
        max_points: config.max_points,
    };
    Ok(TuningParams {
        truncation,
        crossover,
        bandwidth,
        mesh,
    })
}
