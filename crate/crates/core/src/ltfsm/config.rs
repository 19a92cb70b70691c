use crate::error::{Error, Result};

/// Model and tuning scalars for the LTFSM approximation.
///
/// The importance density used by the series (Laplace or standard normal)
/// has `∫ φ^{1-q/α}(x) e^{-ax²} dx < ∞` for every `q, a > 0`, so that
/// integrability condition needs no runtime check.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesConfig {
    pub alpha: f64,
    pub hurst: f64,
    pub horizon: f64,
    /// Number of output grid intervals; the path has `grid_points + 1` values.
    pub grid_points: usize,
    pub epsilon: f64,
    pub eta: f64,
    pub q: f64,
    pub p: f64,
    pub delta: f64,
    pub delta_prime: f64,
    pub beta: f64,
    pub c_p: f64,
    pub c_k: f64,
    /// Upper clamp on every per-term fBm grid size `m_{n,k}`.
    pub max_points: usize,
    /// Registered fBm generator name.
    pub fbm_generator: String,
}

impl SeriesConfig {
    pub const DEFAULT_HORIZON: f64 = 1.0;
    pub const DEFAULT_GRID: usize = 1000;
    pub const DEFAULT_EPSILON: f64 = 0.1;
    pub const DEFAULT_ETA: f64 = 1.1;
    pub const DEFAULT_Q: f64 = 2.5;
    pub const DEFAULT_P: f64 = 1.0;
    pub const DEFAULT_DELTA: f64 = 0.45;
    pub const DEFAULT_DELTA_PRIME: f64 = 0.25;
    pub const DEFAULT_BETA: f64 = 0.0;
    pub const DEFAULT_C_P: f64 = 1.0;
    pub const DEFAULT_C_K: f64 = 1.0;
    pub const DEFAULT_MAX_POINTS: usize = 1024;
    pub const DEFAULT_FBM: &'static str = "auto";

    /// Defaults for every tuning scalar; call [`validate`](Self::validate)
    /// before use.
    pub fn new(alpha: f64, hurst: f64) -> Self {
        Self {
            alpha,
            hurst,
            horizon: Self::DEFAULT_HORIZON,
            grid_points: Self::DEFAULT_GRID,
            epsilon: Self::DEFAULT_EPSILON,
            eta: Self::DEFAULT_ETA,
            q: Self::DEFAULT_Q,
            p: Self::DEFAULT_P,
            delta: Self::DEFAULT_DELTA,
            delta_prime: Self::DEFAULT_DELTA_PRIME,
            beta: Self::DEFAULT_BETA,
            c_p: Self::DEFAULT_C_P,
            c_k: Self::DEFAULT_C_K,
            max_points: Self::DEFAULT_MAX_POINTS,
            fbm_generator: Self::DEFAULT_FBM.to_string(),
        }
    }

    /// Checks every constraint; the message names the first one violated.
    ///
    /// `delta_prime < H` is enforced (the Hölder regularity of fBm). A
    /// looser `delta_prime < 1/H` also appears in the tuning description;
    /// it is implied by the stricter bound and is not used.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        let open = |name: &str, v: f64, lo: f64, hi: f64| -> Result<()> {
            if v > lo && v < hi {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must lie in ({lo}, {hi}), got {v}")))
            }
        };
        open("alpha", self.alpha, 0.0, 2.0)?;
        open("hurst", self.hurst, 0.0, 1.0)?;
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return fail(format!("T must be positive, got {}", self.horizon));
        }
        if self.grid_points == 0 {
            return fail("grid must be at least 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return fail(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.eta > 1.0 && self.eta.is_finite()) {
            return fail(format!("eta > 1 violated: eta = {}", self.eta));
        }
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return fail(format!("p >= 1 violated: p = {}", self.p));
        }
        let q_floor = self.p.max(2.0);
        if !(self.q > q_floor && self.q.is_finite()) {
            return fail(format!("q > max(p, 2) violated: q = {}, max(p, 2) = {q_floor}", self.q));
        }
        let delta_bound = 1.0 / (2.0 * self.hurst) - 0.5;
        if !(self.delta > 0.0) {
            return fail(format!("delta > 0 violated: delta = {}", self.delta));
        }
        if !(self.delta < delta_bound) {
            return fail(format!(
                "delta < 1/(2H) - 1/2 violated: delta = {}, 1/(2H) - 1/2 = {delta_bound}",
                self.delta
            ));
        }
        if !(self.delta_prime > 0.0) {
            return fail(format!("delta-prime > 0 violated: delta-prime = {}", self.delta_prime));
        }
        if !(self.delta_prime < self.hurst) {
            return fail(format!(
                "delta-prime < H violated: delta-prime = {}, H = {}",
                self.delta_prime, self.hurst
            ));
        }
        let beta_bound = 1.0 / self.alpha - 0.5;
        if !(self.beta < beta_bound) {
            return fail(format!(
                "beta < 1/alpha - 1/2 violated: beta = {}, 1/alpha - 1/2 = {beta_bound}",
                self.beta
            ));
        }
        if !(self.c_p > 0.0 && self.c_p.is_finite()) {
            return fail(format!("c-p must be positive, got {}", self.c_p));
        }
        if !(self.c_k > 0.0 && self.c_k.is_finite()) {
            return fail(format!("c-k must be positive, got {}", self.c_k));
        }
        if self.max_points == 0 {
            return fail("max-points must be at least 1".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn message(c: &SeriesConfig) -> String {
        match c.validate() {
            Err(Error::Config(m)) => m,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn defaults_valid_for_common_cases() {
        SeriesConfig::new(1.2, 0.3).validate().unwrap();
        SeriesConfig::new(1.0, 0.5).validate().unwrap();
        SeriesConfig::new(0.7, 0.4).validate().unwrap();
    }

    #[test]
    fn rough_hurst_with_default_delta_is_rejected() {
        let m = message(&SeriesConfig::new(1.9, 0.99));
        assert!(m.contains("delta < 1/(2H) - 1/2"), "{m}");
    }

    #[test]
    fn each_constraint_named() {
        let base = SeriesConfig::new(1.2, 0.3);
        let cases: Vec<(Box<dyn Fn(&mut SeriesConfig)>, &str)> = vec![
            (Box::new(|c| c.alpha = 2.0), "alpha"),
            (Box::new(|c| c.hurst = 1.0), "hurst"),
            (Box::new(|c| c.eta = 1.0), "eta > 1"),
            (Box::new(|c| c.q = 2.0), "q > max(p, 2)"),
            (Box::new(|c| { c.p = 3.0; c.q = 2.9 }), "q > max(p, 2)"),
            (Box::new(|c| c.p = 0.5), "p >= 1"),
            (Box::new(|c| c.delta_prime = 0.3), "delta-prime < H"),
            (Box::new(|c| c.beta = 0.34), "beta < 1/alpha - 1/2"),
            (Box::new(|c| c.epsilon = 0.0), "epsilon"),
            (Box::new(|c| c.horizon = -1.0), "T must be positive"),
            (Box::new(|c| c.grid_points = 0), "grid"),
            (Box::new(|c| c.c_k = 0.0), "c-k"),
            (Box::new(|c| c.max_points = 0), "max-points"),
        ];
        for (mutate, needle) in cases {
            let mut c = base.clone();
            mutate(&mut c);
            let m = message(&c);
            assert!(m.contains(needle), "expected '{needle}' in '{m}'");
        }
    }
}
