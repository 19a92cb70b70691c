//! Truncated shot-noise series `Σ_n h(Γ_n, V_n)` with `h(r, v) = r^{-1/α} v`.
//!
//! Terms are accumulated in increasing-Γ order so that sums are bitwise
//! reproducible for a fixed seed. The [`bounds`] submodule evaluates the
//! moment bounds on the truncation and inner-approximation errors.

pub mod bounds;

use crate::error::{domain, Error, Result};
use crate::stochastics::Variates;

pub use bounds::{
    approximation_bound, approximation_bound_lp, bound_b_q, bound_h_nq, h_nq_settling_index,
    truncation_bound, truncation_bound_lp, BoundReport, BoundRequest,
};

/// One series term: arrival `Γ_n`, scalar weight, location `X_n` and the
/// inner curve evaluated on the output grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTerm {
    pub gamma: f64,
    pub weight: f64,
    pub location: f64,
    pub inner_curve: Vec<f64>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 2.0 {
        Ok(())
    } else {
        domain(format!("stable index must lie in (0, 2], got {alpha}"))
    }
}

/// `gamma^{-1/α} · inner`, pointwise.
pub fn h_map(gamma: f64, alpha: f64, inner: &[f64]) -> Result<Vec<f64>> {
    if !(gamma > 0.0) {
        return domain(format!("arrival time must be positive, got {gamma}"));
    }
    check_alpha(alpha)?;
    let scale = gamma.powf(-1.0 / alpha);
    Ok(inner.iter().map(|v| scale * v).collect())
}

/// Running sum of series terms on a fixed grid.
#[derive(Clone, Debug)]
pub struct SeriesSum {
    alpha: f64,
    values: Vec<f64>,
}

impl SeriesSum {
    pub fn new(alpha: f64, grid_len: usize) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            alpha,
            values: vec![0.0; grid_len],
        })
    }

    /// Adds `gamma^{-1/α} · weight · inner`.
    pub fn add(&mut self, gamma: f64, weight: f64, inner: &[f64]) -> Result<()> {
        if !(gamma > 0.0) {
            return domain(format!("arrival time must be positive, got {gamma}"));
        }
        if inner.len() != self.values.len() {
            return Err(Error::Shape(format!(
                "term curve has {} points, grid has {}",
                inner.len(),
                self.values.len()
            )));
        }
        if weight == 0.0 {
            return Ok(());
        }
        let coef = gamma.powf(-1.0 / self.alpha) * weight;
        for (acc, v) in self.values.iter_mut().zip(inner) {
            *acc += coef * v;
        }
        Ok(())
    }

    pub fn add_term(&mut self, term: &SeriesTerm) -> Result<()> {
        self.add(term.gamma, term.weight, &term.inner_curve)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// `Σ_n h(Γ_n, weight_n · inner_n)`, summed in increasing-Γ order.
pub fn sum_series(terms: &[SeriesTerm], alpha: f64) -> Result<Vec<f64>> {
    let first = terms
        .first()
        .ok_or_else(|| Error::Empty("sum_series needs at least one term".into()))?;
    let mut order: Vec<usize> = (0..terms.len()).collect();
    order.sort_by(|&a, &b| terms[a].gamma.total_cmp(&terms[b].gamma));
    let mut sum = SeriesSum::new(alpha, first.inner_curve.len())?;
    for i in order {
        sum.add_term(&terms[i])?;
    }
    Ok(sum.into_values())
}

/// Partial sums `S_n = Σ_{j ≤ n} Γ_j^{-1/α} ε_j`, `n = 1..=terms`, with
/// Rademacher signs `ε_j`. Each step draws one exponential then one sign.
pub fn lepage_partial_sums<V: Variates + ?Sized>(
    alpha: f64,
    terms: usize,
    stream: &mut V,
) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return domain(format!("series stable index must lie in (0, 2), got {alpha}"));
    }
    if terms == 0 {
        return Err(Error::Empty("a LePage sum needs at least one term".into()));
    }
    let inv = -1.0 / alpha;
    let mut gamma = 0.0;
    let mut acc = 0.0;
    Ok((0..terms)
        .map(|_| {
            gamma += stream.exponential();
            acc += gamma.powf(inv) * stream.rademacher();
            acc
        })
        .collect())
}

/// `Σ_{n ≤ terms} Γ_n^{-1/α} ε_n`; the scalar LePage series for a standard
/// symmetric stable variable (up to scale).
pub fn lepage_sum<V: Variates + ?Sized>(alpha: f64, terms: usize, stream: &mut V) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return domain(format!("series stable index must lie in (0, 2), got {alpha}"));
    }
    if terms == 0 {
        return Err(Error::Empty("a LePage sum needs at least one term".into()));
    }
    let inv = -1.0 / alpha;
    let mut gamma = 0.0;
    let mut acc = 0.0;
    for _ in 0..terms {
        gamma += stream.exponential();
        acc += gamma.powf(inv) * stream.rademacher();
    }
    Ok(acc)
}

/// Scale `σ` of the SαS limit of `Σ Γ_n^{-1/α} ε_n`, i.e. the law with
/// characteristic function `exp(-(σ|u|)^α)`: `σ^α = 1 / C_α` with
/// `C_α = (1-α) / (Γ(2-α) cos(πα/2))` and `C_1 = 2/π`.
pub fn lepage_scale(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return domain(format!("series stable index must lie in (0, 2), got {alpha}"));
    }
    let c = if (alpha - 1.0).abs() < 1e-12 {
        2.0 / std::f64::consts::PI
    } else {
        (1.0 - alpha)
            / (statrs::function::gamma::gamma(2.0 - alpha)
                * (std::f64::consts::FRAC_PI_2 * alpha).cos())
    };
    Ok((1.0 / c).powf(1.0 / alpha))
}
