//! Empirical characteristic functions, least-squares linearity checks,
//! two-sample Kolmogorov–Smirnov distance and CF-based scale fitting.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::path::SamplePath;

/// Monte Carlo estimate of `E[e^{iuY(t)}]` on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CfEstimate {
    pub u: f64,
    pub times: Vec<f64>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    /// Standard error of `|CF|` (delta method).
    pub stderr: Vec<f64>,
    pub re_stderr: Vec<f64>,
    pub im_stderr: Vec<f64>,
}

impl CfEstimate {
    pub fn modulus(&self) -> Vec<f64> {
        self.re.iter().zip(&self.im).map(|(a, b)| a.hypot(*b)).collect()
    }
}

fn moments(xs: impl Iterator<Item = (f64, f64)>, n: f64) -> (f64, f64, f64, f64, f64) {
    let (mut sc, mut ss, mut scc, mut sss, mut scs) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (c, s) in xs {
        sc += c;
        ss += s;
        scc += c * c;
        sss += s * s;
        scs += c * s;
    }
    let (mc, ms) = (sc / n, ss / n);
    let k = n / (n - 1.0);
    let vc = ((scc / n - mc * mc) * k).max(0.0);
    let vs = ((sss / n - ms * ms) * k).max(0.0);
    let cov = (scs / n - mc * ms) * k;
    (mc, ms, vc, vs, cov)
}

/// Per-time averages of `cos(uY(t))` and `sin(uY(t))`.
pub fn empirical_cf(paths: &[SamplePath], u: f64) -> Result<CfEstimate> {
    if paths.len() < 2 {
        return domain(format!("need at least 2 sample paths, got {}", paths.len()));
    }
    let times = paths[0].times.clone();
    if let Some(bad) = paths.iter().position(|p| p.times != times) {
        return Err(Error::Shape(format!("path {bad} is not on the common time grid")));
    }
    let n = paths.len() as f64;
    let cols: Vec<_> = (0..times.len())
        .into_par_iter()
        .map(|i| {
            let (c, s, vc, vs, cov) = moments(
                paths.iter().map(|p| {
                    let (s, c) = (u * p.values[i]).sin_cos();
                    (c, s)
                }),
                n,
            );
            let modulus = c.hypot(s);
            let var = if modulus > 0.0 {
                (c * c * vc + s * s * vs + 2.0 * c * s * cov) / (modulus * modulus)
            } else {
                0.5 * (vc + vs)
            };
            (c, s, (var.max(0.0) / n).sqrt(), (vc / n).sqrt(), (vs / n).sqrt())
        })
        .collect();
    Ok(CfEstimate {
        u,
        times,
        re: cols.iter().map(|c| c.0).collect(),
        im: cols.iter().map(|c| c.1).collect(),
        stderr: cols.iter().map(|c| c.2).collect(),
        re_stderr: cols.iter().map(|c| c.3).collect(),
        im_stderr: cols.iter().map(|c| c.4).collect(),
    })
}

/// Largest standardized difference between two CF estimates, taken over
/// real and imaginary parts at every time.
pub fn cf_max_z(a: &CfEstimate, b: &CfEstimate) -> Result<f64> {
    if a.times != b.times {
        return Err(Error::Shape("CF estimates are on different time grids".into()));
    }
    let z = |d: f64, sa: f64, sb: f64| {
        let se = sa.hypot(sb);
        if se > 0.0 {
            d.abs() / se
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    };
    let mut worst = 0.0f64;
    for i in 0..a.times.len() {
        worst = worst
            .max(z(a.re[i] - b.re[i], a.re_stderr[i], b.re_stderr[i]))
            .max(z(a.im[i] - b.im[i], a.im_stderr[i], b.im_stderr[i]));
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares with `R² = 1 - SS_res/SS_tot`.
///
/// When `y` is constant `SS_tot = 0`; `R²` is then 1 if the residuals
/// vanish and 0 otherwise.
pub fn linreg_r2(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!("{} x values but {} y values", x.len(), y.len())));
    }
    if x.len() < 3 {
        return domain(format!("regression needs at least 3 points, got {}", x.len()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if !(sxx > 0.0) {
        return domain("x values are all equal");
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    let ss_tot: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    };
    Ok(LinearFit { slope, intercept, r2 })
}

/// `sup_x |F̂_a(x) - F̂_b(x)|` over the pooled sample.
pub fn ks_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("KS distance needs two nonempty samples".into()));
    }
    let sorted = |v: &[f64]| {
        let mut s = v.to_vec();
        s.sort_by(f64::total_cmp);
        s
    };
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = if a[i].total_cmp(&b[j]).is_le() { a[i] } else { b[j] };
        while i < a.len() && a[i].total_cmp(&x).is_le() {
            i += 1;
        }
        while j < b.len() && b[j].total_cmp(&x).is_le() {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Multiples of `1 / median|x|` at which the CF is sampled for scale fits.
const FIT_GRID: [f64; 7] = [0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6];

/// Scale `σ` under the convention `|CF(u)| = exp(-(σ|u|)^α)`.
///
/// `log(-log|CF(u)|) = α log σ + α log u` is fitted with the slope fixed
/// at one against `α log u`. For `α = 2` this convention makes the
/// variance `2σ²`.
pub fn fit_scale_by_cf(samples: &[f64], alpha: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Empty("scale fit needs samples".into()));
    }
    if !(alpha > 0.0 && alpha <= 2.0) {
        return domain(format!("stable index must lie in (0, 2], got {alpha}"));
    }
    let mut abs: Vec<f64> = samples.iter().map(|x| x.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let median = abs[abs.len() / 2];
    if !(median > 0.0 && median.is_finite()) {
        return Err(Error::DegenerateFit(format!("median |x| is {median}; no usable frequency")));
    }
    let n = samples.len() as f64;
    let mut intercepts = Vec::new();
    for c in FIT_GRID {
        let u = c / median;
        let (re, im) = samples.iter().fold((0.0, 0.0), |(r, i), x| {
            let (s, c) = (u * x).sin_cos();
            (r + c, i + s)
        });
        let modulus = (re / n).hypot(im / n);
        if modulus > 0.0 && modulus < 1.0 {
            intercepts.push((-modulus.ln()).ln() - alpha * u.ln());
        }
    }
    if intercepts.is_empty() {
        return Err(Error::DegenerateFit("|CF| is 0 or at least 1 at every frequency".into()));
    }
    let a = intercepts.iter().sum::<f64>() / intercepts.len() as f64;
    Ok((a / alpha).exp())
}

/// Regression of `log|CF(u, t)|` on `t` over the grid times `t > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CfLinearity {
    pub estimate: CfEstimate,
    pub times: Vec<f64>,
    pub log_modulus: Vec<f64>,
    /// Standard error of `log|CF|` at each of `times`.
    pub log_stderr: Vec<f64>,
    pub fit: LinearFit,
}

pub fn cf_linearity(paths: &[SamplePath], u: f64) -> Result<CfLinearity> {
    let estimate = empirical_cf(paths, u)?;
    let modulus = estimate.modulus();
    let (mut times, mut logs, mut ses) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..estimate.times.len() {
        if estimate.times[i] > 0.0 {
            if !(modulus[i] > 0.0) {
                return Err(Error::DegenerateFit(format!(
                    "|CF| vanishes at t = {}",
                    estimate.times[i]
                )));
            }
            times.push(estimate.times[i]);
            logs.push(modulus[i].ln());
            ses.push(estimate.stderr[i] / modulus[i]);
        }
    }
    let fit = linreg_r2(&times, &logs)?;
    Ok(CfLinearity {
        estimate,
        times,
        log_modulus: logs,
        log_stderr: ses,
        fit,
    })
}

/// Descriptive Hölder exponent: slope of `log max_t |Y(t+h) - Y(t)|`
/// against `log h` over dyadic lags up to a quarter of the grid.
pub fn holder_exponent_estimate(path: &SamplePath) -> Result<f64> {
    let m = path.len().saturating_sub(1);
    if m < 8 {
        return domain(format!("need at least 8 grid intervals, got {m}"));
    }
    let dt = path.times[1] - path.times[0];
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut lag = 1;
    while lag <= m / 4 {
        let osc = (0..=m - lag)
            .map(|i| (path.values[i + lag] - path.values[i]).abs())
            .fold(0.0f64, f64::max);
        if osc > 0.0 {
            xs.push((lag as f64 * dt).ln());
            ys.push(osc.ln());
        }
        lag *= 2;
    }
    if xs.len() < 3 {
        return Err(Error::DegenerateFit("path increments vanish at most lags".into()));
    }
    Ok(linreg_r2(&xs, &ys)?.slope)
}
