//! Mollified occupation integrals of fBm paths.
//!
//! `I_k(x, t) = (T/m) Σ_{i=0}^{⌊mt/T⌋} φ_k(B_{iT/m} - x)` is a left-point
//! rectangle rule for `∫_0^t φ_k(B_s - x) ds`, itself an approximation of
//! the local time `l(x, t)` as `k → ∞`. The weight is `T/m` rather than
//! `1/m` so the sum tends to the integral for every horizon. The `i = 0`
//! summand is kept; its `T/m` bias vanishes with `m`.

use crate::error::{domain, Result};
use crate::fbm::FbmPath;

/// Bandwidth index `k ≥ 1`; the kernel `φ_k` is supported on `[-1/k, 1/k]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KernelBandwidth(u64);

impl KernelBandwidth {
    pub fn new(k: u64) -> Result<Self> {
        if k == 0 {
            return domain("kernel bandwidth index must be at least 1");
        }
        Ok(Self(k))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn half_width(self) -> f64 {
        1.0 / self.0 as f64
    }
}

/// A nonnegative kernel integrating to one over its compact support.
pub trait Kernel {
    fn eval(&self, x: f64) -> f64;
    fn half_width(&self) -> f64;
}

/// The triangle `max(0, 1 - |x|)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Triangle;

impl Kernel for Triangle {
    #[inline]
    fn eval(&self, x: f64) -> f64 {
        kernel_phi(x)
    }

    fn half_width(&self) -> f64 {
        1.0
    }
}

/// `k·K(k·x)` for a base kernel `K`.
#[derive(Clone, Copy, Debug)]
pub struct Scaled<K> {
    base: K,
    k: f64,
}

impl<K: Kernel> Scaled<K> {
    pub fn new(base: K, bandwidth: KernelBandwidth) -> Self {
        Self {
            base,
            k: bandwidth.get() as f64,
        }
    }
}

impl<K: Kernel> Kernel for Scaled<K> {
    #[inline]
    fn eval(&self, x: f64) -> f64 {
        self.k * self.base.eval(self.k * x)
    }

    fn half_width(&self) -> f64 {
        self.base.half_width() / self.k
    }
}

#[inline]
pub fn kernel_phi(x: f64) -> f64 {
    (1.0 - x.abs()).max(0.0)
}

#[inline]
pub fn kernel_phi_k(k: KernelBandwidth, x: f64) -> f64 {
    let k = k.get() as f64;
    k * kernel_phi(k * x)
}

/// `I_k(x, ·)` on an output grid.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupationCurve {
    pub center: f64,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Rectangle index `⌊m t / T⌋`, snapping values within 1e-9 of an integer
/// up so that grid times like `jT/G` land on the intended cell.
fn cell_index(t: f64, path: &FbmPath) -> usize {
    let m = path.intervals();
    let raw = m as f64 * t / path.horizon();
    let idx = (raw + 1e-9 * raw.abs().max(1.0)).floor();
    (idx.max(0.0) as usize).min(m)
}

fn check_times(times: &[f64], horizon: f64) -> Result<()> {
    let slack = 1e-12 * horizon;
    match times.iter().find(|&&t| !(t >= -slack && t <= horizon + slack)) {
        Some(t) => domain(format!("evaluation time {t} lies outside [0, {horizon}]")),
        None => Ok(()),
    }
}

/// Rectangle-rule occupation integral at each time in `eval_times`.
pub fn discretized_occupation(
    path: &FbmPath,
    k: KernelBandwidth,
    x: f64,
    eval_times: &[f64],
) -> Result<OccupationCurve> {
    discretized_occupation_with(&Scaled::new(Triangle, k), path, x, eval_times)
}

/// As [`discretized_occupation`] with an arbitrary kernel.
pub fn discretized_occupation_with<K: Kernel>(
    kernel: &K,
    path: &FbmPath,
    x: f64,
    eval_times: &[f64],
) -> Result<OccupationCurve> {
    check_times(eval_times, path.horizon())?;
    let mut values = vec![0.0; eval_times.len()];
    let (lo, hi) = path.min_max();
    let reach = kernel.half_width();
    if x >= lo - reach && x <= hi + reach {
        let cells: Vec<usize> = eval_times.iter().map(|&t| cell_index(t, path)).collect();
        let last = cells.iter().copied().max().unwrap_or(0);
        let weight = path.step();
        let mut prefix = Vec::with_capacity(last + 1);
        let mut acc = 0.0;
        for &b in &path.values()[..=last] {
            acc += kernel.eval(b - x);
            prefix.push(acc);
        }
        for (v, &c) in values.iter_mut().zip(&cells) {
            *v = weight * prefix[c];
        }
    }
    Ok(OccupationCurve {
        center: x,
        times: eval_times.to_vec(),
        values,
    })
}

/// Time spent by the sampled path in `[x - w/2, x + w/2]` up to `t`,
/// counting each grid point `i ≤ ⌊mt/T⌋` with weight `T/m`.
pub fn occupation_measure(path: &FbmPath, bin_width: f64, x: f64, t: f64) -> Result<f64> {
    if !(bin_width > 0.0) {
        return domain(format!("bin width must be positive, got {bin_width}"));
    }
    check_times(&[t], path.horizon())?;
    let last = cell_index(t, path);
    let half = 0.5 * bin_width;
    let hits = path.values()[..=last]
        .iter()
        .filter(|&&b| (b - x).abs() <= half)
        .count();
    Ok(path.step() * hits as f64)
}

/// Histogram local-time estimate: occupation measure divided by bin width.
pub fn occupation_oracle(path: &FbmPath, bin_width: f64, x: f64, t: f64) -> Result<f64> {
    Ok(occupation_measure(path, bin_width, x, t)? / bin_width)
}
