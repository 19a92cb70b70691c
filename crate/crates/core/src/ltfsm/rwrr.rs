//! Random walk with random rewards: `n^{-(1/2 + 1/(2α))} Σ_{j ≤ ⌊nt/T⌋} ξ(S_j)`
//! for a simple symmetric walk `S` and i.i.d. symmetric stable site rewards
//! `ξ`. It converges to the LTFSM with `H = 1/2` as `n → ∞`.

use crate::error::{domain, Result};
use crate::path::{uniform_grid, SamplePath};
use crate::stochastics::{oracle::sample_stable, Variates};

/// Walk steps come from substream 0 and site rewards, drawn lazily on the
/// first visit, from substream 1.
pub fn simulate_rwrr_baseline<V: Variates>(
    alpha: f64,
    steps: usize,
    horizon: f64,
    grid_points: usize,
    stream: &V,
) -> Result<SamplePath> {
    simulate_rwrr_with(alpha, steps, horizon, grid_points, stream, |s: &mut V| {
        sample_stable(alpha, s)
    })
}

/// As [`simulate_rwrr_baseline`] with a caller-supplied reward sampler.
pub fn simulate_rwrr_with<V, F>(
    alpha: f64,
    steps: usize,
    horizon: f64,
    grid_points: usize,
    stream: &V,
    mut reward: F,
) -> Result<SamplePath>
where
    V: Variates,
    F: FnMut(&mut V) -> Result<f64>,
{
    if !(alpha > 0.0 && alpha < 2.0) {
        return domain(format!("stable index must lie in (0, 2), got {alpha}"));
    }
    if steps == 0 {
        return domain("the walk needs at least one step");
    }
    let times = uniform_grid(horizon, grid_points)?;
    let mut walk = stream.substream(0);
    let mut rewards = stream.substream(1);
    let mut sites = vec![f64::NAN; 2 * steps + 1];
    let norm = (steps as f64).powf(-(0.5 + 0.5 / alpha));

    let mut values = Vec::with_capacity(times.len());
    let mut pos = steps;
    let mut acc = 0.0;
    let mut j = 0usize;
    for i in 0..=grid_points {
        let last = ((steps as u128 * i as u128) / grid_points as u128) as usize;
        while j < last {
            j += 1;
            if walk.rademacher() > 0.0 {
                pos += 1;
            } else {
                pos -= 1;
            }
            if sites[pos].is_nan() {
                sites[pos] = reward(&mut rewards)?;
            }
            acc += sites[pos];
        }
        values.push(norm * acc);
    }
    SamplePath::new(times, values)
}
