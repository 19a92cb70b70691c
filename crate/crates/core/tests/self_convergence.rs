//! Coupled self-convergence: a run at ε and a finer reference run at ε/4
//! share every random input, and the chance that they differ by more than
//! ε in the discrete L¹([0, T]) norm falls as ε shrinks.
//!
//! The mesh rule `m ∝ k^{(2+δ)/δ'}` makes any refinement of the bandwidth
//! infeasible at this scale, so `C_k` is set small enough that `k = 1` for
//! every ε on the grid and the check exercises the truncation component.
//! With η = 2 the truncated tail shrinks like ε², well ahead of ε itself.

use ltfsm_core::ltfsm::{tune, LtfsmSimulator, SeriesConfig};
use ltfsm_core::stochastics::RandomStream;

fn config(epsilon: f64) -> SeriesConfig {
    let mut c = SeriesConfig::new(0.8, 0.5);
    c.epsilon = epsilon;
    c.eta = 2.0;
    c.grid_points = 10;
    c.c_k = 1e-6;
    c
}

fn exceedance(epsilon: f64, reps: u64) -> f64 {
    let coarse = config(epsilon);
    let fine = config(epsilon / 4.0);
    assert_eq!(tune(&fine).unwrap().bandwidth.get(), 1);
    let sim = LtfsmSimulator::laplace(&coarse, &tune(&coarse).unwrap()).unwrap();
    let reference = LtfsmSimulator::laplace(&fine, &tune(&fine).unwrap()).unwrap();
    let hits = (0..reps)
        .filter(|&r| {
            let s = RandomStream::new(77, r);
            let a = sim.simulate(&s).unwrap().values;
            let b = reference.simulate(&s).unwrap().values;
            let norm = a.iter().zip(&b).skip(1).map(|(x, y)| (x - y).abs()).sum::<f64>() / 10.0;
            norm > epsilon
        })
        .count();
    hits as f64 / reps as f64
}

#[test]
fn exceedance_probability_decreases_on_dyadic_grid() {
    let probs: Vec<f64> = [0.8, 0.4, 0.2].iter().map(|&e| exceedance(e, 300)).collect();
    assert!(probs.windows(2).all(|w| w[1] < w[0]), "{probs:?}");
}
