//! Seedable random streams and the base distributions used by the series.
//!
//! # Stream derivation
//!
//! A [`RandomStream`] is a ChaCha8 keystream. For `RandomStream::new(seed, id)`
//! the 256-bit key is the little-endian concatenation of `k0..k3` where
//! `k0 = splitmix64(seed)` and `k(i+1) = splitmix64(k(i))`, and the ChaCha
//! stream number is `id`. A child stream is
//! `RandomStream::new(seed, splitmix64(id ^ splitmix64(child)))`, with
//!
//! ```text
//! splitmix64(x):
//!     z = x + 0x9E3779B97F4A7C15              (wrapping)
//!     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 (wrapping)
//!     z = (z ^ (z >> 27)) * 0x94D049BB133111EB (wrapping)
//!     return z ^ (z >> 31)
//! ```
//!
//! Uniforms are `((u64 >> 11) + 0.5) / 2^53`, which lies strictly inside
//! (0, 1). Exponentials are `-ln U`. Gaussians use the Marsaglia polar
//! method; the second variate of each accepted pair is cached and returned
//! by the next call.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Source of base variates. Every sampler in the crate draws through this
/// trait, so tests can substitute a stub that pins particular variates.
pub trait Variates {
    fn next_u64(&mut self) -> u64;

    /// Independent child stream. Children of equal `id` are identical.
    fn substream(&self, id: u64) -> Self
    where
        Self: Sized;

    /// Uniform on the open interval (0, 1).
    fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Unit-rate exponential.
    fn exponential(&mut self) -> f64 {
        -self.uniform().ln()
    }

    /// Standard normal.
    fn gaussian(&mut self) -> f64 {
        polar_pair(self).0
    }

    /// Uniform on {-1, +1}.
    fn rademacher(&mut self) -> f64 {
        if self.next_u64() >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// One accepted Marsaglia polar pair of independent standard normals.
pub fn polar_pair<V: Variates + ?Sized>(v: &mut V) -> (f64, f64) {
    loop {
        let a = 2.0 * v.uniform() - 1.0;
        let b = 2.0 * v.uniform() - 1.0;
        let s = a * a + b * b;
        if s < 1.0 && s > 0.0 {
            let f = (-2.0 * s.ln() / s).sqrt();
            return (a * f, b * f);
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    substream_id: u64,
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl RandomStream {
    pub fn new(seed: u64, substream_id: u64) -> Self {
        let mut key = [0u8; 32];
        let mut k = seed;
        for chunk in key.chunks_exact_mut(8) {
            k = splitmix64(k);
            chunk.copy_from_slice(&k.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(substream_id);
        Self {
            seed,
            substream_id,
            rng,
            spare: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn substream_id(&self) -> u64 {
        self.substream_id
    }
}

impl Variates for RandomStream {
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn substream(&self, id: u64) -> Self {
        RandomStream::new(self.seed, splitmix64(self.substream_id ^ splitmix64(id)))
    }

    fn gaussian(&mut self) -> f64 {
        if let Some(g) = self.spare.take() {
            return g;
        }
        let (a, b) = polar_pair(self);
        self.spare = Some(b);
        a
    }
}

/// Arrival times Γ₁ < Γ₂ < … of a unit-rate Poisson process.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrivalSequence(Vec<f64>);

impl ArrivalSequence {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Cumulative sums of `count` unit-rate exponentials.
pub fn poisson_arrivals<V: Variates + ?Sized>(count: usize, stream: &mut V) -> Result<ArrivalSequence> {
    if count == 0 {
        return Err(Error::Empty("poisson_arrivals needs count >= 1".into()));
    }
    let mut gamma = 0.0;
    let arrivals = (0..count)
        .map(|_| {
            gamma += stream.exponential();
            gamma
        })
        .collect();
    Ok(ArrivalSequence(arrivals))
}

/// Laplace variate with density `exp(-2|x|)`.
pub fn sample_laplace_half<V: Variates + ?Sized>(stream: &mut V) -> f64 {
    let sign = stream.rademacher();
    sign * 0.5 * stream.exponential()
}

pub fn sample_gaussian<V: Variates + ?Sized>(stream: &mut V) -> f64 {
    stream.gaussian()
}

/// Direct stable sampling, used as an independent reference for the series.
pub mod oracle {
    use super::Variates;
    use crate::error::{domain, Result};
    use std::f64::consts::FRAC_PI_2;

    /// Standard symmetric α-stable variate, characteristic function
    /// `exp(-|u|^α)`, via the Chambers–Mallows–Stuck transform
    ///
    /// ```text
    /// V ~ U(-π/2, π/2),  W ~ Exp(1)
    /// X = sin(αV) / cos(V)^(1/α) · (cos((1-α)V) / W)^((1-α)/α)
    /// ```
    ///
    /// which reduces to `tan V` at α = 1 and to a centred Gaussian of
    /// variance 2 at α = 2.
    pub fn sample_stable<V: Variates + ?Sized>(alpha: f64, stream: &mut V) -> Result<f64> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return domain(format!("stable index must lie in (0, 2], got {alpha}"));
        }
        let v = FRAC_PI_2 * (2.0 * stream.uniform() - 1.0);
        let w = stream.exponential();
        if alpha == 1.0 {
            return Ok(v.tan());
        }
        let x = (alpha * v).sin() / v.cos().powf(1.0 / alpha)
            * ((((1.0 - alpha) * v).cos()) / w).powf((1.0 - alpha) / alpha);
        Ok(x)
    }
}
