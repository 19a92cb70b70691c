//! Moment bounds for truncating the series and for replacing the inner
//! curves `V_n` by approximations `W_{n,k}`.
//!
//! Every gamma ratio goes through `ln Γ` and is exponentiated last;
//! `Γ(n - q/α) / Γ(n)` overflows long before `n` reaches the thousands.
//! The moment constants `M_q` and `M_{q,k}` are always supplied by the
//! caller.

use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Result};

fn check_q(q: f64) -> Result<()> {
    if q >= 2.0 {
        Ok(())
    } else {
        domain(format!("q >= 2 required, got q = {q}"))
    }
}

fn check_series_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 2.0 {
        Ok(())
    } else {
        domain(format!("0 < alpha < 2 required, got alpha = {alpha}"))
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} must be positive and finite, got {v}"))
    }
}

fn check_lp(q: f64, p: f64, vol_k: f64) -> Result<()> {
    check_positive("p", p)?;
    check_positive("volK", vol_k)?;
    if q > p.max(2.0) {
        Ok(())
    } else {
        domain(format!("q > max(p, 2) required, got q = {q}, p = {p}"))
    }
}

/// Khintchine constant: `√2 (Γ((q+1)/2) / √π)^{1/q}` for `q > 2`, 1 at `q = 2`.
pub fn bound_b_q(q: f64) -> Result<f64> {
    check_q(q)?;
    if q == 2.0 {
        return Ok(1.0);
    }
    let log_ratio = ln_gamma(0.5 * (q + 1.0)) - 0.5 * std::f64::consts::PI.ln();
    Ok(std::f64::consts::SQRT_2 * (log_ratio / q).exp())
}

/// `H_{n,q} = Γ(n - q/α) n^{q/α} / Γ(n)`, defined for `n > q/α`.
pub fn bound_h_nq(n: u64, q: f64, alpha: f64) -> Result<f64> {
    check_series_alpha(alpha)?;
    check_positive("q", q)?;
    let s = q / alpha;
    let nf = n as f64;
    if !(nf > s) {
        return domain(format!(
            "H_{{n,q}} needs n > q/alpha (moment of order q does not exist): n = {n}, q/alpha = {s}"
        ));
    }
    Ok((ln_gamma(nf - s) + s * nf.ln() - ln_gamma(nf)).exp())
}

/// Smallest `n` with `|H_{m,q} - 1| < tol` for every `m ≥ n`.
///
/// `H_{n,q}` decreases to 1, so the first crossing is final; found by
/// doubling then bisection.
pub fn h_nq_settling_index(q: f64, alpha: f64, tol: f64) -> Result<u64> {
    check_positive("tol", tol)?;
    let first = (q / alpha).floor() as u64 + 1;
    let settled = |n: u64| -> Result<bool> { Ok(bound_h_nq(n, q, alpha)? - 1.0 < tol) };
    if settled(first)? {
        return Ok(first);
    }
    let mut lo = first;
    let mut hi = first.max(1) * 2;
    while !settled(hi)? {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if settled(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn a_q(q: f64, alpha: f64, m_q: f64) -> Result<f64> {
    Ok(2.0 * bound_b_q(q)?.powf(q) * m_q * (alpha / (2.0 - alpha)).powf(0.5 * q))
}

fn a_prime_q(q: f64, alpha: f64, beta: f64) -> Result<f64> {
    Ok(bound_b_q(q)?.powf(q) * (alpha / (2.0 - alpha * beta - alpha)).powf(0.5 * q))
}

fn check_truncation(n: u64, q: f64, alpha: f64, m_q: f64) -> Result<()> {
    check_q(q)?;
    check_series_alpha(alpha)?;
    check_positive("Mq", m_q)?;
    if !(n as f64 > q / alpha - 1.0) {
        return domain(format!(
            "N > q/alpha - 1 required, got N = {n}, q/alpha - 1 = {}",
            q / alpha - 1.0
        ));
    }
    Ok(())
}

/// Bound on `E|Y(t) - Y_N(t)|^q`: `A_q H_{N+1,q} / N^{q(2-α)/(2α)}` with
/// `A_q = 2 B_q^q M_q (α/(2-α))^{q/2}`.
pub fn truncation_bound(n: u64, q: f64, alpha: f64, m_q: f64) -> Result<f64> {
    check_truncation(n, q, alpha, m_q)?;
    let decay = (n as f64).powf(q * (2.0 - alpha) / (2.0 * alpha));
    Ok(a_q(q, alpha, m_q)? * bound_h_nq(n + 1, q, alpha)? / decay)
}

/// Bound on `E‖Y - Y_N‖_{K,p}^q`: `Vol(K)^{q/p} A_q H_{N,q} / N^{q(2-α)/(2α)}`.
///
/// Uses `H_{N,q}` as stated for the `L^p` version, which additionally
/// needs `N > q/α`.
pub fn truncation_bound_lp(n: u64, q: f64, alpha: f64, m_q: f64, p: f64, vol_k: f64) -> Result<f64> {
    check_truncation(n, q, alpha, m_q)?;
    check_lp(q, p, vol_k)?;
    let decay = (n as f64).powf(q * (2.0 - alpha) / (2.0 * alpha));
    Ok(vol_k.powf(q / p) * a_q(q, alpha, m_q)? * bound_h_nq(n, q, alpha)? / decay)
}

fn check_approximation(n: u64, big_p: u64, q: f64, alpha: f64, beta: f64, m_qk: f64) -> Result<()> {
    check_q(q)?;
    check_series_alpha(alpha)?;
    check_positive("Mqk", m_qk)?;
    if !(alpha * (n as f64 + 1.0) > q) {
        return domain(format!(
            "alpha(N+1) > q required, got alpha(N+1) = {}, q = {q}",
            alpha * (n as f64 + 1.0)
        ));
    }
    if big_p < n {
        return domain(format!("P >= N required, got P = {big_p}, N = {n}"));
    }
    if !(beta < 1.0 / alpha - 0.5) {
        return domain(format!(
            "beta < 1/alpha - 1/2 required, got beta = {beta}, 1/alpha - 1/2 = {}",
            1.0 / alpha - 0.5
        ));
    }
    Ok(())
}

/// Bound on the `q`-th moment of `Σ_{n=N+1}^{P} h(Γ_n, V_n) - h(Γ_n, W_{n,k})`:
/// `A'_q H_{N+1,q} M_{q,k} (N^{-e} - P^{-e})^{q/2}` with `e = 2/α - β - 1`
/// and `A'_q = B_q^q (α / (2 - αβ - α))^{q/2}`. `P = N` is the empty block.
pub fn approximation_bound(n: u64, big_p: u64, q: f64, alpha: f64, beta: f64, m_qk: f64) -> Result<f64> {
    check_approximation(n, big_p, q, alpha, beta, m_qk)?;
    if big_p == n {
        return Ok(0.0);
    }
    let e = 2.0 / alpha - beta - 1.0;
    let gap = (n as f64).powf(-e) - (big_p as f64).powf(-e);
    Ok(a_prime_q(q, alpha, beta)? * bound_h_nq(n + 1, q, alpha)? * m_qk * gap.powf(0.5 * q))
}

/// `Vol(K)^{q/p}` times [`approximation_bound`].
pub fn approximation_bound_lp(
    n: u64,
    big_p: u64,
    q: f64,
    alpha: f64,
    beta: f64,
    m_qk: f64,
    p: f64,
    vol_k: f64,
) -> Result<f64> {
    check_lp(q, p, vol_k)?;
    Ok(vol_k.powf(q / p) * approximation_bound(n, big_p, q, alpha, beta, m_qk)?)
}

/// Inputs for a [`BoundReport`]. The approximation block is evaluated when
/// `big_p`, `beta` and `m_qk` are all present; the `L^p` variants when `p`
/// and `vol_k` are.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundRequest {
    pub alpha: f64,
    pub q: f64,
    pub n: u64,
    pub m_q: f64,
    pub big_p: Option<u64>,
    pub beta: Option<f64>,
    pub m_qk: Option<f64>,
    pub p: Option<f64>,
    pub vol_k: Option<f64>,
}

impl BoundRequest {
    pub fn new(alpha: f64, q: f64, n: u64) -> Self {
        Self {
            alpha,
            q,
            n,
            m_q: 1.0,
            big_p: None,
            beta: None,
            m_qk: None,
            p: None,
            vol_k: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub q: f64,
    pub alpha: f64,
    pub n: u64,
    pub b_q: f64,
    pub h_n1_q: f64,
    pub a_q: f64,
    pub m_q: f64,
    pub truncation_bound: f64,
    pub a_prime_q: Option<f64>,
    pub m_qk: Option<f64>,
    pub approximation_bound: Option<f64>,
    pub truncation_bound_lp: Option<f64>,
    pub approximation_bound_lp: Option<f64>,
}

impl BoundReport {
    pub fn compute(req: &BoundRequest) -> Result<Self> {
        let (q, alpha, n) = (req.q, req.alpha, req.n);
        let truncation = truncation_bound(n, q, alpha, req.m_q)?;
        let approx = match (req.big_p, req.beta, req.m_qk) {
            (Some(big_p), Some(beta), Some(m_qk)) => Some((
                a_prime_q(q, alpha, beta)?,
                approximation_bound(n, big_p, q, alpha, beta, m_qk)?,
            )),
            _ => None,
        };
        let lp = match (req.p, req.vol_k) {
            (Some(p), Some(vol_k)) => Some((p, vol_k)),
            _ => None,
        };
        let truncation_lp = lp
            .map(|(p, vol_k)| truncation_bound_lp(n, q, alpha, req.m_q, p, vol_k))
            .transpose()?;
        let approximation_lp = match (lp, approx) {
            (Some((p, vol_k)), Some((_, value))) => {
                check_lp(q, p, vol_k)?;
                Some(vol_k.powf(q / p) * value)
            }
            _ => None,
        };
        Ok(Self {
            q,
            alpha,
            n,
            b_q: bound_b_q(q)?,
            h_n1_q: bound_h_nq(n + 1, q, alpha)?,
            a_q: a_q(q, alpha, req.m_q)?,
            m_q: req.m_q,
            truncation_bound: truncation,
            a_prime_q: approx.map(|a| a.0),
            m_qk: approx.and(req.m_qk),
            approximation_bound: approx.map(|a| a.1),
            truncation_bound_lp: truncation_lp,
            approximation_bound_lp: approximation_lp,
        })
    }

    /// `(key, value)` pairs in report order; absent entries are skipped.
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![
            ("alpha", self.alpha),
            ("q", self.q),
            ("N", self.n as f64),
            ("B_q", self.b_q),
            ("H_N1_q", self.h_n1_q),
            ("A_q", self.a_q),
            ("M_q", self.m_q),
            ("truncation_bound", self.truncation_bound),
        ];
        let optional = [
            ("A_prime_q", self.a_prime_q),
            ("M_qk", self.m_qk),
            ("approximation_bound", self.approximation_bound),
            ("truncation_bound_lp", self.truncation_bound_lp),
            ("approximation_bound_lp", self.approximation_bound_lp),
        ];
        out.extend(optional.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))));
        out
    }
}
