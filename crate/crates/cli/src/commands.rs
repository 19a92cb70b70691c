use std::path::PathBuf;

use ltfsm_core::ltfsm::{monte_carlo, path_methods, MethodSettings, SeriesConfig};
use ltfsm_core::shotnoise::{lepage_scale, lepage_sum, BoundReport, BoundRequest};
use ltfsm_core::stochastics::{oracle::sample_stable, RandomStream};
use ltfsm_core::validation::{cf_linearity, fit_scale_by_cf, ks_distance};
use rayon::prelude::*;

use crate::error::CliError;
use crate::output::{csv, exact, key_values, rounded};
use crate::settings::{Resolver, Settings};

/// Flags shared by every command that builds a path method.
const METHOD_KEYS: &[(&str, &str)] = &[
    ("method", "path method: series, series-gaussian or rwrr [default: series]"),
    ("T", "time horizon [default: 1]"),
    ("grid", "output grid intervals"),
    ("eta", "rate exponent eta > 1 [default: 1.1]"),
    ("q", "moment order q > max(p, 2) [default: 2.5]"),
    ("p", "norm order p >= 1 [default: 1]"),
    ("delta", "kernel regularity, delta < 1/(2H) - 1/2 [default: 0.45]"),
    ("delta-prime", "fBm regularity, delta-prime < H [default: 0.25]"),
    ("beta", "tail mesh decay, beta < 1/alpha - 1/2 [default: 0]"),
    ("c-p", "constant in the truncation size P [default: 1]"),
    ("c-k", "constant in the bandwidth k [default: 1]"),
    ("max-points", "upper clamp on per-term fBm grid sizes [default: 1024]"),
    ("fbm", "fBm generator: auto, davies-harte or cholesky [default: auto]"),
    ("steps", "walk length for the rwrr method [default: 10000]"),
];

pub struct CommandSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub keys: Vec<(&'static str, &'static str)>,
    pub run: fn(&Settings) -> Result<Outcome, CliError>,
}

/// What a command produced. `failure` is set when outputs were written but
/// a validation threshold was missed.
pub struct Outcome {
    pub stdout: String,
    pub file: Option<(PathBuf, String)>,
    pub resolved: Vec<(String, String)>,
    pub failure: Option<CliError>,
}

pub fn specs() -> Vec<CommandSpec> {
    let with = |head: &[(&'static str, &'static str)], tail: &[(&'static str, &'static str)]| {
        let mut v = head.to_vec();
        v.extend_from_slice(tail);
        v
    };
    vec![
        CommandSpec {
            name: "simulate",
            about: "Simulate one sample path and write it as CSV (t,value)",
            keys: with(
                &[
                    ("alpha", "stable index in (0, 2)"),
                    ("hurst", "Hurst index in (0, 1)"),
                    ("epsilon", "target accuracy"),
                    ("seed", "random seed"),
                    ("out", "output CSV; a .manifest is written next to it [default: stdout]"),
                ],
                METHOD_KEYS,
            ),
            run: simulate,
        },
        CommandSpec {
            name: "bounds",
            about: "Evaluate the truncation and approximation moment bounds",
            keys: vec![
                ("alpha", "stable index in (0, 2)"),
                ("q", "moment order q >= 2"),
                ("N", "number of retained terms"),
                ("P", "outer truncation for the approximation bound"),
                ("beta", "tail mesh decay [default: 0 when P is given]"),
                ("Mq", "q-th moment of the inner weights [default: 1]"),
                ("Mqk", "inner approximation error constant [default: 1 when P is given]"),
                ("p", "L^p norm order (with volK)"),
                ("volK", "volume of the compact K (with p)"),
                ("out", "also write the report to this file"),
            ],
            run: bounds,
        },
        CommandSpec {
            name: "validate-cf",
            about: "Check that log|E exp(iuY(t))| is linear in t (alpha = 1)",
            keys: with(
                &[
                    ("alpha", "stable index; must be 1"),
                    ("hurst", "Hurst index in (0, 1)"),
                    ("paths", "Monte Carlo replicates (>= 2)"),
                    ("seed", "random seed"),
                    ("u", "frequency [default: 1]"),
                    ("epsilon", "target accuracy [default: 0.1]"),
                    ("threshold", "minimum R^2 [default: 0.99, 0.95 for rwrr]"),
                    ("out", "CSV of t, log|CF|, stderr"),
                ],
                METHOD_KEYS,
            ),
            run: validate_cf,
        },
        CommandSpec {
            name: "stable-check",
            about: "Compare truncated LePage sums with a Chambers-Mallows-Stuck oracle",
            keys: vec![
                ("alpha", "stable index in (0, 2)"),
                ("terms", "series terms per sample"),
                ("samples", "number of series samples"),
                ("seed", "random seed"),
                ("oracle-samples", "oracle draws [default: 10 x samples]"),
                ("threshold", "maximum KS distance [default: 0.02]"),
                ("out", "also write the summary to this file"),
            ],
            run: stable_check,
        },
    ]
}

fn out_path(r: &mut Resolver) -> Result<Option<PathBuf>, CliError> {
    Ok(r.optional::<String>("out")?.map(PathBuf::from))
}

fn method_settings(
    r: &mut Resolver,
    alpha: f64,
    hurst: f64,
    epsilon: f64,
    grid: usize,
) -> Result<(String, MethodSettings), CliError> {
    let method = r.or("method", "series".to_string())?;
    let mut c = SeriesConfig::new(alpha, hurst);
    c.epsilon = epsilon;
    c.horizon = r.or("T", c.horizon)?;
    c.grid_points = r.or("grid", grid)?;
    c.eta = r.or("eta", c.eta)?;
    c.q = r.or("q", c.q)?;
    c.p = r.or("p", c.p)?;
    c.delta = r.or("delta", c.delta)?;
    c.delta_prime = r.or("delta-prime", c.delta_prime)?;
    c.beta = r.or("beta", c.beta)?;
    c.c_p = r.or("c-p", c.c_p)?;
    c.c_k = r.or("c-k", c.c_k)?;
    c.max_points = r.or("max-points", c.max_points)?;
    c.fbm_generator = r.or("fbm", c.fbm_generator.clone())?;
    let mut settings = MethodSettings::new(c);
    settings.rwrr_steps = r.or("steps", settings.rwrr_steps)?;
    Ok((method, settings))
}

fn simulate(s: &Settings) -> Result<Outcome, CliError> {
    let mut r = Resolver::new(s);
    let alpha = r.required("alpha")?;
    let hurst = r.required("hurst")?;
    let epsilon = r.required("epsilon")?;
    let seed: u64 = r.required("seed")?;
    let out = out_path(&mut r)?;
    let (method, settings) = method_settings(&mut r, alpha, hurst, epsilon, SeriesConfig::DEFAULT_GRID)?;
    let prepared = path_methods().get(&method)?.prepare(&settings)?;
    let path = prepared.simulate(&RandomStream::new(seed, 0))?;
    let table = csv(
        &["t", "value"],
        path.times.iter().zip(&path.values).map(|(t, v)| vec![*t, *v]),
    );
    Ok(match out {
        Some(p) => Outcome {
            stdout: String::new(),
            file: Some((p, table)),
            resolved: r.resolved().to_vec(),
            failure: None,
        },
        None => Outcome {
            stdout: table,
            file: None,
            resolved: r.resolved().to_vec(),
            failure: None,
        },
    })
}

fn bounds(s: &Settings) -> Result<Outcome, CliError> {
    let mut r = Resolver::new(s);
    let alpha = r.required("alpha")?;
    let q = r.required("q")?;
    let n: u64 = r.required("N")?;
    let mut req = BoundRequest::new(alpha, q, n);
    req.m_q = r.or("Mq", 1.0)?;
    req.big_p = r.optional("P")?;
    if req.big_p.is_some() {
        req.beta = Some(r.or("beta", 0.0)?);
        req.m_qk = Some(r.or("Mqk", 1.0)?);
    } else if s.get("beta").is_some() || s.get("Mqk").is_some() {
        return Err(CliError::Config("--beta and --Mqk need --P".into()));
    }
    req.p = r.optional("p")?;
    req.vol_k = r.optional("volK")?;
    if req.p.is_some() != req.vol_k.is_some() {
        return Err(CliError::Config("--p and --volK must be given together".into()));
    }
    let out = out_path(&mut r)?;
    let report = BoundReport::compute(&req)?;
    let pairs: Vec<(&str, String)> = report
        .entries()
        .into_iter()
        .map(|(k, v)| (k, rounded(v)))
        .collect();
    let text = key_values(&pairs);
    Ok(Outcome {
        stdout: text.clone(),
        file: out.map(|p| (p, text)),
        resolved: r.resolved().to_vec(),
        failure: None,
    })
}

fn validate_cf(s: &Settings) -> Result<Outcome, CliError> {
    let mut r = Resolver::new(s);
    let alpha: f64 = r.required("alpha")?;
    if alpha != 1.0 {
        return Err(CliError::Config(format!(
            "validate-cf requires --alpha 1 (got {alpha}): the straight-line form exp(C|u|t) of the \
             characteristic function is derived only for alpha = 1"
        )));
    }
    let hurst = r.required("hurst")?;
    let paths: usize = r.required("paths")?;
    if paths < 2 {
        return Err(CliError::Config(format!("--paths must be at least 2 replicates, got {paths}")));
    }
    let seed: u64 = r.required("seed")?;
    let u = r.or("u", 1.0)?;
    let epsilon = r.or("epsilon", SeriesConfig::DEFAULT_EPSILON)?;
    let out = out_path(&mut r)?;
    let (method, settings) = method_settings(&mut r, alpha, hurst, epsilon, 20)?;
    let threshold = r.or("threshold", if method == "rwrr" { 0.95 } else { 0.99 })?;
    let prepared = path_methods().get(&method)?.prepare(&settings)?;
    let samples = monte_carlo(prepared.as_ref(), paths, seed)?;
    let lin = cf_linearity(&samples, u)?;
    let table = csv(
        &["t", "log_abs_cf", "stderr"],
        (0..lin.times.len()).map(|i| vec![lin.times[i], lin.log_modulus[i], lin.log_stderr[i]]),
    );
    let pass = lin.fit.r2 >= threshold;
    let mut summary = vec![("method".to_string(), method.clone())];
    summary.extend(prepared.describe());
    summary.extend([
        ("paths".to_string(), paths.to_string()),
        ("slope".to_string(), exact(lin.fit.slope)),
        ("intercept".to_string(), exact(lin.fit.intercept)),
        ("r2".to_string(), exact(lin.fit.r2)),
        ("threshold".to_string(), exact(threshold)),
        ("status".to_string(), if pass { "pass" } else { "fail" }.to_string()),
    ]);
    let stdout = if out.is_none() {
        format!("{table}{}", key_values(&summary))
    } else {
        key_values(&summary)
    };
    Ok(Outcome {
        stdout,
        file: out.map(|p| (p, table)),
        resolved: r.resolved().to_vec(),
        failure: (!pass).then(|| CliError::Threshold(format!("R^2 = {} below {threshold}", lin.fit.r2))),
    })
}

fn stable_check(s: &Settings) -> Result<Outcome, CliError> {
    let mut r = Resolver::new(s);
    let alpha: f64 = r.required("alpha")?;
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(CliError::Config(format!("--alpha must lie in (0, 2) for the series, got {alpha}")));
    }
    let terms: usize = r.required("terms")?;
    let samples: usize = r.required("samples")?;
    if terms == 0 || samples == 0 {
        return Err(CliError::Config("--terms and --samples must be positive".into()));
    }
    let seed: u64 = r.required("seed")?;
    let oracle_samples: usize = r.or("oracle-samples", 10 * samples)?;
    let threshold = r.or("threshold", 0.02)?;
    let out = out_path(&mut r)?;

    let series: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| lepage_sum(alpha, terms, &mut RandomStream::new(seed, i)))
        .collect::<Result<_, _>>()?;
    let mut oracle_stream = RandomStream::new(seed, u64::MAX);
    let oracle: Vec<f64> = (0..oracle_samples)
        .map(|_| sample_stable(alpha, &mut oracle_stream))
        .collect::<Result<_, _>>()?;
    let scale = fit_scale_by_cf(&series, alpha)?;
    let scaled: Vec<f64> = oracle.iter().map(|x| scale * x).collect();
    let ks = ks_distance(&series, &scaled)?;
    let pass = ks <= threshold;
    let summary = key_values(&[
        ("alpha", exact(alpha)),
        ("terms", terms.to_string()),
        ("samples", samples.to_string()),
        ("oracle_samples", oracle_samples.to_string()),
        ("fitted_scale", exact(scale)),
        ("lepage_scale", exact(lepage_scale(alpha)?)),
        ("ks", exact(ks)),
        ("threshold", exact(threshold)),
        ("status", if pass { "pass" } else { "fail" }.to_string()),
    ]);
    Ok(Outcome {
        stdout: summary.clone(),
        file: out.map(|p| (p, summary)),
        resolved: r.resolved().to_vec(),
        failure: (!pass).then(|| CliError::Threshold(format!("KS distance {ks} above {threshold}"))),
    })
}
