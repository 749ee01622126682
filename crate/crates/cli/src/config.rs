//! Flat `key=value` run configuration.
//!
//! Keys are the long flag names (`u-grid` and `u_grid` are both accepted).
//! Blank lines and lines starting with `#` are ignored. Values given on the
//! command line win over values from the file, which win over the defaults
//! below.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::ValueEnum;
use ldp::format::format_g17;
use ldp::{Marks, Model, Parallelism};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_RATE: f64 = 1.0;
pub const DEFAULT_PATHS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Crude Monte Carlo estimate of P(|S_t − u| ≤ δ).
    Mc,
    /// Importance sampling under the exponential tilt.
    Is,
    /// Exact probability that S_t = 0.
    Zero,
    /// Chernoff bound on P(S_t > j).
    Chernoff,
    /// Monte Carlo estimate of E exp(λ t S_t).
    Laplace,
}

fn value_name<V: ValueEnum>(v: &V) -> String {
    v.to_possible_value().map(|p| p.get_name().to_owned()).unwrap_or_default()
}

/// Every setting a command may read. `None` means "not given".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub dist: Option<String>,
    pub rate: Option<f64>,
    pub u_grid: Option<String>,
    pub discrete: Option<bool>,
    pub closed_form: Option<bool>,
    pub t: Option<f64>,
    pub paths: Option<u64>,
    pub seed: Option<u64>,
    pub method: Option<Method>,
    pub u: Option<f64>,
    pub delta: Option<f64>,
    pub j: Option<f64>,
    pub lambda: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub workers: Option<usize>,
}

fn parse_value<V: std::str::FromStr>(key: &str, value: &str) -> Result<V, CliError> {
    value.parse().map_err(|_| CliError::Usage(format!("invalid value '{value}' for key '{key}'")))
}

fn parse_enum<V: ValueEnum>(key: &str, value: &str) -> Result<V, CliError> {
    V::from_str(value, true).map_err(|_| CliError::Usage(format!("invalid value '{value}' for key '{key}'")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value, got '{line}'", n + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key.replace('-', "_").as_str() {
            "dist" => self.dist = Some(value.to_owned()),
            "rate" => self.rate = Some(parse_value(key, value)?),
            "u_grid" => self.u_grid = Some(value.to_owned()),
            "discrete" => self.discrete = Some(parse_value(key, value)?),
            "closed_form" => self.closed_form = Some(parse_value(key, value)?),
            "t" => self.t = Some(parse_value(key, value)?),
            "paths" => self.paths = Some(parse_value(key, value)?),
            "seed" => self.seed = Some(parse_value(key, value)?),
            "method" => self.method = Some(parse_enum(key, value)?),
            "u" => self.u = Some(parse_value(key, value)?),
            "delta" => self.delta = Some(parse_value(key, value)?),
            "j" => self.j = Some(parse_value(key, value)?),
            "lambda" => self.lambda = Some(parse_value(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = Some(parse_enum(key, value)?),
            "workers" => self.workers = Some(parse_value(key, value)?),
            _ => return Err(CliError::Usage(format!("unknown config key '{key}'"))),
        }
        Ok(())
    }

    /// Serializes the given settings, one `key=value` per line, in a form
    /// [`RunConfig::parse`] reads back unchanged.
    pub fn to_kv_string(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        let num = |x: f64| format_g17(x);
        if let Some(v) = &self.dist {
            put("dist", v.clone());
        }
        if let Some(v) = self.rate {
            put("rate", num(v));
        }
        if let Some(v) = &self.u_grid {
            put("u-grid", v.clone());
        }
        if let Some(v) = self.discrete {
            put("discrete", v.to_string());
        }
        if let Some(v) = self.closed_form {
            put("closed-form", v.to_string());
        }
        if let Some(v) = self.t {
            put("t", num(v));
        }
        if let Some(v) = self.paths {
            put("paths", v.to_string());
        }
        if let Some(v) = self.seed {
            put("seed", v.to_string());
        }
        if let Some(v) = &self.method {
            put("method", value_name(v));
        }
        if let Some(v) = self.u {
            put("u", num(v));
        }
        if let Some(v) = self.delta {
            put("delta", num(v));
        }
        if let Some(v) = self.j {
            put("j", num(v));
        }
        if let Some(v) = self.lambda {
            put("lambda", num(v));
        }
        if let Some(v) = &self.out {
            put("out", v.display().to_string());
        }
        if let Some(v) = &self.format {
            put("format", value_name(v));
        }
        if let Some(v) = self.workers {
            put("workers", v.to_string());
        }
        s
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: RunConfig) -> RunConfig {
        RunConfig {
            dist: over.dist.or(self.dist),
            rate: over.rate.or(self.rate),
            u_grid: over.u_grid.or(self.u_grid),
            discrete: over.discrete.or(self.discrete),
            closed_form: over.closed_form.or(self.closed_form),
            t: over.t.or(self.t),
            paths: over.paths.or(self.paths),
            seed: over.seed.or(self.seed),
            method: over.method.or(self.method),
            u: over.u.or(self.u),
            delta: over.delta.or(self.delta),
            j: over.j.or(self.j),
            lambda: over.lambda.or(self.lambda),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
            workers: over.workers.or(self.workers),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn paths(&self) -> u64 {
        self.paths.unwrap_or(DEFAULT_PATHS)
    }

    pub fn parallelism(&self) -> Parallelism {
        match self.workers {
            Some(w) => Parallelism::with_workers(w),
            None => Parallelism::default(),
        }
    }

    pub fn marks(&self) -> Result<Marks, CliError> {
        let spec = self.dist.as_deref().ok_or_else(|| missing("dist"))?;
        Ok(Marks::parse_spec(spec)?)
    }

    pub fn model(&self) -> Result<Model, CliError> {
        Ok(Model::new(self.rate.unwrap_or(DEFAULT_RATE), self.marks()?)?)
    }

    pub fn require_t(&self) -> Result<f64, CliError> {
        self.t.ok_or_else(|| missing("t"))
    }

    pub fn require(&self, value: Option<f64>, key: &str) -> Result<f64, CliError> {
        value.ok_or_else(|| missing(key))
    }
}

fn missing(key: &str) -> CliError {
    CliError::Usage(format!("missing required setting --{key}"))
}

/// A `start:stop:step` grid with `start ≥ 0`, `stop ≥ start`, `step > 0`.
///
/// Points are computed in scaled integers when every token is a short decimal,
/// so `0:4:0.05` yields exactly the doubles nearest to `0.05 k`.
pub fn parse_u_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |token: &str, why: &str| CliError::Usage(format!("u-grid '{spec}': {why} ('{token}')"));
    let tokens: Vec<&str> = spec.split(':').map(str::trim).collect();
    if tokens.len() != 3 {
        return Err(bad(spec, "expected start:stop:step"));
    }
    let mut nums = [0.0f64; 3];
    for (slot, token) in nums.iter_mut().zip(&tokens) {
        *slot = token.parse().map_err(|_| bad(token, "not a number"))?;
        if !slot.is_finite() {
            return Err(bad(token, "not finite"));
        }
    }
    let [start, stop, step] = nums;
    if start < 0.0 {
        return Err(bad(tokens[0], "start must be nonnegative"));
    }
    if stop < start {
        return Err(bad(tokens[1], "stop must not be below start"));
    }
    if step <= 0.0 {
        return Err(bad(tokens[2], "step must be positive"));
    }
    let count = ((stop - start) / step * (1.0 + 1e-12)).floor() as u64 + 1;
    if count > 100_000_000 {
        return Err(bad(tokens[2], "grid too large"));
    }
    let decimals = tokens.iter().map(|t| decimal_places(t)).max().unwrap_or(None);
    Ok(match decimals {
        Some(d) if d <= 9 => {
            let scale = 10f64.powi(d as i32);
            let (a, s) = ((start * scale).round(), (step * scale).round());
            (0..count).map(|i| (a + s * i as f64) / scale).collect()
        }
        _ => (0..count).map(|i| start + step * i as f64).collect(),
    })
}

/// Digits after the point of a plain decimal literal; `None` for exponent forms.
fn decimal_places(token: &str) -> Option<usize> {
    if token.contains(['e', 'E']) {
        return None;
    }
    Some(token.split_once('.').map_or(0, |(_, frac)| frac.len()))
}
