use std::io::Write;

use ldp::format::format_g17;
use ldp::stats::RunningStats;
use ldp::*;
use std::result::Result;
use serde::Serialize;
use serde_json::json;

use crate::config::{parse_u_grid, Format, Method, RunConfig};
use crate::error::CliError;

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io("write failed".into(), e)
}

fn g17_opt(x: Option<f64>) -> String {
    x.map(format_g17).unwrap_or_default()
}

/// Whether the unit-mean exponential closed forms apply.
fn is_unit_exponential(marks: &Marks) -> bool {
    matches!(marks.family(), Family::Exponential { mean } if *mean == 1.0)
}

/// Rate-function table over the `--u-grid`.
pub fn cmd_rate(cfg: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> Result<(), CliError> {
    let grid = parse_u_grid(cfg.u_grid.as_deref().ok_or_else(|| CliError::Usage("missing required setting --u-grid".into()))?)?;
    let discrete = cfg.discrete.unwrap_or(false);
    let solver = Solver::default();
    let marks = cfg.marks()?;
    let model = if discrete { None } else { Some(cfg.model()?) };
    let oracle = cfg.closed_form.unwrap_or(false) && is_unit_exponential(&marks);
    if cfg.closed_form.unwrap_or(false) && !oracle {
        writeln!(diag, "note: no closed form for {}; oracle column omitted", cfg.dist.as_deref().unwrap_or(""))
            .map_err(io_err)?;
    }
    let r = model.as_ref().map_or(1.0, |m| m.rate());

    let mut rows = Vec::with_capacity(grid.len());
    for &u in &grid {
        let res = match &model {
            Some(m) => rate_function(m, u, &solver)?,
            None => rate_function_discrete(&marks, u, &solver)?,
        };
        let closed = oracle.then(|| {
            if discrete {
                closed_form_rate_exp_discrete(u)
            } else {
                closed_form_rate_exp_continuous(r, u)
            }
        });
        rows.push((res, closed));
    }

    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("u,I,lambda_star,branch");
            if oracle {
                s.push_str(",I_closed_form");
            }
            s.push('\n');
            for (res, closed) in &rows {
                let lambda = if res.branch == RateBranch::Interior { res.lambda_star } else { None };
                s.push_str(&format!(
                    "{},{},{},{}",
                    format_g17(res.u),
                    format_g17(res.value),
                    g17_opt(lambda),
                    res.branch.as_str()
                ));
                if let Some(c) = closed {
                    s.push(',');
                    s.push_str(&format_g17(*c));
                }
                s.push('\n');
            }
            out.write_all(s.as_bytes()).map_err(io_err)
        }
        Format::Json => {
            let records: Vec<_> = rows
                .iter()
                .map(|(res, closed)| {
                    let lambda = if res.branch == RateBranch::Interior { res.lambda_star } else { None };
                    let mut rec = json!({
                        "u": res.u,
                        "I": finite_or_string(res.value),
                        "lambda_star": lambda,
                        "branch": res.branch.as_str(),
                    });
                    if let Some(c) = closed {
                        rec["I_closed_form"] = finite_or_string(*c);
                    }
                    rec
                })
                .collect();
            write_json(out, &records)
        }
    }
}

/// JSON has no infinity; non-finite values are written as strings.
fn finite_or_string(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(format_g17(x))
    }
}

fn write_json<S: Serialize + ?Sized>(out: &mut dyn Write, value: &S) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io("json".into(), e.into()))?;
    text.push('\n');
    out.write_all(text.as_bytes()).map_err(io_err)
}

pub const DEFAULT_SIMULATE_PATHS: u64 = 1;

/// Path dump to `out`, summary line to `diag`.
pub fn cmd_simulate(cfg: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> Result<(), CliError> {
    if cfg.format == Some(Format::Json) {
        return Err(CliError::Usage("simulate writes csv only".into()));
    }
    let model = cfg.model()?;
    let t = cfg.require_t()?;
    let n = cfg.paths.unwrap_or(DEFAULT_SIMULATE_PATHS);
    if n == 0 {
        return Err(CliError::Usage("--paths must be at least 1".into()));
    }
    let paths = simulate_paths(&model, t, n, cfg.seed(), &cfg.parallelism())?;

    let mut buf = Vec::new();
    write_paths_csv(&mut buf, &paths).map_err(io_err)?;
    out.write_all(&buf).map_err(io_err)?;

    let mut s_t = RunningStats::default();
    let mut jumps = RunningStats::default();
    for p in &paths {
        s_t.push(p.s_t());
        jumps.push(p.jump_count() as f64);
    }
    writeln!(
        diag,
        "paths={} t={} mean_s_t={} mean_jumps={} jumps_std_err={}",
        n,
        format_g17(t),
        format_g17(s_t.mean()),
        format_g17(jumps.mean()),
        format_g17(jumps.std_err())
    )
    .map_err(io_err)
}

/// One estimation result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateRecord {
    pub method: &'static str,
    pub u: Option<f64>,
    pub delta: Option<f64>,
    pub t: f64,
    pub n: u64,
    pub seed: Option<u64>,
    pub p_hat: f64,
    pub std_err: f64,
    pub log_decay: Option<f64>,
}

pub fn run_estimate(cfg: &RunConfig) -> Result<EstimateRecord, CliError> {
    let method = cfg.method.ok_or_else(|| CliError::Usage("missing required setting --method".into()))?;
    let model = cfg.model()?;
    let t = cfg.require_t()?;
    let plan = SamplingPlan::new(cfg.paths(), cfg.seed()).with_parallelism(cfg.parallelism());
    let from = |name: &'static str, u: Option<f64>, delta: Option<f64>, seed: Option<u64>, e: Estimate| EstimateRecord {
        method: name,
        u,
        delta,
        t,
        n: e.n_paths,
        seed,
        p_hat: e.p_hat,
        std_err: e.std_err,
        log_decay: e.log_decay,
    };
    Ok(match method {
        Method::Mc | Method::Is => {
            let u = cfg.require(cfg.u, "u")?;
            let delta = cfg.require(cfg.delta, "delta")?;
            let window = Window::new(u, delta)?;
            if method == Method::Mc {
                from("mc", Some(u), Some(delta), Some(plan.seed), mc_probability(&model, &window, t, &plan)?)
            } else {
                from("is", Some(u), Some(delta), Some(plan.seed), is_probability(&model, &window, t, &plan)?)
            }
        }
        Method::Zero => from("zero", Some(0.0), Some(0.0), None, zero_probability(&model, t)?),
        Method::Chernoff => {
            let j = cfg.require(cfg.j, "j")?;
            let bound = chernoff_tail_bound(&model, j, t, cfg.lambda)?;
            EstimateRecord {
                method: "chernoff",
                u: Some(j),
                delta: None,
                t,
                n: 0,
                seed: None,
                p_hat: bound,
                std_err: 0.0,
                log_decay: (bound > 0.0).then(|| 0.0 - bound.ln() / t),
            }
        }
        Method::Laplace => {
            let lambda = cfg.require(cfg.lambda, "lambda")?;
            let m = empirical_laplace(&model, lambda, t, &plan)?;
            EstimateRecord {
                method: "laplace",
                u: None,
                delta: None,
                t,
                n: m.n,
                seed: Some(plan.seed),
                p_hat: m.mean,
                std_err: m.std_err,
                log_decay: None,
            }
        }
    })
}

pub fn cmd_estimate(cfg: &RunConfig, out: &mut dyn Write, _diag: &mut dyn Write) -> Result<(), CliError> {
    let rec = run_estimate(cfg)?;
    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => write_json(out, &rec),
        Format::Csv => {
            let row = format!(
                "method,u,delta,t,n,seed,p_hat,std_err,log_decay\n{},{},{},{},{},{},{},{},{}\n",
                rec.method,
                g17_opt(rec.u),
                g17_opt(rec.delta),
                format_g17(rec.t),
                rec.n,
                rec.seed.map(|s| s.to_string()).unwrap_or_default(),
                format_g17(rec.p_hat),
                format_g17(rec.std_err),
                g17_opt(rec.log_decay)
            );
            out.write_all(row.as_bytes()).map_err(io_err)
        }
    }
}
