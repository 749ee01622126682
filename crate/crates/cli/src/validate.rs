//! Desk-scale self-check of the numerics.
//!
//! Every check compares an observed quantity with an independently known
//! target. Rate-function checks evaluate the Legendre transform of whatever
//! cumulant the [`CumulantFactory`] hands out, so a broken cumulant can be
//! injected to confirm the suite notices.

use std::io::Write;

use ldp::format::format_g17;
use ldp::*;
use std::result::Result;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::CliError;

/// Builds the cumulant whose Legendre transform the rate checks evaluate.
pub type CumulantFactory = dyn for<'a> Fn(&'a Model) -> Box<dyn ConvexCumulant<f64> + 'a> + Sync;

pub fn nominal_cumulant(model: &Model) -> Box<dyn ConvexCumulant<f64> + '_> {
    Box::new(model.clone())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub target: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(check: &str, target: f64, observed: f64, tolerance: f64) -> Self {
        let passed = observed == target || (observed - target).abs() <= tolerance;
        Self { check: check.to_owned(), target, observed, tolerance, passed }
    }

    fn from_result(check: &str, target: f64, tolerance: f64, observed: Result<f64, LdpError>) -> Self {
        Self::new(check, target, observed.unwrap_or(f64::NAN), tolerance)
    }
}

fn exp_model(r: f64) -> Model {
    Model::new(r, Marks::exponential(1.0).unwrap()).unwrap()
}

fn max_abs(errors: impl Iterator<Item = Result<f64, LdpError>>) -> Result<f64, LdpError> {
    let mut worst = 0.0f64;
    for e in errors {
        let e = e?;
        // NaN must not vanish in the max
        worst = if e.is_nan() { f64::NAN } else { worst.max(e) };
    }
    Ok(worst)
}

fn transform(factory: &CumulantFactory, model: &Model, u: f64) -> Result<RateResult, LdpError> {
    legendre_transform(&*factory(model), u, &Solver::default())
}

fn oracle_models() -> Vec<(Model, f64)> {
    let exp = |m| Marks::exponential(m).unwrap();
    vec![
        (Model::new(1.0, exp(1.0)).unwrap(), 3.0),
        (Model::new(2.0, exp(0.5)).unwrap(), 0.4),
        (Model::new(0.7, Marks::gamma(2.5, 0.8).unwrap()).unwrap(), 2.5),
        (Model::new(1.5, Marks::point_mass(2.0).unwrap()).unwrap(), 1.0),
        (Model::new(1.0, Marks::zero_inflated(0.4, exp(1.0)).unwrap()).unwrap(), 1.8),
        (Model::new(3.0, Marks::empirical(vec![0.0, 0.5, 2.0], vec![0.2, 0.5, 0.3]).unwrap()).unwrap(), 0.9),
    ]
}

/// Runs every check; `seed` offsets the seeds of the statistical ones.
pub fn run_checks(factory: &CumulantFactory, par: Parallelism, seed: u64) -> Vec<CheckOutcome> {
    let solver = Solver::default();
    let plan = |n: u64, k: u64| SamplingPlan::new(n, seed.wrapping_add(k)).with_parallelism(par);
    let mut checks = Vec::new();

    let continuous = max_abs([0.5, 1.0, 2.0].into_iter().flat_map(|r| {
        let m = exp_model(r);
        (1..=80).map(move |i| {
            let u = 0.05 * i as f64;
            Ok((transform(factory, &m, u)?.value - closed_form_rate_exp_continuous(r, u)).abs())
        })
    }));
    checks.push(CheckOutcome::from_result("rate_continuous_closed_form", 0.0, 1e-8, continuous));
    checks.push(CheckOutcome::from_result(
        "rate_continuous_at_zero",
        2.0,
        0.0,
        transform(factory, &exp_model(2.0), 0.0).map(|r| r.value),
    ));

    let marks = Marks::exponential(1.0).unwrap();
    let discrete = max_abs((1..=40).map(|i| {
        let u = 0.1 * i as f64;
        Ok((rate_function_discrete(&marks, u, &solver)?.value - closed_form_rate_exp_discrete(u)).abs())
    }));
    checks.push(CheckOutcome::from_result("rate_discrete_closed_form", 0.0, 1e-8, discrete));
    checks.push(CheckOutcome::from_result(
        "rate_discrete_at_zero",
        f64::INFINITY,
        0.0,
        rate_function_discrete(&marks, 0.0, &solver).map(|r| r.value),
    ));

    let brute = max_abs(oracle_models().into_iter().map(|(m, u)| {
        let res = transform(factory, &m, u)?;
        let centre = res.lambda_star.unwrap_or(0.0);
        let hi = (centre + 2.0).min(m.lambda_max() - 1e-9);
        let grid = linear_grid(centre - 2.0, hi, 100_001);
        Ok((res.value - brute_force_rate(&m, u, &grid)?).abs())
    }));
    checks.push(CheckOutcome::from_result("rate_brute_force_oracle", 0.0, 1e-6, brute));

    let m = exp_model(1.0);
    let exact = (-5.0f64).exp();
    checks.push(CheckOutcome::from_result(
        "zero_probability_exact",
        exact,
        1e-15 * exact,
        zero_probability(&m, 5.0).map(|e| e.p_hat),
    ));
    let n = 100_000;
    let sigma = (exact * (1.0 - exact) / n as f64).sqrt();
    checks.push(CheckOutcome::from_result(
        "zero_probability_mc",
        exact,
        4.0 * sigma,
        Window::new(0.0, f64::MIN_POSITIVE).and_then(|w| mc_probability(&m, &w, 5.0, &plan(n, 1))).map(|e| e.p_hat),
    ));

    let laplace_target = (2.0f64 * 0.3 / 0.7).exp();
    match empirical_laplace(&m, 0.3, 2.0, &plan(n, 2)) {
        Ok(est) => checks.push(CheckOutcome::new("laplace_transform_mc", laplace_target, est.mean, 4.0 * est.std_err)),
        Err(e) => checks.push(CheckOutcome::from_result("laplace_transform_mc", laplace_target, 0.0, Err(e))),
    }

    match path_moments(&m, 0.5, 50.0, &plan(20_000, 3)) {
        Ok(pm) => {
            checks.push(CheckOutcome::new("tilted_mean", 4.0, pm.mean, 4.0 * pm.mean_std_err));
            checks.push(CheckOutcome::new("tilted_variance", 0.32, pm.variance, 0.05 * 0.32));
        }
        Err(e) => checks.push(CheckOutcome::from_result("tilted_mean", 4.0, 0.0, Err(e))),
    }

    match likelihood_ratio_mean(&m, 0.3, 5.0, &plan(n, 4)) {
        Ok(est) => checks.push(CheckOutcome::new("likelihood_ratio_mean", 1.0, est.mean, 4.0 * est.std_err)),
        Err(e) => checks.push(CheckOutcome::from_result("likelihood_ratio_mean", 1.0, 0.0, Err(e))),
    }

    let window = Window::new(4.0, 0.1).unwrap();
    let is = is_probability(&m, &window, 50.0, &plan(20_000, 5));
    checks.push(CheckOutcome::from_result(
        "importance_sampling_log_decay",
        closed_form_rate_exp_continuous(1.0, 4.0),
        0.1,
        is.clone().map(|e| e.log_decay.unwrap_or(f64::INFINITY)),
    ));
    let rerun = is_probability(&m, &window, 50.0, &SamplingPlan::new(20_000, seed.wrapping_add(5)).with_parallelism(Parallelism::with_workers(3)));
    checks.push(CheckOutcome::from_result(
        "worker_count_invariance",
        0.0,
        0.0,
        is.and_then(|a| rerun.map(|b| (a.p_hat - b.p_hat).abs() + (a.std_err - b.std_err).abs())),
    ));

    checks.push(CheckOutcome::from_result(
        "chernoff_bound",
        (-4.0f64).exp(),
        1e-12,
        chernoff_tail_bound(&m, 10.0, 1.0, Some(0.5)),
    ));

    checks
}

pub fn write_report(checks: &[CheckOutcome], format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            let mut s = String::from("check,target,observed,tolerance,status\n");
            for c in checks {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    c.check,
                    format_g17(c.target),
                    format_g17(c.observed),
                    format_g17(c.tolerance),
                    if c.passed { "pass" } else { "fail" }
                ));
            }
            out.write_all(s.as_bytes())
        }
        Format::Json => {
            // JSON has no infinity or NaN
            let records: Vec<_> = checks
                .iter()
                .map(|c| {
                    let num = |x: f64| {
                        if x.is_finite() {
                            serde_json::json!(x)
                        } else {
                            serde_json::json!(format_g17(x))
                        }
                    };
                    serde_json::json!({
                        "check": c.check,
                        "target": num(c.target),
                        "observed": num(c.observed),
                        "tolerance": num(c.tolerance),
                        "passed": c.passed,
                    })
                })
                .collect();
            let mut text = serde_json::to_string_pretty(&records)?;
            text.push('\n');
            out.write_all(text.as_bytes())
        }
    }
}

pub fn cmd_validate_with(
    cfg: &RunConfig,
    factory: &CumulantFactory,
    out: &mut dyn Write,
    diag: &mut dyn Write,
) -> Result<(), CliError> {
    let checks = run_checks(factory, cfg.parallelism(), cfg.seed());
    let io = |e| CliError::Io("write failed".into(), e);
    write_report(&checks, cfg.format.unwrap_or(Format::Csv), out).map_err(io)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(diag, "{} checks, {} failed", checks.len(), failed).map_err(io)?;
    if failed > 0 {
        Err(CliError::ChecksFailed(failed))
    } else {
        Ok(())
    }
}
