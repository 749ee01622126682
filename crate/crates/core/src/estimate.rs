//! Rare-event estimators and large-deviation diagnostics.
//!
//! The central quantity is `P(|S_t − u| ≤ δ)`, whose exponential decay rate in
//! `t` is the rate function `I(u)` as `δ → 0`. Crude Monte Carlo sees nothing
//! once the probability drops below `1/n`; importance sampling under the
//! exponentially tilted law turns the event into a typical one and reweights
//! each hit by `𝔏_t(λ)^{-1} = exp(−λ tS_t + t g_c(λ))`.
//!
//! Every estimator is a deterministic function of its inputs and the seed,
//! independent of the worker count (see [`crate::parallel`]).

use serde::Serialize;

use crate::cumulant::{check_horizon, CompoundPoissonModel};
use crate::error::{LdpError, Result};
use crate::parallel::{fold_paths, path_rng, Parallelism};
use crate::rate::{solve_tilt, SolverConfig, TiltSolution};
use crate::scalar::Real;
use crate::simulate::{log_likelihood_ratio_of_total, simulate_summary};
use crate::stats::RunningStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMethod {
    CrudeMc,
    ImportanceSampling,
    Exact,
}

/// Number of paths, master seed and workers for a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingPlan {
    pub paths: u64,
    pub seed: u64,
    pub parallelism: Parallelism,
}

impl SamplingPlan {
    pub fn new(paths: u64, seed: u64) -> Self {
        Self { paths, seed, parallelism: Parallelism::default() }
    }

    pub fn with_parallelism(mut self, parallelism: Parallelism) -> Self {
        self.parallelism = parallelism;
        self
    }

    fn check(&self) -> Result<()> {
        if self.paths == 0 {
            Err(LdpError::Usage("need at least one path".into()))
        } else {
            Ok(())
        }
    }
}

/// The event `{|S_t − u| ≤ δ}` (closed window).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventWindow<T> {
    u: T,
    delta: T,
}

impl<T: Real> EventWindow<T> {
    pub fn new(u: T, delta: T) -> Result<Self> {
        if !(u >= T::zero() && u.is_finite()) {
            return Err(LdpError::Usage(format!("window centre must be finite and nonnegative, got {u}")));
        }
        if !(delta > T::zero() && delta.is_finite()) {
            return Err(LdpError::Usage(format!("window half-width must be positive and finite, got {delta}")));
        }
        Ok(Self { u, delta })
    }

    pub fn u(&self) -> T {
        self.u
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn contains(&self, s: T) -> bool {
        (s - self.u).abs() <= self.delta
    }

    /// Point of the window (intersected with `[0, ∞)`) closest to `x`.
    pub fn nearest_point(&self, x: T) -> T {
        x.max((self.u - self.delta).max(T::zero())).min(self.u + self.delta)
    }
}

/// A probability estimate together with its finite-`t` decay rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateResult<T> {
    /// Not clamped to `[0, 1]`: importance-sampling noise is reported as is.
    pub p_hat: T,
    pub std_err: T,
    pub n_paths: u64,
    pub method: EstimateMethod,
    /// `−(1/t) log p̂`; absent when `p̂ = 0`.
    pub log_decay: Option<T>,
    /// Delta-method error `std_err / (t p̂)`; absent when `p̂ = 0`.
    pub log_decay_std_err: Option<T>,
    pub t: T,
}

impl<T: Real> EstimateResult<T> {
    fn new(p_hat: T, std_err: T, n_paths: u64, method: EstimateMethod, t: T) -> Self {
        let (log_decay, log_decay_std_err) = if p_hat > T::zero() {
            (Some(T::zero() - p_hat.ln() / t), Some(std_err / (t * p_hat)))
        } else {
            (None, None)
        };
        Self { p_hat, std_err, n_paths, method, log_decay, log_decay_std_err, t }
    }

    /// Relative standard error `std_err / p̂`; infinite when `p̂ = 0`.
    pub fn relative_error(&self) -> T {
        if self.p_hat > T::zero() {
            self.std_err / self.p_hat
        } else {
            T::infinity()
        }
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanEstimate<T> {
    pub mean: T,
    pub std_err: T,
    pub n: u64,
}

impl<T: Real> From<RunningStats<T>> for MeanEstimate<T> {
    fn from(s: RunningStats<T>) -> Self {
        Self { mean: s.mean(), std_err: s.std_err(), n: s.count() }
    }
}

/// Mean and variance of `S_t` over simulated paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathMoments<T> {
    pub mean: T,
    pub variance: T,
    pub mean_std_err: T,
    pub n: u64,
}

/// Folds `value(path total)` over paths of `model`.
fn accumulate<T: Real>(
    model: &CompoundPoissonModel<T>,
    t: T,
    plan: &SamplingPlan,
    value: impl Fn(T) -> Result<T> + Sync + Send,
) -> Result<RunningStats<T>> {
    check_horizon(t)?;
    plan.check()?;
    fold_paths(
        plan.paths,
        &plan.parallelism,
        RunningStats::default,
        |acc, i| {
            let s = simulate_summary(model, t, &mut path_rng(plan.seed, i))?;
            acc.push(value(s.total)?);
            Ok(())
        },
        RunningStats::merge,
    )
}

fn crude<T: Real>(
    model: &CompoundPoissonModel<T>,
    t: T,
    plan: &SamplingPlan,
    event: impl Fn(T) -> bool + Sync + Send,
) -> Result<EstimateResult<T>> {
    check_horizon(t)?;
    plan.check()?;
    let hits = fold_paths(
        plan.paths,
        &plan.parallelism,
        || 0u64,
        |acc, i| {
            let s = simulate_summary(model, t, &mut path_rng(plan.seed, i))?;
            if event(s.total / t) {
                *acc += 1;
            }
            Ok(())
        },
        |a, b| a + b,
    )?;
    let n = T::lit(plan.paths as f64);
    let p = T::lit(hits as f64) / n;
    let std_err = (p * (T::one() - p) / n).sqrt();
    Ok(EstimateResult::new(p, std_err, plan.paths, EstimateMethod::CrudeMc, t))
}

/// Crude Monte Carlo frequency of `{|S_t − u| ≤ δ}`.
pub fn mc_probability<T: Real>(
    model: &CompoundPoissonModel<T>,
    window: &EventWindow<T>,
    t: T,
    plan: &SamplingPlan,
) -> Result<EstimateResult<T>> {
    let w = *window;
    crude(model, t, plan, move |s| w.contains(s))
}

/// Crude Monte Carlo frequency of `{S_t > j}`.
pub fn mc_tail_probability<T: Real>(
    model: &CompoundPoissonModel<T>,
    j: T,
    t: T,
    plan: &SamplingPlan,
) -> Result<EstimateResult<T>> {
    crude(model, t, plan, move |s| s > j)
}

/// Where the importance sampler centres the tilted law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiltTarget {
    /// The window point closest to the process mean (the dominating point).
    /// No tilt at all when the window already contains the mean.
    #[default]
    NearestToMean,
    /// The window centre `u`.
    Center,
}

/// Tilt parameter used by [`is_probability`] for `window`.
pub fn importance_tilt<T: Real>(
    model: &CompoundPoissonModel<T>,
    window: &EventWindow<T>,
    target: TiltTarget,
) -> Result<T> {
    let mean = model.mean();
    let aim = match target {
        TiltTarget::NearestToMean => window.nearest_point(mean),
        TiltTarget::Center => window.u(),
    };
    if aim == mean {
        return Ok(T::zero());
    }
    match solve_tilt(model, aim, &SolverConfig::default())? {
        TiltSolution::Root { lambda, .. } => Ok(lambda),
        TiltSolution::BelowFloor { floor } => Ok(floor),
        TiltSolution::AboveRange { u_max } => Err(LdpError::OutOfRange {
            u: aim.to_f64_lossy(),
            u_min: 0.0,
            u_max: u_max.to_f64_lossy(),
        }),
        TiltSolution::BelowRange { u_min } => Err(LdpError::OutOfRange {
            u: aim.to_f64_lossy(),
            u_min: u_min.to_f64_lossy(),
            u_max: f64::INFINITY,
        }),
    }
}

/// Importance-sampling estimate of `{|S_t − u| ≤ δ}` with the tilt chosen by
/// [`TiltTarget::NearestToMean`].
pub fn is_probability<T: Real>(
    model: &CompoundPoissonModel<T>,
    window: &EventWindow<T>,
    t: T,
    plan: &SamplingPlan,
) -> Result<EstimateResult<T>> {
    if !(window.u() > T::zero()) {
        return Err(LdpError::Usage("importance sampling needs a window centre u > 0".into()));
    }
    let lambda = importance_tilt(model, window, TiltTarget::NearestToMean)?;
    is_probability_with_tilt(model, window, t, plan, lambda)
}

/// Importance-sampling estimate of `{|S_t − u| ≤ δ}` under the law tilted by
/// `lambda`: the mean of `1{|S_t − u| ≤ δ} · exp(−log 𝔏_t(λ))` over tilted
/// paths.
pub fn is_probability_with_tilt<T: Real>(
    model: &CompoundPoissonModel<T>,
    window: &EventWindow<T>,
    t: T,
    plan: &SamplingPlan,
    lambda: T,
) -> Result<EstimateResult<T>> {
    let tilted = model.tilted(lambda)?;
    let w = *window;
    let stats = accumulate(&tilted, t, plan, |total| {
        if w.contains(total / t) {
            Ok((-log_likelihood_ratio_of_total(model, lambda, total, t)?).exp())
        } else {
            Ok(T::zero())
        }
    })?;
    Ok(EstimateResult::new(
        stats.mean(),
        stats.std_err(),
        plan.paths,
        EstimateMethod::ImportanceSampling,
        t,
    ))
}

/// Exact `P(S_t = 0) = P(π_t = 0) = exp(−t r [1 − G(0+)])`: no positive jump
/// up to `t`, the count of positive jumps being Poisson with rate `r[1 − G(0+)]`.
pub fn zero_probability<T: Real>(model: &CompoundPoissonModel<T>, t: T) -> Result<EstimateResult<T>> {
    check_horizon(t)?;
    let rate = model.positive_jump_rate();
    Ok(EstimateResult {
        p_hat: (-t * rate).exp(),
        std_err: T::zero(),
        n_paths: 0,
        method: EstimateMethod::Exact,
        log_decay: Some(rate),
        log_decay_std_err: Some(T::zero()),
        t,
    })
}

/// Chernoff bound `P(S_t > j) ≤ min(1, exp(t(−λj + g_c(λ))))`.
///
/// Without an explicit `λ`, uses `Λ/2` when `Λ` is finite and the optimal
/// `λ*(j)` (giving `exp(−t I(j))`) otherwise.
pub fn chernoff_tail_bound<T: Real>(
    model: &CompoundPoissonModel<T>,
    j: T,
    t: T,
    lambda: Option<T>,
) -> Result<T> {
    check_horizon(t)?;
    if !(j > T::zero() && j.is_finite()) {
        return Err(LdpError::Usage(format!("tail level must be positive and finite, got {j}")));
    }
    let lambda_max = model.lambda_max();
    let lambda = match lambda {
        Some(l) => {
            if !(l > T::zero() && l < lambda_max) {
                return Err(LdpError::Usage(format!(
                    "Chernoff parameter must lie in (0, {lambda_max}), got {l}"
                )));
            }
            l
        }
        None if lambda_max.is_finite() => T::lit(0.5) * lambda_max,
        None => match solve_tilt(model, j, &SolverConfig::default())? {
            TiltSolution::Root { lambda, .. } if lambda > T::zero() => lambda,
            // j at or below the mean: no positive tilt improves on 1
            TiltSolution::Root { .. } | TiltSolution::BelowFloor { .. } | TiltSolution::BelowRange { .. } => {
                return Ok(T::one())
            }
            // j above every attainable mean: the exponent runs to −∞
            TiltSolution::AboveRange { .. } => return Ok(T::zero()),
        },
    };
    let exponent = t * (model.cumulant(lambda)? - lambda * j);
    Ok(exponent.exp().min(T::one()))
}

/// Monte Carlo mean of `exp(λ tS_t)` over nominal paths, the empirical
/// counterpart of `exp(t g_c(λ))`.
///
/// Requires `2λ < Λ`; beyond that the estimator has infinite variance.
pub fn empirical_laplace<T: Real>(
    model: &CompoundPoissonModel<T>,
    lambda: T,
    t: T,
    plan: &SamplingPlan,
) -> Result<MeanEstimate<T>> {
    let lambda_max = model.lambda_max();
    if lambda.is_nan() || (lambda_max.is_finite() && !(lambda + lambda < lambda_max)) {
        return Err(LdpError::Usage(format!(
            "empirical Laplace transform needs lambda < Λ/2 = {} so that exp(λ tS_t) has finite variance, got {lambda}",
            T::lit(0.5) * lambda_max
        )));
    }
    let est: MeanEstimate<T> = accumulate(model, t, plan, |total| Ok((lambda * total).exp()))?.into();
    if !(est.mean.is_finite() && est.std_err.is_finite()) {
        return Err(LdpError::NonFinite("empirical Laplace transform"));
    }
    Ok(est)
}

/// Mean of `𝔏_t(λ) = exp(λ tS_t − t g_c(λ))` over nominal paths; one in
/// expectation.
pub fn likelihood_ratio_mean<T: Real>(
    model: &CompoundPoissonModel<T>,
    lambda: T,
    t: T,
    plan: &SamplingPlan,
) -> Result<MeanEstimate<T>> {
    model.cumulant(lambda)?;
    Ok(accumulate(model, t, plan, |total| Ok(log_likelihood_ratio_of_total(model, lambda, total, t)?.exp()))?.into())
}

/// Moments of `S_t` under the law tilted by `λ` (`λ = 0` is the nominal law).
pub fn path_moments<T: Real>(
    model: &CompoundPoissonModel<T>,
    lambda: T,
    t: T,
    plan: &SamplingPlan,
) -> Result<PathMoments<T>> {
    let tilted = model.tilted(lambda)?;
    let s = accumulate(&tilted, t, plan, |total| Ok(total / t))?;
    Ok(PathMoments { mean: s.mean(), variance: s.variance(), mean_std_err: s.std_err(), n: s.count() })
}

/// Counts of positive-mark jumps `π_t`, one per nominal path, in path order.
pub fn positive_jump_counts<T: Real>(model: &CompoundPoissonModel<T>, t: T, plan: &SamplingPlan) -> Result<Vec<u64>> {
    check_horizon(t)?;
    plan.check()?;
    crate::parallel::map_paths(plan.paths, &plan.parallelism, |i| {
        Ok(simulate_summary(model, t, &mut path_rng(plan.seed, i))?.positive_jumps as u64)
    })
}

/// One point of a decay-rate curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayPoint<T> {
    pub t: T,
    pub log_decay: Option<T>,
    pub std_err: Option<T>,
}

/// `−(1/t) log p̂(t)` along `t_grid`, each point an [`is_probability`] run.
pub fn decay_rate_curve<T: Real>(
    model: &CompoundPoissonModel<T>,
    window: &EventWindow<T>,
    t_grid: &[T],
    plan: &SamplingPlan,
) -> Result<Vec<DecayPoint<T>>> {
    if t_grid.is_empty() {
        return Err(LdpError::Usage("decay curve needs at least one horizon".into()));
    }
    if t_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(LdpError::Usage("decay curve horizons must be strictly increasing".into()));
    }
    t_grid
        .iter()
        .map(|&t| {
            let est = is_probability(model, window, t, plan)?;
            Ok(DecayPoint { t, log_decay: est.log_decay, std_err: est.log_decay_std_err })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marks::MarkDistribution;
    use crate::rate::{closed_form_rate_exp_continuous, rate_function};

    fn exp_model() -> CompoundPoissonModel<f64> {
        CompoundPoissonModel::new(1.0, MarkDistribution::exponential(1.0).unwrap()).unwrap()
    }

    fn within_sigma(a: f64, b: f64, se: f64, k: f64) -> bool {
        (a - b).abs() <= k * se
    }

    #[test]
    fn window_semantics() {
        let w = EventWindow::new(1.0, 0.5).unwrap();
        assert!(w.contains(0.5) && w.contains(1.5) && !w.contains(1.50001));
        assert_eq!(w.nearest_point(4.0), 1.5);
        assert_eq!(w.nearest_point(1.2), 1.2);
        assert_eq!(EventWindow::new(0.1, 1.0).unwrap().nearest_point(-1.0), 0.0);
        assert!(EventWindow::new(-1.0, 1.0).is_err());
        assert!(EventWindow::new(1.0, 0.0).is_err());
    }

    #[test]
    fn certain_event() {
        let w = EventWindow::new(1.0, 1e6).unwrap();
        let est = mc_probability(&exp_model(), &w, 2.0, &SamplingPlan::new(1000, 0)).unwrap();
        assert_eq!((est.p_hat, est.std_err, est.log_decay), (1.0, 0.0, Some(-0.0)));
        assert_eq!(est.method, EstimateMethod::CrudeMc);
    }

    #[test]
    fn mc_zero_paths() {
        let w = EventWindow::new(0.0, 1e-9).unwrap();
        let est = mc_probability(&exp_model(), &w, 5.0, &SamplingPlan::new(1_000_000, 1)).unwrap();
        let exact = (-5.0f64).exp();
        assert!(within_sigma(est.p_hat, exact, est.std_err, 4.0), "{est:?}");
    }

    #[test]
    fn crude_and_is_agree_at_the_mean() {
        let m = exp_model();
        let w = EventWindow::new(1.0, 0.1).unwrap();
        let plan = SamplingPlan::new(100_000, 5);
        let mc = mc_probability(&m, &w, 20.0, &plan).unwrap();
        let is = is_probability(&m, &w, 20.0, &SamplingPlan::new(100_000, 6)).unwrap();
        let se = (mc.std_err.powi(2) + is.std_err.powi(2)).sqrt();
        assert!(within_sigma(mc.p_hat, is.p_hat, se, 4.0));
        // the mean is inside the window, so no tilt is applied
        assert_eq!(importance_tilt(&m, &w, TiltTarget::NearestToMean).unwrap(), 0.0);
    }

    #[test]
    fn is_moderate_event_against_crude() {
        // p ≈ 2e-2, visible to both estimators
        let m = exp_model();
        let w = EventWindow::new(1.6, 0.1).unwrap();
        let mc = mc_probability(&m, &w, 10.0, &SamplingPlan::new(200_000, 8)).unwrap();
        for target in [TiltTarget::NearestToMean, TiltTarget::Center] {
            let lambda = importance_tilt(&m, &w, target).unwrap();
            assert!(lambda > 0.0);
            let is = is_probability_with_tilt(&m, &w, 10.0, &SamplingPlan::new(200_000, 9), lambda).unwrap();
            let se = (mc.std_err.powi(2) + is.std_err.powi(2)).sqrt();
            assert!(within_sigma(mc.p_hat, is.p_hat, se, 4.0), "{mc:?} {is:?}");
        }
    }

    #[test]
    fn is_rare_event_decay() {
        let m = exp_model();
        let w = EventWindow::new(4.0, 0.1).unwrap();
        let est = is_probability(&m, &w, 50.0, &SamplingPlan::new(100_000, 3)).unwrap();
        let decay = est.log_decay.unwrap();
        let lo = closed_form_rate_exp_continuous(1.0, 3.9) - 0.05;
        let hi = closed_form_rate_exp_continuous(1.0, 4.1) + 0.05;
        assert!(decay >= lo && decay <= hi, "{decay}");
        assert!(est.relative_error() < 0.1);
    }

    #[test]
    fn is_requires_positive_centre() {
        let w = EventWindow::new(0.0, 0.5).unwrap();
        assert!(is_probability(&exp_model(), &w, 1.0, &SamplingPlan::new(10, 0)).is_err());
    }

    #[test]
    fn zero_probability_examples() {
        let z = zero_probability(&exp_model(), 5.0).unwrap();
        assert_eq!(z.p_hat, (-5.0f64).exp());
        assert_eq!((z.std_err, z.method, z.log_decay), (0.0, EstimateMethod::Exact, Some(1.0)));
        assert_eq!(z.log_decay, Some(rate_function(&exp_model(), 0.0, &SolverConfig::default()).unwrap().value));

        let all_zero = MarkDistribution::zero_inflated(1.0, MarkDistribution::exponential(1.0).unwrap()).unwrap();
        let m = CompoundPoissonModel::new(1.0, all_zero).unwrap();
        for t in [0.5, 10.0, 1e3] {
            assert_eq!(zero_probability(&m, t).unwrap().p_hat, 1.0);
        }

        let zi = MarkDistribution::zero_inflated(0.25, MarkDistribution::exponential(1.0).unwrap()).unwrap();
        let m = CompoundPoissonModel::new(2.0, zi).unwrap();
        assert!((zero_probability(&m, 3.0).unwrap().p_hat - (-4.5f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn chernoff_examples() {
        let m = exp_model();
        let b = chernoff_tail_bound(&m, 10.0, 1.0, None).unwrap();
        assert!((b - (-4.0f64).exp()).abs() < 1e-12);
        assert_eq!(chernoff_tail_bound(&m, 1e-9, 1.0, Some(0.5)).unwrap(), 1.0);
        let lambda = solve_tilt(&m, 4.0, &SolverConfig::default()).unwrap().root().unwrap();
        let opt = chernoff_tail_bound(&m, 4.0, 10.0, Some(lambda)).unwrap();
        assert!((opt - (-10.0f64).exp()).abs() < 1e-12 * opt.max(1e-300).max((-10.0f64).exp()));
        assert!(chernoff_tail_bound(&m, 4.0, 1.0, Some(1.0)).is_err());
        assert!(chernoff_tail_bound(&m, 4.0, 1.0, Some(0.0)).is_err());
        assert!(chernoff_tail_bound(&m, 0.0, 1.0, None).is_err());

        let pm = CompoundPoissonModel::new(1.0, MarkDistribution::point_mass(1.0).unwrap()).unwrap();
        let i3: f64 = rate_function(&pm, 3.0, &SolverConfig::default()).unwrap().value;
        assert!((chernoff_tail_bound(&pm, 3.0, 2.0, None).unwrap() - (-2.0 * i3).exp()).abs() < 1e-12);
        assert_eq!(chernoff_tail_bound(&pm, 0.5, 2.0, None).unwrap(), 1.0);
    }

    #[test]
    fn chernoff_tightness_in_j() {
        let m = exp_model();
        let bounds: Vec<f64> = (1..40).map(|j| chernoff_tail_bound(&m, j as f64, 1.0, None).unwrap()).collect();
        assert!(bounds.windows(2).all(|w| w[1] <= w[0]));
        assert!(*bounds.last().unwrap() < 1e-7);
    }

    #[test]
    fn laplace_estimates() {
        let m = exp_model();
        let zero = empirical_laplace(&m, 0.0, 3.0, &SamplingPlan::new(1000, 0)).unwrap();
        assert_eq!((zero.mean, zero.std_err), (1.0, 0.0));
        let est = empirical_laplace(&m, 0.3, 2.0, &SamplingPlan::new(1_000_000, 4)).unwrap();
        let exact = m.laplace_transform(0.3, 2.0).unwrap();
        assert!((exact - 2.3564).abs() < 1e-4);
        assert!(within_sigma(est.mean, exact, est.std_err, 4.0), "{est:?} vs {exact}");
        assert!(matches!(
            empirical_laplace(&m, 0.5, 1.0, &SamplingPlan::new(10, 0)),
            Err(LdpError::Usage(_))
        ));

        let pm = CompoundPoissonModel::new(1.0, MarkDistribution::point_mass(1.0).unwrap()).unwrap();
        let est = empirical_laplace(&pm, 0.5, 1.0, &SamplingPlan::new(1_000_000, 5)).unwrap();
        let exact = (0.5f64.exp() - 1.0).exp();
        assert!((exact - 1.913093).abs() < 1e-6);
        assert!(within_sigma(est.mean, exact, est.std_err, 4.0));
    }

    #[test]
    fn martingale_normalisation() {
        let m = exp_model();
        for lambda in [0.2, 0.3, 0.5] {
            let est = likelihood_ratio_mean(&m, lambda, 5.0, &SamplingPlan::new(1_000_000, 12)).unwrap();
            assert!(within_sigma(est.mean, 1.0, est.std_err, 4.0), "λ={lambda}: {est:?}");
        }
    }

    #[test]
    fn decay_curve() {
        let m = exp_model();
        let w = EventWindow::new(4.0, 0.1).unwrap();
        let plan = SamplingPlan::new(100_000, 2);
        let curve = decay_rate_curve(&m, &w, &[10.0, 20.0, 50.0, 100.0], &plan).unwrap();
        assert_eq!(curve.len(), 4);
        let last = curve.last().unwrap().log_decay.unwrap();
        assert!((0.90..=1.10).contains(&last), "{last}");

        // a window containing the mean is typical
        let wide = EventWindow::new(4.0, 3.5).unwrap();
        let curve = decay_rate_curve(&m, &wide, &[10.0, 50.0, 200.0], &SamplingPlan::new(20_000, 2)).unwrap();
        let decays: Vec<f64> = curve.iter().map(|p| p.log_decay.unwrap()).collect();
        assert!(decays[2].abs() < 1e-3, "{decays:?}");

        let at_mean = EventWindow::new(1.0, 0.05).unwrap();
        let curve = decay_rate_curve(&m, &at_mean, &[10.0, 100.0, 1000.0], &SamplingPlan::new(20_000, 2)).unwrap();
        let decays: Vec<f64> = curve.iter().map(|p| p.log_decay.unwrap()).collect();
        assert!(decays[2] < decays[0] && decays[2] < 2e-3, "{decays:?}");

        assert!(decay_rate_curve(&m, &w, &[], &plan).is_err());
        assert!(decay_rate_curve(&m, &w, &[2.0, 1.0], &plan).is_err());
    }

    #[test]
    fn estimates_are_worker_independent() {
        let m = exp_model();
        let w = EventWindow::new(2.0, 0.2).unwrap();
        let run = |workers| {
            let plan = SamplingPlan::new(30_000, 77).with_parallelism(Parallelism::with_workers(workers));
            (is_probability(&m, &w, 10.0, &plan).unwrap(), mc_probability(&m, &w, 10.0, &plan).unwrap())
        };
        let one = run(1);
        assert_eq!(one, run(2));
        assert_eq!(one, run(8));
    }
}
