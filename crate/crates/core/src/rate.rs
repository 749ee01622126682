//! Rate functions as Legendre–Fenchel transforms.
//!
//! For a convex cumulant `g` on `(−∞, Λ)` the rate function is
//! `I(u) = sup_{λ<Λ} [λu − g(λ)]`. Inside the range of `g'` the supremum is
//! attained at the saddle point `λ*` solving `g'(λ*) = u`, found by
//! [`solve_tilt`]. Outside that range the transform is either infinite or, for
//! a non-steep cumulant with finite `Λ`, linear in `u`. At `u = 0` the
//! continuous-time rate equals the intensity of positive jumps
//! `r[1 − G(0+)]`, while the i.i.d. rate is `−log P(ξ₁ = 0)`.

use serde::Serialize;

use crate::cumulant::{CompoundPoissonModel, ConvexCumulant, DiscreteLogMgf};
use crate::error::{LdpError, Result};
use crate::marks::MarkDistribution;
use crate::scalar::Real;

/// Which regime of the Legendre transform produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RateBranch {
    /// `g'(λ*) = u` for some `λ* < Λ`.
    Interior,
    /// `u = 0`.
    ZeroAtom,
    /// Beyond the range of `g'`, where the supremum is approached as `λ` runs
    /// to an end of the domain (the linear piece `Λu − g(Λ⁻)` for finite `Λ`,
    /// or a support endpoint of a bounded i.i.d. law).
    BoundaryLinear,
    /// `I(u) = +∞`.
    Infinite,
}

impl RateBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            RateBranch::Interior => "interior",
            RateBranch::ZeroAtom => "zero_atom",
            RateBranch::BoundaryLinear => "boundary_linear",
            RateBranch::Infinite => "infinite",
        }
    }
}

/// One evaluation of a rate function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFunctionResult<T> {
    pub u: T,
    /// `I(u) ∈ [0, ∞]`.
    pub value: T,
    /// Optimal tilt; present only on the interior branch.
    pub lambda_star: Option<T>,
    pub branch: RateBranch,
    /// Set when `λ*` lies below [`SolverConfig::lambda_floor`]: the search
    /// stopped at the floor and `value` is the small-`u` limit (see
    /// [`rate_function`]); `lambda_star` then holds the floor.
    pub saturated: bool,
}

/// Tolerances for [`solve_tilt`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    /// Absolute tolerance on `λ*`.
    pub tol_lambda: T,
    /// Tolerance on `|g'(λ) − u|` relative to `u`.
    pub tol_residual: T,
    pub max_iter: usize,
    /// Lowest tilt the bracket search will visit. `None` means
    /// `−745 / max(u, 1)`, where `e^{λx}` underflows for unit-scale marks.
    pub lambda_floor: Option<T>,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            tol_lambda: T::lit(1e-12),
            tol_residual: T::lit(1e-10),
            max_iter: 200,
            lambda_floor: None,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn floor_for(&self, u: T) -> T {
        self.lambda_floor.unwrap_or_else(|| T::lit(-745.0) / u.max(T::one()))
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol_lambda > T::zero() && self.tol_residual > T::zero()) {
            return Err(LdpError::Usage("solver tolerances must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(LdpError::Usage("solver needs at least one iteration".into()));
        }
        Ok(())
    }
}

/// Outcome of the saddle-point equation `g'(λ) = u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TiltSolution<T> {
    Root { lambda: T, iterations: usize },
    /// `u ≥ lim_{λ↑Λ} g'(λ)`: no interior root.
    AboveRange { u_max: T },
    /// `u ≤ lim_{λ→−∞} g'(λ)`: no interior root.
    BelowRange { u_min: T },
    /// The root lies below the configured floor.
    BelowFloor { floor: T },
}

impl<T: Real> TiltSolution<T> {
    pub fn root(&self) -> Option<T> {
        match self {
            TiltSolution::Root { lambda, .. } => Some(*lambda),
            _ => None,
        }
    }
}

/// Working coordinate for the root search. With finite `Λ` the solver moves
/// in `s = −log(Λ − λ)`, which sends the pole at `Λ` to `+∞`.
#[derive(Clone, Copy)]
enum Chart<T> {
    Linear,
    Log { lambda_max: T },
}

impl<T: Real> Chart<T> {
    fn to_lambda(self, x: T) -> T {
        match self {
            Chart::Linear => x,
            Chart::Log { lambda_max } => lambda_max - (-x).exp(),
        }
    }

    fn from_lambda(self, lambda: T) -> T {
        match self {
            Chart::Linear => lambda,
            Chart::Log { lambda_max } => -(lambda_max - lambda).ln(),
        }
    }

    fn dlambda(self, x: T) -> T {
        match self {
            Chart::Linear => T::one(),
            Chart::Log { .. } => (-x).exp(),
        }
    }
}

/// `g'(λ) − u`, with evaluations at or past the pole mapped to `+∞`.
fn residual<T: Real, C: ConvexCumulant<T> + ?Sized>(c: &C, lambda: T, u: T) -> Result<T> {
    if lambda >= c.lambda_max() {
        return Ok(T::infinity());
    }
    match c.slope(lambda) {
        Ok(s) => Ok(s - u),
        Err(LdpError::NonFinite(_) | LdpError::Divergence { .. }) if lambda > T::zero() => Ok(T::infinity()),
        Err(e) => Err(e),
    }
}

/// Solves `g'(λ) = u` for the tilt parameter.
///
/// `g'` is strictly increasing, so the root is first bracketed by a doubling
/// search away from `λ = 0` and then polished with Newton steps that fall back
/// to bisection whenever they would leave the bracket.
pub fn solve_tilt<T: Real, C: ConvexCumulant<T> + ?Sized>(
    c: &C,
    u: T,
    cfg: &SolverConfig<T>,
) -> Result<TiltSolution<T>> {
    cfg.validate()?;
    if !(u > T::zero() && u.is_finite()) {
        return Err(LdpError::Usage(format!("tilt target must be positive and finite, got {u}")));
    }
    let u_max = c.slope_supremum();
    if u >= u_max {
        return Ok(TiltSolution::AboveRange { u_max });
    }
    let u_min = c.slope_infimum();
    if u <= u_min {
        return Ok(TiltSolution::BelowRange { u_min });
    }

    let lambda_max = c.lambda_max();
    let chart = if lambda_max.is_finite() {
        Chart::Log { lambda_max }
    } else {
        Chart::Linear
    };
    let floor = cfg.floor_for(u);

    let h0 = residual(c, T::zero(), u)?;
    if h0 == T::zero() {
        return Ok(TiltSolution::Root { lambda: T::zero(), iterations: 0 });
    }

    let mut iterations = 0usize;
    let bracket_err = |iterations, lo: T, hi: T| LdpError::NoConvergence {
        iterations,
        lo: lo.to_f64_lossy(),
        hi: hi.to_f64_lossy(),
    };

    // bracket [x_lo, x_hi] in chart coordinates with h(x_lo) < 0 < h(x_hi)
    let (mut x_lo, mut x_hi);
    if h0 < T::zero() {
        x_lo = chart.from_lambda(T::zero());
        let mut step = T::one();
        loop {
            let x = x_lo + step;
            iterations += 1;
            if residual(c, chart.to_lambda(x), u)? >= T::zero() {
                x_hi = x;
                break;
            }
            x_lo = x;
            step = step + step;
            if iterations >= cfg.max_iter || !x.is_finite() {
                return Err(bracket_err(iterations, chart.to_lambda(x_lo), lambda_max));
            }
        }
    } else {
        let mut hi = T::zero();
        let mut step = T::one();
        loop {
            let mut lo = hi - step;
            iterations += 1;
            if lo < floor {
                lo = floor;
                if residual(c, floor, u)? > T::zero() {
                    return Ok(TiltSolution::BelowFloor { floor });
                }
            }
            if residual(c, lo, u)? <= T::zero() {
                x_lo = chart.from_lambda(lo);
                x_hi = chart.from_lambda(hi);
                break;
            }
            hi = lo;
            step = step + step;
            if iterations >= cfg.max_iter {
                return Err(bracket_err(iterations, lo, hi));
            }
        }
    }

    // safeguarded Newton
    let half = T::lit(0.5);
    let mut x = half * (x_lo + x_hi);
    let mut last_step = x_hi - x_lo;
    while iterations < cfg.max_iter {
        iterations += 1;
        let lambda = chart.to_lambda(x);
        let h = residual(c, lambda, u)?;
        if h == T::zero() {
            return Ok(TiltSolution::Root { lambda, iterations });
        }
        if h < T::zero() {
            x_lo = x;
        } else {
            x_hi = x;
        }
        if chart.to_lambda(x_hi) - chart.to_lambda(x_lo) <= cfg.tol_lambda {
            return Ok(TiltSolution::Root { lambda, iterations });
        }

        let deriv = if h.is_finite() {
            c.curvature(lambda).map(|g2| g2 * chart.dlambda(x)).unwrap_or(T::nan())
        } else {
            T::nan()
        };
        let newton = x - h / deriv;
        let step_ok = newton.is_finite()
            && newton > x_lo
            && newton < x_hi
            && (newton - x).abs() <= half * last_step.abs();
        if step_ok && h.abs() <= cfg.tol_residual * u {
            let refined = chart.to_lambda(newton);
            let tol = cfg.tol_lambda.max(T::lit(4.0) * T::epsilon() * lambda.abs());
            if (refined - lambda).abs() <= tol {
                return Ok(TiltSolution::Root { lambda: refined, iterations });
            }
        }
        let next = if step_ok { newton } else { half * (x_lo + x_hi) };
        last_step = next - x;
        if next == x {
            // bracket collapsed to adjacent floats
            return Ok(TiltSolution::Root { lambda, iterations });
        }
        x = next;
    }
    Err(bracket_err(iterations, chart.to_lambda(x_lo), chart.to_lambda(x_hi)))
}

/// Legendre transform `sup_{λ<Λ} [λu − g(λ)]` of an arbitrary convex cumulant.
///
/// At `u = 0` (and, generally, at the bottom of the slope range) the value is
/// the cumulant's own limit [`ConvexCumulant::legendre_at_slope_infimum`].
/// When the saddle point falls below the solver floor, the same limit is
/// returned if finite (it bounds `I` from above on that side); otherwise the
/// value at the floor, which bounds `I` from below.
pub fn legendre_transform<T: Real, C: ConvexCumulant<T> + ?Sized>(
    c: &C,
    u: T,
    cfg: &SolverConfig<T>,
) -> Result<RateFunctionResult<T>> {
    if !(u >= T::zero()) || u.is_infinite() {
        return Err(LdpError::Usage(format!("rate function argument must be finite and nonnegative, got {u}")));
    }
    let at = |value: T, branch: RateBranch| RateFunctionResult {
        u,
        value,
        lambda_star: None,
        branch,
        saturated: false,
    };
    let infinite = || at(T::infinity(), RateBranch::Infinite);
    let endpoint = |value: T, branch: RateBranch| {
        if value.is_finite() {
            at(value, branch)
        } else {
            infinite()
        }
    };

    let u_min = c.slope_infimum();
    if u == T::zero() {
        return Ok(if u_min == T::zero() {
            endpoint(c.legendre_at_slope_infimum(), RateBranch::ZeroAtom)
        } else {
            infinite()
        });
    }
    if u < u_min {
        return Ok(infinite());
    }
    if u == u_min {
        return Ok(endpoint(c.legendre_at_slope_infimum(), RateBranch::BoundaryLinear));
    }

    let lambda_max = c.lambda_max();
    let beyond = |u_max: T| {
        if lambda_max.is_finite() {
            let g_edge = c.value_at_abscissa();
            if g_edge.is_finite() {
                at(lambda_max * u - g_edge, RateBranch::BoundaryLinear)
            } else {
                infinite()
            }
        } else if u == u_max {
            endpoint(c.legendre_at_slope_supremum(), RateBranch::BoundaryLinear)
        } else {
            infinite()
        }
    };

    match solve_tilt(c, u, cfg)? {
        TiltSolution::Root { lambda, .. } => {
            if !(lambda < lambda_max) {
                return Err(LdpError::NonFinite("saddle point rounds onto the abscissa of convergence"));
            }
            let value = (lambda * u - c.value(lambda)?).max(T::zero());
            Ok(RateFunctionResult {
                u,
                value,
                lambda_star: Some(lambda),
                branch: RateBranch::Interior,
                saturated: false,
            })
        }
        TiltSolution::AboveRange { u_max } => Ok(beyond(u_max)),
        TiltSolution::BelowRange { .. } => Ok(endpoint(c.legendre_at_slope_infimum(), RateBranch::BoundaryLinear)),
        TiltSolution::BelowFloor { floor } => {
            let limit = c.legendre_at_slope_infimum();
            let value = if limit.is_finite() {
                limit
            } else {
                (floor * u - c.value(floor)?).max(T::zero())
            };
            Ok(RateFunctionResult {
                u,
                value,
                lambda_star: Some(floor),
                branch: RateBranch::Interior,
                saturated: true,
            })
        }
    }
}

/// Continuous-time rate function `I(u) = sup_{λ<Λ} [λu − r∫(e^{λx} − 1)dG(x)]`,
/// with `I(0) = r[1 − G(0+)]`.
pub fn rate_function<T: Real>(
    model: &CompoundPoissonModel<T>,
    u: T,
    cfg: &SolverConfig<T>,
) -> Result<RateFunctionResult<T>> {
    legendre_transform(model, u, cfg)
}

/// i.i.d. rate function `I(u) = sup_{λ<Λ} [λu − log E e^{λξ₁}]`, with
/// `I(0) = −log P(ξ₁ = 0)`.
pub fn rate_function_discrete<T: Real>(
    dist: &MarkDistribution<T>,
    u: T,
    cfg: &SolverConfig<T>,
) -> Result<RateFunctionResult<T>> {
    legendre_transform(&DiscreteLogMgf::new(dist), u, cfg)
}

/// `(√r − √u)²`: continuous-time rate for unit-mean exponential marks.
/// The `u = 0` value `r` agrees with the formula.
pub fn closed_form_rate_exp_continuous<T: Real>(r: T, u: T) -> T {
    if u == T::zero() {
        return r;
    }
    let d = r.sqrt() - u.sqrt();
    d * d
}

/// `u − 1 − log u`: i.i.d. rate for unit-mean exponential marks, `+∞` at `u = 0`.
pub fn closed_form_rate_exp_discrete<T: Real>(u: T) -> T {
    if u == T::zero() {
        T::infinity()
    } else {
        u - T::one() - u.ln()
    }
}

/// `max_{λ ∈ grid} [λu − g(λ)]`, a lower bound on the rate function.
pub fn brute_force_rate<T: Real, C: ConvexCumulant<T> + ?Sized>(c: &C, u: T, grid: &[T]) -> Result<T> {
    if grid.is_empty() {
        return Err(LdpError::Usage("brute-force grid is empty".into()));
    }
    let lambda_max = c.lambda_max();
    let mut best = T::neg_infinity();
    for &lambda in grid {
        if !(lambda < lambda_max) {
            return Err(LdpError::Usage(format!(
                "grid point {lambda} is not below the abscissa {lambda_max}"
            )));
        }
        best = best.max(lambda * u - c.value(lambda)?);
    }
    Ok(best)
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / T::lit((n - 1) as f64);
            (0..n).map(|i| lo + step * T::lit(i as f64)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_model(r: f64) -> CompoundPoissonModel<f64> {
        CompoundPoissonModel::new(r, MarkDistribution::exponential(1.0).unwrap()).unwrap()
    }

    fn cfg() -> SolverConfig<f64> {
        SolverConfig::default()
    }

    /// `λ* = 1 − √(r/u)` for unit exponential marks.
    fn exp_tilt_oracle(r: f64, u: f64) -> f64 {
        1.0 - (r / u).sqrt()
    }

    #[test]
    fn solve_tilt_examples() {
        let m = exp_model(1.0);
        for (u, expected) in [(4.0, 0.5), (0.25, -1.0), (1.0, 0.0)] {
            let got = solve_tilt(&m, u, &cfg()).unwrap().root().unwrap();
            assert!((got - expected).abs() < 1e-12, "u={u}: {got}");
            assert!((got - exp_tilt_oracle(1.0, u)).abs() < 1e-12);
        }
        let pm = CompoundPoissonModel::new(2.0, MarkDistribution::point_mass(1.5).unwrap()).unwrap();
        assert_eq!(solve_tilt(&pm, 3.0, &cfg()).unwrap().root(), Some(0.0));
    }

    #[test]
    fn solve_tilt_extremes() {
        let m = exp_model(1.0);
        for u in [1e-4, 1e-2, 50.0, 1e4, 1e8] {
            let lambda = solve_tilt(&m, u, &cfg()).unwrap().root().unwrap();
            assert!(lambda < 1.0);
            let oracle = exp_tilt_oracle(1.0, u);
            assert!((lambda - oracle).abs() < 1e-9 * oracle.abs().max(1.0), "u={u}: {lambda} vs {oracle}");
        }
    }

    #[test]
    fn solve_tilt_rejects_nonpositive_u() {
        let m = exp_model(1.0);
        assert!(matches!(solve_tilt(&m, 0.0, &cfg()), Err(LdpError::Usage(_))));
        assert!(matches!(solve_tilt(&m, -1.0, &cfg()), Err(LdpError::Usage(_))));
    }

    #[test]
    fn solve_tilt_reports_iteration_cap() {
        let m = exp_model(1.0);
        let tight = SolverConfig { max_iter: 2, ..cfg() };
        assert!(matches!(solve_tilt(&m, 1e6, &tight), Err(LdpError::NoConvergence { .. })));
    }

    #[test]
    fn rate_examples() {
        let m = exp_model(1.0);
        let r4 = rate_function(&m, 4.0, &cfg()).unwrap();
        assert!((r4.value - 1.0).abs() < 1e-12);
        assert_eq!(r4.branch, RateBranch::Interior);
        assert!((r4.lambda_star.unwrap() - 0.5).abs() < 1e-12);
        let r0 = rate_function(&m, 0.0, &cfg()).unwrap();
        assert_eq!((r0.value, r0.branch, r0.lambda_star), (1.0, RateBranch::ZeroAtom, None));
        assert_eq!(rate_function(&m, 1.0, &cfg()).unwrap().value, 0.0);
    }

    #[test]
    fn zero_atom_uses_positive_jump_rate() {
        let marks = MarkDistribution::zero_inflated(0.25, MarkDistribution::exponential(1.0).unwrap()).unwrap();
        let m = CompoundPoissonModel::new(2.0, marks).unwrap();
        assert_eq!(rate_function(&m, 0.0, &cfg()).unwrap().value, 1.5);
    }

    #[test]
    fn saturation_below_floor() {
        let m = exp_model(1.0);
        let r = rate_function(&m, 1e-6, &cfg()).unwrap();
        assert!(r.saturated);
        assert_eq!(r.value, 1.0);
        // with a lower floor the exact value comes back
        let deep = SolverConfig { lambda_floor: Some(-1e4), ..cfg() };
        let r = rate_function(&m, 1e-6, &deep).unwrap();
        assert!(!r.saturated);
        assert!((r.value - closed_form_rate_exp_continuous(1.0, 1e-6)).abs() < 1e-10);
    }

    #[test]
    fn degenerate_marks() {
        let m = CompoundPoissonModel::new(3.0, MarkDistribution::point_mass(0.0).unwrap()).unwrap();
        let r0 = rate_function(&m, 0.0, &cfg()).unwrap();
        assert_eq!((r0.value, r0.branch), (0.0, RateBranch::ZeroAtom));
        assert_eq!(rate_function(&m, 0.5, &cfg()).unwrap().branch, RateBranch::Infinite);
        let zi = MarkDistribution::zero_inflated(1.0, MarkDistribution::exponential(1.0).unwrap()).unwrap();
        let m = CompoundPoissonModel::new(1.0, zi).unwrap();
        assert_eq!(rate_function(&m, 0.5, &cfg()).unwrap().branch, RateBranch::Infinite);
    }

    #[test]
    fn discrete_examples() {
        let e = MarkDistribution::exponential(1.0).unwrap();
        let r2 = rate_function_discrete(&e, 2.0, &cfg()).unwrap();
        assert!((r2.value - 0.306853).abs() < 1e-6);
        assert!((r2.value - closed_form_rate_exp_discrete(2.0)).abs() < 1e-12);
        assert_eq!(rate_function_discrete(&e, 1.0, &cfg()).unwrap().value, 0.0);
        let r0 = rate_function_discrete(&e, 0.0, &cfg()).unwrap();
        assert_eq!(r0.branch, RateBranch::Infinite);
        assert!(r0.value.is_infinite());
    }

    #[test]
    fn discrete_bounded_support() {
        let d = MarkDistribution::empirical(vec![1.0, 3.0], vec![0.25, 0.75]).unwrap();
        let below = rate_function_discrete(&d, 0.5, &cfg()).unwrap();
        assert_eq!(below.branch, RateBranch::Infinite);
        let at_min = rate_function_discrete(&d, 1.0, &cfg()).unwrap();
        assert!((at_min.value - 4f64.ln()).abs() < 1e-15);
        let at_max = rate_function_discrete(&d, 3.0, &cfg()).unwrap();
        assert!((at_max.value + 0.75f64.ln()).abs() < 1e-15);
        assert_eq!(rate_function_discrete(&d, 3.5, &cfg()).unwrap().branch, RateBranch::Infinite);
        let zi = MarkDistribution::zero_inflated(0.2, MarkDistribution::exponential(1.0).unwrap()).unwrap();
        let r0 = rate_function_discrete(&zi, 0.0, &cfg()).unwrap();
        assert!((r0.value + 0.2f64.ln()).abs() < 1e-15);
        assert_eq!(r0.branch, RateBranch::ZeroAtom);
    }

    /// Non-steep synthetic cumulant `g(λ) = λ²` on `(−∞, 1)`: the slope tops
    /// out at 2 and the transform continues linearly as `u − 1`.
    struct Truncated;

    impl ConvexCumulant<f64> for Truncated {
        fn lambda_max(&self) -> f64 {
            1.0
        }
        fn value(&self, l: f64) -> Result<f64> {
            Ok(l * l)
        }
        fn slope(&self, l: f64) -> Result<f64> {
            Ok(2.0 * l)
        }
        fn curvature(&self, _: f64) -> Result<f64> {
            Ok(2.0)
        }
        fn slope_infimum(&self) -> f64 {
            f64::NEG_INFINITY
        }
        fn slope_supremum(&self) -> f64 {
            2.0
        }
        fn value_at_abscissa(&self) -> f64 {
            1.0
        }
        fn legendre_at_slope_infimum(&self) -> f64 {
            f64::INFINITY
        }
        fn legendre_at_slope_supremum(&self) -> f64 {
            1.0
        }
    }

    #[test]
    fn boundary_linear_branch() {
        for u in [2.0, 2.5, 7.0] {
            let r = legendre_transform(&Truncated, u, &cfg()).unwrap();
            assert_eq!(r.branch, RateBranch::BoundaryLinear);
            assert_eq!(r.lambda_star, None);
            assert_eq!(r.value, u - 1.0);
            let grid = linear_grid(-5.0, 1.0 - 1e-9, 100_001);
            let brute = brute_force_rate(&Truncated, u, &grid).unwrap();
            assert!((brute - r.value).abs() < 1e-6);
        }
        let inside = legendre_transform(&Truncated, 1.0, &cfg()).unwrap();
        assert_eq!(inside.branch, RateBranch::Interior);
        assert!((inside.value - 0.25).abs() < 1e-12);
        // continuity across the boundary
        let left = legendre_transform(&Truncated, 2.0 - 1e-9, &cfg()).unwrap().value;
        assert!((left - 1.0).abs() < 1e-8);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_form_rate_exp_continuous(1.0, 4.0), 1.0);
        assert_eq!(closed_form_rate_exp_continuous(1.0, 1.0), 0.0);
        assert!((closed_form_rate_exp_continuous(2.0f64, 0.5) - 0.5).abs() < 1e-15);
        assert_eq!(closed_form_rate_exp_continuous(3.0, 0.0), 3.0);
        assert_eq!(closed_form_rate_exp_discrete(1.0), 0.0);
        let e = std::f64::consts::E;
        assert!((closed_form_rate_exp_discrete(e) - 0.718282).abs() < 1e-6);
        assert!(closed_form_rate_exp_discrete(0.0f64).is_infinite());
    }

    #[test]
    fn brute_force_examples() {
        let m = exp_model(1.0);
        let n = ((0.9 - -5.0) / 1e-4) as usize + 1;
        let grid = linear_grid(-5.0, 0.9, n);
        assert!((brute_force_rate(&m, 4.0, &grid).unwrap() - 1.0).abs() < 1e-6);
        assert_eq!(brute_force_rate(&m, 4.0, &[0.0]).unwrap(), 0.0);
        assert!(matches!(brute_force_rate(&m, 4.0, &[0.0, 1.0]), Err(LdpError::Usage(_))));
        assert!(brute_force_rate(&m, 4.0, &[]).is_err());

        let g = CompoundPoissonModel::new(1.0, MarkDistribution::gamma(2.0, 1.0).unwrap()).unwrap();
        let exact = rate_function(&g, 3.0, &cfg()).unwrap();
        let ls = exact.lambda_star.unwrap();
        let grid = linear_grid(ls - 1.0, (ls + 1.0).min(1.0 - 1e-9), 1_000_001);
        assert!((brute_force_rate(&g, 3.0, &grid).unwrap() - exact.value).abs() < 1e-6);
    }

    #[test]
    fn f32_rate_matches_closed_form() {
        let m = CompoundPoissonModel::new(1.0f32, MarkDistribution::exponential(1.0f32).unwrap()).unwrap();
        let r = rate_function(&m, 4.0f32, &SolverConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-5);
        assert!((r.lambda_star.unwrap() - 0.5).abs() < 1e-5);
    }
}
