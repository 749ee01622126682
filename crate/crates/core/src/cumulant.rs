//! Cumulant generating functions.
//!
//! The continuous-time process `tS_t = Σ_{τ_i ≤ t} ξ_i` has
//! `log E e^{λ tS_t} = t · g_c(λ)` with `g_c(λ) = r ∫ (e^{λx} − 1) dG(x)`;
//! this module exposes `g_c` per unit time, its derivatives and the Laplace
//! transform, along with the i.i.d. log-MGF `g(λ) = log ∫ e^{λx} dG(x)`.
//!
//! Both are convex on `(−∞, Λ)` and implement [`ConvexCumulant`], which is
//! all the Legendre–Fenchel machinery in [`crate::rate`] needs.

use crate::error::{LdpError, Result};
use crate::marks::MarkDistribution;
use crate::scalar::Real;

/// Compound Poisson model: jumps at rate `r`, marks drawn from `G`.
///
/// Its Lévy measure is `ν(ds, dx) = r · ds · dG(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompoundPoissonModel<T> {
    rate: T,
    marks: MarkDistribution<T>,
}

impl<T: Real> CompoundPoissonModel<T> {
    pub fn new(rate: T, marks: MarkDistribution<T>) -> Result<Self> {
        if !(rate > T::zero() && rate.is_finite()) {
            return Err(LdpError::Usage(format!("jump rate must be positive and finite, got {rate}")));
        }
        Ok(Self { rate, marks })
    }

    pub fn rate(&self) -> T {
        self.rate
    }

    pub fn marks(&self) -> &MarkDistribution<T> {
        &self.marks
    }

    pub fn lambda_max(&self) -> T {
        self.marks.lambda_max()
    }

    /// `E S_t = r · E ξ`.
    pub fn mean(&self) -> T {
        self.rate * self.marks.mean()
    }

    /// Intensity of jumps with a strictly positive mark, `ν((0,1] × (0,∞)) = r[1 − G(0+)]`.
    pub fn positive_jump_rate(&self) -> T {
        self.rate * (T::one() - self.marks.atom_at_zero())
    }

    /// `g_c(λ) = r ∫ (e^{λx} − 1) dG(x)`.
    pub fn cumulant(&self, lambda: T) -> Result<T> {
        Ok(self.rate * self.marks.exponential_moment_m1(lambda)?)
    }

    /// `g_c'(λ)` (order 1) or `g_c''(λ)` (order 2), i.e. `r ∫ x^k e^{λx} dG(x)`.
    pub fn cumulant_derivative(&self, lambda: T, order: u32) -> Result<T> {
        if !(order == 1 || order == 2) {
            return Err(LdpError::Usage(format!("cumulant derivative order must be 1 or 2, got {order}")));
        }
        Ok(self.rate * self.marks.exponential_moment(lambda, order)?)
    }

    /// `E e^{λ tS_t} = exp(t · g_c(λ))`.
    pub fn laplace_transform(&self, lambda: T, t: T) -> Result<T> {
        check_horizon(t)?;
        let v = (t * self.cumulant(lambda)?).exp();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(LdpError::NonFinite("laplace transform"))
        }
    }

    /// Esscher transform of the model: rate `r · ∫e^{λx}dG`, marks tilted by `λ`.
    ///
    /// This is the law of the process under the change of measure with
    /// density `exp(λ tS_t − t g_c(λ))`.
    pub fn tilted(&self, lambda: T) -> Result<Self> {
        if lambda == T::zero() {
            return Ok(self.clone());
        }
        let scale = self.marks.exponential_moment(lambda, 0)?;
        Self::new(self.rate * scale, self.marks.tilt(lambda)?)
    }
}

pub(crate) fn check_horizon<T: Real>(t: T) -> Result<()> {
    if t > T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(LdpError::Usage(format!("time horizon must be positive and finite, got {t}")))
    }
}

/// Free-function form of [`CompoundPoissonModel::cumulant`].
pub fn cumulant<T: Real>(model: &CompoundPoissonModel<T>, lambda: T) -> Result<T> {
    model.cumulant(lambda)
}

/// Free-function form of [`CompoundPoissonModel::cumulant_derivative`].
pub fn cumulant_derivative<T: Real>(model: &CompoundPoissonModel<T>, lambda: T, order: u32) -> Result<T> {
    model.cumulant_derivative(lambda, order)
}

/// Free-function form of [`CompoundPoissonModel::laplace_transform`].
pub fn laplace_transform<T: Real>(model: &CompoundPoissonModel<T>, lambda: T, t: T) -> Result<T> {
    model.laplace_transform(lambda, t)
}

/// i.i.d. log-MGF `g(λ) = log E e^{λξ₁}`.
pub fn discrete_logmgf<T: Real>(dist: &MarkDistribution<T>, lambda: T) -> Result<T> {
    Ok(dist.exponential_moment_m1(lambda)?.ln_1p())
}

/// A closed convex function on `(−∞, Λ)` whose Legendre transform is a rate
/// function.
///
/// Implementors describe the behaviour at both ends of the domain so the
/// transform can be evaluated outside the range of the derivative too.
pub trait ConvexCumulant<T: Real> {
    /// Right end `Λ` of the (open) effective domain; may be `+∞`.
    fn lambda_max(&self) -> T;

    fn value(&self, lambda: T) -> Result<T>;

    fn slope(&self, lambda: T) -> Result<T>;

    fn curvature(&self, lambda: T) -> Result<T>;

    /// `lim_{λ→−∞} slope(λ)`.
    fn slope_infimum(&self) -> T;

    /// `lim_{λ↑Λ} slope(λ)`; `+∞` for steep cumulants.
    fn slope_supremum(&self) -> T;

    /// `lim_{λ↑Λ} value(λ)`. Only consulted when `Λ` is finite and the slope
    /// stays bounded.
    fn value_at_abscissa(&self) -> T;

    /// Legendre transform at `u = slope_infimum()`, attained only as `λ → −∞`.
    fn legendre_at_slope_infimum(&self) -> T;

    /// Legendre transform at `u = slope_supremum()` when `Λ = ∞` and the slope
    /// is bounded, attained only as `λ → +∞`.
    fn legendre_at_slope_supremum(&self) -> T;
}

impl<T: Real> ConvexCumulant<T> for CompoundPoissonModel<T> {
    fn lambda_max(&self) -> T {
        self.marks.lambda_max()
    }

    fn value(&self, lambda: T) -> Result<T> {
        self.cumulant(lambda)
    }

    fn slope(&self, lambda: T) -> Result<T> {
        self.cumulant_derivative(lambda, 1)
    }

    fn curvature(&self, lambda: T) -> Result<T> {
        self.cumulant_derivative(lambda, 2)
    }

    fn slope_infimum(&self) -> T {
        T::zero()
    }

    fn slope_supremum(&self) -> T {
        // Every supported family with finite Λ is steep; with Λ = ∞ the slope
        // grows without bound unless all marks vanish.
        if self.marks.is_degenerate_at_zero() {
            T::zero()
        } else {
            T::infinity()
        }
    }

    fn value_at_abscissa(&self) -> T {
        T::infinity()
    }

    fn legendre_at_slope_infimum(&self) -> T {
        self.positive_jump_rate()
    }

    fn legendre_at_slope_supremum(&self) -> T {
        // only reachable for the degenerate model, where the two ends coincide
        self.positive_jump_rate()
    }
}

/// The i.i.d. log-MGF of a mark law, viewed as a [`ConvexCumulant`].
#[derive(Debug, Clone, Copy)]
pub struct DiscreteLogMgf<'a, T> {
    dist: &'a MarkDistribution<T>,
}

impl<'a, T: Real> DiscreteLogMgf<'a, T> {
    pub fn new(dist: &'a MarkDistribution<T>) -> Self {
        Self { dist }
    }
}

impl<T: Real> ConvexCumulant<T> for DiscreteLogMgf<'_, T> {
    fn lambda_max(&self) -> T {
        self.dist.lambda_max()
    }

    fn value(&self, lambda: T) -> Result<T> {
        discrete_logmgf(self.dist, lambda)
    }

    fn slope(&self, lambda: T) -> Result<T> {
        let m0 = self.dist.exponential_moment(lambda, 0)?;
        let m1 = self.dist.exponential_moment(lambda, 1)?;
        finite(m1 / m0, "log-MGF slope")
    }

    fn curvature(&self, lambda: T) -> Result<T> {
        let m0 = self.dist.exponential_moment(lambda, 0)?;
        let m1 = self.dist.exponential_moment(lambda, 1)? / m0;
        let m2 = self.dist.exponential_moment(lambda, 2)? / m0;
        finite((m2 - m1 * m1).max(T::zero()), "log-MGF curvature")
    }

    fn slope_infimum(&self) -> T {
        self.dist.lower_endpoint().0
    }

    fn slope_supremum(&self) -> T {
        self.dist.upper_endpoint().0
    }

    fn value_at_abscissa(&self) -> T {
        T::infinity()
    }

    fn legendre_at_slope_infimum(&self) -> T {
        -self.dist.lower_endpoint().1.ln()
    }

    fn legendre_at_slope_supremum(&self) -> T {
        -self.dist.upper_endpoint().1.ln()
    }
}

fn finite<T: Real>(x: T, what: &'static str) -> Result<T> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(LdpError::NonFinite(what))
    }
}
