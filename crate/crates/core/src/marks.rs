//! Mark (jump-size) distributions on `[0, ∞)`.
//!
//! A [`MarkDistribution`] knows how to draw marks, how to evaluate the
//! exponential moments `∫ x^k e^{λx} dG(x)` for `k ∈ {0, 1, 2}` in closed form,
//! where its Laplace transform stops converging (the abscissa `Λ`), how much
//! mass it puts on zero, and how to build its exponentially tilted version
//! `dG̃(x) = e^{λx} dG(x) / ∫ e^{λy} dG(y)`.
//!
//! Distributions are immutable once built and can be shared freely between
//! threads.

use std::path::Path;

use rand::Rng;

use crate::error::{LdpError, Result};
use crate::scalar::Real;

/// The parametric family of a [`MarkDistribution`].
#[derive(Debug, Clone, PartialEq)]
pub enum Family<T> {
    /// Exponential law with the given mean `θ`.
    Exponential { mean: T },
    /// Gamma law with shape `k` and scale `θ`.
    Gamma { shape: T, scale: T },
    /// Degenerate law at `value`.
    PointMass { value: T },
    /// Mixture `p0 · δ_0 + (1 − p0) · base`, where `base` has no atom at zero.
    ZeroInflated { p0: T, base: Box<MarkDistribution<T>> },
    /// Finitely supported law.
    Empirical(Empirical<T>),
}

/// Finitely supported mark law: `values[i]` with probability `weights[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Empirical<T> {
    values: Vec<T>,
    weights: Vec<T>,
    cumulative: Vec<T>,
}

impl<T: Real> Empirical<T> {
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    fn support(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.values
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| **w > T::zero())
            .map(|(x, w)| (*x, *w))
    }

    fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = T::sample_unit(rng);
        let idx = self.cumulative.partition_point(|c| *c <= u);
        idx.min(self.values.len() - 1)
    }
}

/// Law `G` of the nonnegative marks `ξ_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkDistribution<T> {
    family: Family<T>,
}

fn invalid(msg: impl Into<String>) -> LdpError {
    LdpError::InvalidDistribution(msg.into())
}

impl<T: Real> MarkDistribution<T> {
    pub fn exponential(mean: T) -> Result<Self> {
        if !(mean > T::zero() && mean.is_finite()) {
            return Err(invalid(format!("exponential mean must be positive and finite, got {mean}")));
        }
        Ok(Self { family: Family::Exponential { mean } })
    }

    pub fn gamma(shape: T, scale: T) -> Result<Self> {
        if !(shape > T::zero() && shape.is_finite()) {
            return Err(invalid(format!("gamma shape must be positive and finite, got {shape}")));
        }
        if !(scale > T::zero() && scale.is_finite()) {
            return Err(invalid(format!("gamma scale must be positive and finite, got {scale}")));
        }
        Ok(Self { family: Family::Gamma { shape, scale } })
    }

    pub fn point_mass(value: T) -> Result<Self> {
        if !(value >= T::zero() && value.is_finite()) {
            return Err(invalid(format!("point mass must sit at a finite nonnegative value, got {value}")));
        }
        Ok(Self { family: Family::PointMass { value } })
    }

    /// Mixes an atom of mass `p0` at zero into `base`, which must not already
    /// charge zero.
    pub fn zero_inflated(p0: T, base: MarkDistribution<T>) -> Result<Self> {
        if !(p0 >= T::zero() && p0 <= T::one()) {
            return Err(invalid(format!("zero-inflation probability must lie in [0, 1], got {p0}")));
        }
        if base.atom_at_zero() > T::zero() {
            return Err(invalid("zero-inflated base distribution must have no atom at zero"));
        }
        Ok(Self { family: Family::ZeroInflated { p0, base: Box::new(base) } })
    }

    /// Finitely supported law. Weights must be nonnegative and sum to one
    /// (to within rounding); they are renormalised exactly on construction.
    pub fn empirical(values: Vec<T>, weights: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("empirical distribution needs at least one value"));
        }
        if values.len() != weights.len() {
            return Err(invalid(format!(
                "empirical distribution has {} values but {} weights",
                values.len(),
                weights.len()
            )));
        }
        if let Some(x) = values.iter().find(|x| !(**x >= T::zero() && x.is_finite())) {
            return Err(invalid(format!("empirical values must be finite and nonnegative, got {x}")));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= T::zero() && w.is_finite())) {
            return Err(invalid(format!("empirical weights must be finite and nonnegative, got {w}")));
        }
        let total: T = weights.iter().copied().sum();
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(4.0 * values.len() as f64));
        if (total - T::one()).abs() > tol {
            return Err(invalid(format!("empirical weights must sum to 1, got {total}")));
        }
        let weights: Vec<T> = weights.into_iter().map(|w| w / total).collect();
        Ok(Self { family: Family::Empirical(Self::with_cumulative(values, weights)) })
    }

    /// Empirical law giving each listed value the same weight. Duplicates are
    /// kept and so count with multiplicity.
    pub fn empirical_uniform(values: Vec<T>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(invalid("empirical distribution needs at least one value"));
        }
        let w = T::one() / T::lit(n as f64);
        Self::empirical(values, vec![w; n])
    }

    fn with_cumulative(values: Vec<T>, weights: Vec<T>) -> Empirical<T> {
        let mut acc = T::zero();
        let mut cumulative: Vec<T> = weights
            .iter()
            .map(|w| {
                acc = acc + *w;
                acc
            })
            .collect();
        // Pin the last positive-weight entry (and anything after it) to one so
        // that every uniform draw in [0, 1) lands on a charged value.
        if let Some(last) = weights.iter().rposition(|w| *w > T::zero()) {
            for c in &mut cumulative[last..] {
                *c = T::one();
            }
        }
        Empirical { values, weights, cumulative }
    }

    pub fn family(&self) -> &Family<T> {
        &self.family
    }

    /// Abscissa of convergence `Λ = inf{λ > 0 : ∫ e^{λx} dG = ∞}`; `+∞` for
    /// bounded support.
    pub fn lambda_max(&self) -> T {
        match &self.family {
            Family::Exponential { mean } => T::one() / *mean,
            Family::Gamma { scale, .. } => T::one() / *scale,
            Family::PointMass { .. } | Family::Empirical(_) => T::infinity(),
            Family::ZeroInflated { base, .. } => base.lambda_max(),
        }
    }

    /// `G(0+) = P(ξ = 0)`.
    pub fn atom_at_zero(&self) -> T {
        match &self.family {
            Family::Exponential { .. } | Family::Gamma { .. } => T::zero(),
            Family::PointMass { value } => {
                if *value == T::zero() {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Family::ZeroInflated { p0, .. } => *p0,
            Family::Empirical(e) => e
                .support()
                .filter(|(x, _)| *x == T::zero())
                .map(|(_, w)| w)
                .sum(),
        }
    }

    pub fn mean(&self) -> T {
        self.moment_unchecked(T::zero(), 1)
    }

    /// `true` when every mark is zero almost surely.
    pub fn is_degenerate_at_zero(&self) -> bool {
        self.atom_at_zero() >= T::one()
    }

    /// Essential infimum of the support together with the probability of
    /// hitting it exactly.
    pub fn lower_endpoint(&self) -> (T, T) {
        match &self.family {
            Family::Exponential { .. } | Family::Gamma { .. } => (T::zero(), T::zero()),
            Family::PointMass { value } => (*value, T::one()),
            Family::ZeroInflated { p0, base } => {
                if *p0 > T::zero() {
                    (T::zero(), *p0)
                } else {
                    base.lower_endpoint()
                }
            }
            Family::Empirical(e) => Self::endpoint(e, |a, b| a < b),
        }
    }

    /// Essential supremum of the support (possibly `+∞`) together with the
    /// probability of hitting it exactly.
    pub fn upper_endpoint(&self) -> (T, T) {
        match &self.family {
            Family::Exponential { .. } | Family::Gamma { .. } => (T::infinity(), T::zero()),
            Family::PointMass { value } => (*value, T::one()),
            Family::ZeroInflated { p0, base } => {
                if *p0 >= T::one() {
                    (T::zero(), T::one())
                } else {
                    let (x, m) = base.upper_endpoint();
                    (x, (T::one() - *p0) * m)
                }
            }
            Family::Empirical(e) => Self::endpoint(e, |a, b| a > b),
        }
    }

    fn endpoint(e: &Empirical<T>, better: impl Fn(T, T) -> bool) -> (T, T) {
        let mut best: Option<T> = None;
        for (x, _) in e.support() {
            if best.is_none_or(|b| better(x, b)) {
                best = Some(x);
            }
        }
        let x = best.expect("an empirical law always has a charged value");
        let mass = e.support().filter(|(y, _)| *y == x).map(|(_, w)| w).sum();
        (x, mass)
    }

    fn check_domain(&self, lambda: T) -> Result<()> {
        if lambda.is_nan() {
            return Err(LdpError::Usage("tilt parameter is NaN".into()));
        }
        let lmax = self.lambda_max();
        if lambda >= lmax {
            return Err(LdpError::Divergence {
                lambda: lambda.to_f64_lossy(),
                lambda_max: lmax.to_f64_lossy(),
            });
        }
        Ok(())
    }

    /// `∫ x^k e^{λx} dG(x)` for `k ∈ {0, 1, 2}`; an atom at zero contributes
    /// only to `k = 0`.
    pub fn exponential_moment(&self, lambda: T, order: u32) -> Result<T> {
        if order > 2 {
            return Err(LdpError::Usage(format!("exponential moment order must be 0, 1 or 2, got {order}")));
        }
        self.check_domain(lambda)?;
        let m = self.moment_unchecked(lambda, order);
        if m.is_finite() {
            Ok(m)
        } else {
            Err(LdpError::NonFinite("exponential moment"))
        }
    }

    /// `∫ (e^{λx} − 1) dG(x)`, evaluated without the cancellation that
    /// `exponential_moment(λ, 0) − 1` suffers for small `λ`.
    pub fn exponential_moment_m1(&self, lambda: T) -> Result<T> {
        self.check_domain(lambda)?;
        let m = self.moment_m1_unchecked(lambda);
        if m.is_finite() {
            Ok(m)
        } else {
            Err(LdpError::NonFinite("exponential moment"))
        }
    }

    fn moment_unchecked(&self, lambda: T, order: u32) -> T {
        let one = T::one();
        match &self.family {
            Family::Exponential { mean } => {
                let a = one - lambda * *mean;
                match order {
                    0 => one / a,
                    1 => *mean / (a * a),
                    _ => T::lit(2.0) * *mean * *mean / (a * a * a),
                }
            }
            Family::Gamma { shape, scale } => {
                let a = one - lambda * *scale;
                let k = *shape;
                match order {
                    0 => a.powf(-k),
                    1 => k * *scale * a.powf(-k - one),
                    _ => k * (k + one) * *scale * *scale * a.powf(-k - T::lit(2.0)),
                }
            }
            Family::PointMass { value } => value.powi(order as i32) * (lambda * *value).exp(),
            Family::ZeroInflated { p0, base } => {
                let b = base.moment_unchecked(lambda, order);
                if order == 0 {
                    *p0 + (one - *p0) * b
                } else {
                    (one - *p0) * b
                }
            }
            Family::Empirical(e) => e
                .support()
                .map(|(x, w)| w * x.powi(order as i32) * (lambda * x).exp())
                .sum(),
        }
    }

    fn moment_m1_unchecked(&self, lambda: T) -> T {
        let one = T::one();
        match &self.family {
            Family::Exponential { mean } => lambda * *mean / (one - lambda * *mean),
            Family::Gamma { shape, scale } => (-*shape * (-lambda * *scale).ln_1p()).exp_m1(),
            Family::PointMass { value } => (lambda * *value).exp_m1(),
            Family::ZeroInflated { p0, base } => (one - *p0) * base.moment_m1_unchecked(lambda),
            Family::Empirical(e) => e.support().map(|(x, w)| w * (lambda * x).exp_m1()).sum(),
        }
    }

    /// Exponentially tilted law `e^{λx} dG(x) / ∫ e^{λy} dG(y)`.
    pub fn tilt(&self, lambda: T) -> Result<Self> {
        self.check_domain(lambda)?;
        if lambda == T::zero() {
            return Ok(self.clone());
        }
        let one = T::one();
        let family = match &self.family {
            Family::Exponential { mean } => Family::Exponential { mean: *mean / (one - lambda * *mean) },
            Family::Gamma { shape, scale } => Family::Gamma {
                shape: *shape,
                scale: *scale / (one - lambda * *scale),
            },
            Family::PointMass { value } => Family::PointMass { value: *value },
            Family::ZeroInflated { p0, base } => {
                let total = self.exponential_moment(lambda, 0)?;
                Family::ZeroInflated { p0: *p0 / total, base: Box::new(base.tilt(lambda)?) }
            }
            Family::Empirical(e) => {
                // log-sum-exp keeps the reweighting stable for large |λ|
                let shift = e
                    .support()
                    .map(|(x, _)| lambda * x)
                    .fold(T::neg_infinity(), T::max);
                let raw: Vec<T> = e
                    .values
                    .iter()
                    .zip(&e.weights)
                    .map(|(x, w)| {
                        if *w > T::zero() {
                            *w * (lambda * *x - shift).exp()
                        } else {
                            T::zero()
                        }
                    })
                    .collect();
                let total: T = raw.iter().copied().sum();
                let weights = raw.into_iter().map(|w| w / total).collect();
                Family::Empirical(Self::with_cumulative(e.values.clone(), weights))
            }
        };
        let tilted = Self { family };
        debug_assert!(tilted.atom_at_zero() <= one);
        Ok(tilted)
    }

    /// Draws one mark.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        match &self.family {
            Family::Exponential { mean } => *mean * T::sample_exp1(rng),
            Family::Gamma { shape, scale } => T::sample_gamma(rng, *shape, *scale),
            Family::PointMass { value } => *value,
            Family::ZeroInflated { p0, base } => {
                if T::sample_unit(rng) < *p0 {
                    T::zero()
                } else {
                    base.sample(rng)
                }
            }
            Family::Empirical(e) => e.values[e.sample_index(rng)],
        }
    }

    /// Parses a distribution spec string:
    /// `exp:<θ>`, `gamma:<k>:<θ>`, `point:<c>`, `zeroinf:<p0>:<spec>`, `emp:<path>`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (kind, rest) = spec
            .split_once(':')
            .ok_or_else(|| invalid(format!("distribution spec `{spec}` has no parameters")))?;
        match kind {
            "exp" => Self::exponential(parse_number(rest)?),
            "gamma" => {
                let (k, theta) = rest
                    .split_once(':')
                    .ok_or_else(|| invalid(format!("gamma spec needs `gamma:<k>:<θ>`, got `{spec}`")))?;
                Self::gamma(parse_number(k)?, parse_number(theta)?)
            }
            "point" => Self::point_mass(parse_number(rest)?),
            "zeroinf" => {
                let (p0, base) = rest
                    .split_once(':')
                    .ok_or_else(|| invalid(format!("zero-inflated spec needs `zeroinf:<p0>:<spec>`, got `{spec}`")))?;
                Self::zero_inflated(parse_number(p0)?, Self::parse_spec(base)?)
            }
            "emp" => Self::from_empirical_file(rest),
            other => Err(invalid(format!("unknown distribution family `{other}`"))),
        }
    }

    /// Loads an empirical law from a text file: one nonnegative value per
    /// line, uniform weights.
    pub fn from_empirical_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read `{}`: {e}", path.display())))?;
        Self::empirical_uniform(parse_empirical_values(&text)?)
    }
}

fn parse_number<T: Real>(token: &str) -> Result<T> {
    let token = token.trim();
    let x: f64 = token
        .parse()
        .map_err(|_| invalid(format!("cannot parse `{token}` as a number")))?;
    Ok(T::lit(x))
}

/// Parses the empirical ingestion format: one nonnegative value per line.
/// Blank lines are skipped; anything else that is not a finite nonnegative
/// number is an error naming the line.
pub fn parse_empirical_values<T: Real>(text: &str) -> Result<Vec<T>> {
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let x: f64 = line
            .parse()
            .map_err(|_| invalid(format!("line {}: cannot parse `{line}` as a number", lineno + 1)))?;
        if !(x >= 0.0 && x.is_finite()) {
            return Err(invalid(format!("line {}: value {x} is not finite and nonnegative", lineno + 1)));
        }
        values.push(T::lit(x));
    }
    if values.is_empty() {
        return Err(invalid("empirical file contains no values"));
    }
    Ok(values)
}
