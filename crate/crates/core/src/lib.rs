//! Large deviations of nonnegative compound Poisson processes.
//!
//! For `tS_t = Σ_{τ_i ≤ t} ξ_i`, with exponential inter-arrival times of rate
//! `r` and i.i.d. nonnegative marks `ξ_i ~ G`, the averages `S_t` satisfy a
//! large-deviation principle with rate function
//!
//! ```text
//! I(u) = sup_{λ<Λ} [λu − r ∫ (e^{λx} − 1) dG(x)]   for u > 0,
//! I(0) = r [1 − G(0+)].
//! ```
//!
//! The crate computes this rate function (and its i.i.d. counterpart
//! `sup_λ [λu − log E e^{λξ₁}]`, with `I(0) = −log P(ξ₁ = 0)`), simulates the
//! marked point process under both the nominal and the exponentially tilted
//! law, and estimates `P(|S_t − u| ≤ δ)` by crude Monte Carlo and by
//! importance sampling.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`.
//!
//! ```
//! use ldp::{rate_function, Model, Marks, SolverConfig};
//!
//! let model = Model::new(1.0, Marks::exponential(1.0).unwrap()).unwrap();
//! let r = rate_function(&model, 4.0, &SolverConfig::default()).unwrap();
//! assert!((r.value - 1.0).abs() < 1e-12); // (√1 − √4)²
//! ```

pub mod cumulant;
pub mod error;
pub mod estimate;
pub mod format;
pub mod marks;
pub mod parallel;
pub mod rate;
pub mod scalar;
pub mod simulate;
pub mod stats;

pub use cumulant::{
    cumulant, cumulant_derivative, discrete_logmgf, laplace_transform, CompoundPoissonModel, ConvexCumulant,
    DiscreteLogMgf,
};
pub use error::{LdpError, Result};
pub use estimate::{
    chernoff_tail_bound, decay_rate_curve, empirical_laplace, importance_tilt, is_probability,
    is_probability_with_tilt, likelihood_ratio_mean, mc_probability, mc_tail_probability, path_moments,
    positive_jump_counts, zero_probability, DecayPoint, EstimateMethod, EstimateResult, EventWindow, MeanEstimate,
    PathMoments, SamplingPlan, TiltTarget,
};
pub use marks::{Family, MarkDistribution};
pub use parallel::{path_rng, Parallelism, PathRng};
pub use rate::{
    brute_force_rate, closed_form_rate_exp_continuous, closed_form_rate_exp_discrete, legendre_transform,
    linear_grid, rate_function, rate_function_discrete, solve_tilt, RateBranch, RateFunctionResult, SolverConfig,
    TiltSolution,
};
pub use scalar::Real;
pub use simulate::{
    log_likelihood_ratio, simulate_path, simulate_paths, simulate_summary, simulate_tilted_path, write_paths_csv,
    Jump, PathSample, PathSummary,
};

pub type Marks = MarkDistribution<f64>;
pub type Model = CompoundPoissonModel<f64>;
pub type RateResult = RateFunctionResult<f64>;
pub type Solver = SolverConfig<f64>;
pub type Window = EventWindow<f64>;
pub type Estimate = EstimateResult<f64>;
pub type Path = PathSample<f64>;
