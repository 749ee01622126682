//! Simulation of the marked point process `(τ_i, ξ_i)`.
//!
//! Inter-arrival gaps are i.i.d. exponential with rate `r` and marks are
//! i.i.d. from `G`, independent of the arrival history. A [`PathSample`] keeps
//! every jump on `(0, t]`, so `tS_t = ∫₀^t ∫_{x>0} x μ(ds, dx)` is just the sum
//! of its marks.
//!
//! Tilted paths are drawn from the Esscher-transformed model (rate
//! `r ∫ e^{λx} dG`, marks tilted by `λ`), which is the law of the process under
//! the density `exp(λ tS_t − t g_c(λ))`; see [`log_likelihood_ratio`].

use std::io::{self, Write};

use rand::Rng;

use crate::cumulant::{check_horizon, CompoundPoissonModel};
use crate::error::Result;
use crate::format::format_g17;
use crate::parallel::{map_paths, path_rng, Parallelism};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump<T> {
    pub time: T,
    pub mark: T,
}

/// One realised trajectory on `(0, t]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample<T> {
    horizon: T,
    jumps: Vec<Jump<T>>,
}

impl<T: Real> PathSample<T> {
    pub fn horizon(&self) -> T {
        self.horizon
    }

    /// Jumps in increasing time order.
    pub fn jumps(&self) -> &[Jump<T>] {
        &self.jumps
    }

    /// `tS_t`, the sum of the marks.
    pub fn total(&self) -> T {
        self.jumps.iter().map(|j| j.mark).sum()
    }

    /// `S_t = total / t`.
    pub fn s_t(&self) -> T {
        self.total() / self.horizon
    }

    pub fn jump_count(&self) -> usize {
        self.jumps.len()
    }

    /// `π_t`, the number of jumps with a strictly positive mark.
    pub fn jump_count_positive(&self) -> usize {
        self.jumps.iter().filter(|j| j.mark > T::zero()).count()
    }
}

/// Aggregate of a path without its jump list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSummary<T> {
    pub total: T,
    pub jumps: usize,
    pub positive_jumps: usize,
}

/// Drives the arrival clock, reporting each jump on `(0, t]` to `on_jump`.
/// Every simulator in the crate goes through here, so paths and summaries
/// drawn from the same stream agree exactly.
fn generate<T: Real, R: Rng + ?Sized>(
    model: &CompoundPoissonModel<T>,
    t: T,
    rng: &mut R,
    mut on_jump: impl FnMut(T, T),
) {
    let rate = model.rate();
    let marks = model.marks();
    let mut clock = T::zero();
    loop {
        clock = clock + T::sample_exp1(rng) / rate;
        if clock > t {
            break;
        }
        on_jump(clock, marks.sample(rng));
    }
}

/// Simulates one nominal path on `(0, t]`.
pub fn simulate_path<T: Real, R: Rng + ?Sized>(
    model: &CompoundPoissonModel<T>,
    t: T,
    rng: &mut R,
) -> Result<PathSample<T>> {
    check_horizon(t)?;
    let mut jumps = Vec::new();
    generate(model, t, rng, |time, mark| jumps.push(Jump { time, mark }));
    Ok(PathSample { horizon: t, jumps })
}

/// Simulates one path under the measure tilted by `λ`.
pub fn simulate_tilted_path<T: Real, R: Rng + ?Sized>(
    model: &CompoundPoissonModel<T>,
    lambda: T,
    t: T,
    rng: &mut R,
) -> Result<PathSample<T>> {
    simulate_path(&model.tilted(lambda)?, t, rng)
}

/// Like [`simulate_path`] but keeps only the totals.
pub fn simulate_summary<T: Real, R: Rng + ?Sized>(
    model: &CompoundPoissonModel<T>,
    t: T,
    rng: &mut R,
) -> Result<PathSummary<T>> {
    check_horizon(t)?;
    let mut s = PathSummary { total: T::zero(), jumps: 0, positive_jumps: 0 };
    generate(model, t, rng, |_, mark| {
        s.total = s.total + mark;
        s.jumps += 1;
        if mark > T::zero() {
            s.positive_jumps += 1;
        }
    });
    Ok(s)
}

/// `log 𝔏_t(λ) = λ · tS_t − t · g_c(λ)`, the log density of the tilted law
/// with respect to the nominal one on `(0, t]`.
pub fn log_likelihood_ratio<T: Real>(model: &CompoundPoissonModel<T>, lambda: T, path: &PathSample<T>) -> Result<T> {
    log_likelihood_ratio_of_total(model, lambda, path.total(), path.horizon())
}

/// [`log_likelihood_ratio`] from the path total alone.
pub fn log_likelihood_ratio_of_total<T: Real>(
    model: &CompoundPoissonModel<T>,
    lambda: T,
    total: T,
    t: T,
) -> Result<T> {
    check_horizon(t)?;
    if lambda == T::zero() {
        return Ok(T::zero());
    }
    Ok(lambda * total - t * model.cumulant(lambda)?)
}

/// Simulates paths `0..n` of the run seeded with `seed`.
pub fn simulate_paths<T: Real>(
    model: &CompoundPoissonModel<T>,
    t: T,
    n: u64,
    seed: u64,
    par: &Parallelism,
) -> Result<Vec<PathSample<T>>> {
    check_horizon(t)?;
    map_paths(n, par, |i| simulate_path(model, t, &mut path_rng(seed, i)))
}

/// Writes the path dump: header `path_id,tau,xi`, then one row per jump.
pub fn write_paths_csv<T: Real, W: Write>(out: &mut W, paths: &[PathSample<T>]) -> io::Result<()> {
    writeln!(out, "path_id,tau,xi")?;
    for (id, path) in paths.iter().enumerate() {
        for j in path.jumps() {
            writeln!(out, "{id},{},{}", format_g17(j.time.to_f64_lossy()), format_g17(j.mark.to_f64_lossy()))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marks::MarkDistribution;
    use crate::parallel::PathRng;
    use crate::stats::RunningStats;
    use rand::SeedableRng;

    fn model(r: f64, marks: MarkDistribution<f64>) -> CompoundPoissonModel<f64> {
        CompoundPoissonModel::new(r, marks).unwrap()
    }

    fn exp_model() -> CompoundPoissonModel<f64> {
        model(1.0, MarkDistribution::exponential(1.0).unwrap())
    }

    #[test]
    fn path_invariants() {
        let mut rng = PathRng::seed_from_u64(9);
        let m = model(3.0, MarkDistribution::zero_inflated(0.5, MarkDistribution::exponential(1.0).unwrap()).unwrap());
        for _ in 0..200 {
            let p = simulate_path(&m, 4.0, &mut rng).unwrap();
            assert!(p.jumps().windows(2).all(|w| w[0].time < w[1].time));
            assert!(p.jumps().iter().all(|j| j.time > 0.0 && j.time <= 4.0 && j.mark >= 0.0));
            assert_eq!(p.total(), p.jumps().iter().map(|j| j.mark).sum::<f64>());
            assert!(p.jump_count_positive() <= p.jump_count());
        }
    }

    #[test]
    fn point_mass_paths() {
        let mut rng = PathRng::seed_from_u64(4);
        let m = model(2.0, MarkDistribution::point_mass(1.5).unwrap());
        for _ in 0..50 {
            let p = simulate_path(&m, 10.0, &mut rng).unwrap();
            assert_eq!(p.s_t(), 1.5 * p.jump_count() as f64 / 10.0);
        }
    }

    #[test]
    fn summary_matches_path_on_same_stream() {
        let m = exp_model();
        for i in 0..20 {
            let p = simulate_path(&m, 30.0, &mut path_rng(5, i)).unwrap();
            let s = simulate_summary(&m, 30.0, &mut path_rng(5, i)).unwrap();
            assert_eq!(s.total, p.total());
            assert_eq!(s.jumps, p.jump_count());
        }
    }

    #[test]
    fn zero_tilt_is_nominal() {
        let m = exp_model();
        let a = simulate_path(&m, 20.0, &mut path_rng(1, 3)).unwrap();
        let b = simulate_tilted_path(&m, 0.0, 20.0, &mut path_rng(1, 3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn likelihood_ratio_examples() {
        let m = exp_model();
        let p = simulate_path(&m, 5.0, &mut path_rng(2, 0)).unwrap();
        assert_eq!(log_likelihood_ratio(&m, 0.0, &p).unwrap(), 0.0);
        let empty = PathSample { horizon: 2.0, jumps: Vec::new() };
        assert!((log_likelihood_ratio(&m, 0.5, &empty).unwrap() + 2.0).abs() < 1e-15);
        assert!(log_likelihood_ratio(&m, 1.0, &empty).is_err());
        assert!(simulate_tilted_path(&m, 1.0, 1.0, &mut path_rng(0, 0)).is_err());
        assert!(simulate_path(&m, 0.0, &mut path_rng(0, 0)).is_err());
    }

    #[test]
    fn jump_count_moments() {
        let m = exp_model();
        let paths = simulate_paths(&m, 100.0, 10_000, 11, &Parallelism::default()).unwrap();
        let mut counts = RunningStats::default();
        paths.iter().for_each(|p| counts.push(p.jump_count() as f64));
        // Poisson(100): σ of the mean is √(100 / 10⁴) = 0.1
        assert!((counts.mean() - 100.0).abs() < 4.0 * 0.1, "{}", counts.mean());
    }

    #[test]
    fn compound_poisson_moments() {
        let m = exp_model();
        let t = 50.0;
        let n = 100_000;
        let mut st = RunningStats::default();
        let mut total = RunningStats::default();
        for i in 0..n {
            let s = simulate_summary(&m, t, &mut path_rng(21, i)).unwrap();
            st.push(s.total / t);
            total.push(s.total);
        }
        // E S_t = r Eξ = 1; Var(tS_t) = r t E ξ² = 2t
        assert!((st.mean() - 1.0).abs() < 4.0 * st.std_err());
        assert!((total.variance() / (2.0 * t) - 1.0).abs() < 0.05);
    }

    #[test]
    fn tilted_moments() {
        let m = exp_model();
        let t = 50.0;
        let tilted = m.tilted(0.5).unwrap();
        let mut st = RunningStats::default();
        for i in 0..100_000 {
            st.push(simulate_summary(&tilted, t, &mut path_rng(22, i)).unwrap().total / t);
        }
        assert!((st.mean() - 4.0).abs() < 4.0 * st.std_err(), "{}", st.mean());
        // g_c''(0.5) / t = 16 / 50
        assert!((st.variance() / 0.32 - 1.0).abs() < 0.05, "{}", st.variance());
    }

    #[test]
    fn path_dump_csv() {
        let m = model(1.0, MarkDistribution::point_mass(1.0).unwrap());
        let paths = simulate_paths(&m, 3.0, 2, 7, &Parallelism::sequential()).unwrap();
        let mut buf = Vec::new();
        write_paths_csv(&mut buf, &paths).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("path_id,tau,xi"));
        let rows: Vec<_> = lines.collect();
        assert_eq!(rows.len(), paths.iter().map(|p| p.jump_count()).sum::<usize>());
        for row in rows {
            let cols: Vec<&str> = row.split(',').collect();
            assert_eq!(cols.len(), 3);
            assert_eq!(cols[2], "1");
        }
    }

    #[test]
    fn parallel_paths_are_reproducible() {
        let m = exp_model();
        let a = simulate_paths(&m, 10.0, 500, 3, &Parallelism::with_workers(1)).unwrap();
        let b = simulate_paths(&m, 10.0, 500, 3, &Parallelism::with_workers(8)).unwrap();
        assert_eq!(a, b);
        // path i does not depend on how many paths are requested
        let c = simulate_paths(&m, 10.0, 37, 3, &Parallelism::with_workers(2)).unwrap();
        assert_eq!(&a[..37], &c[..]);
    }
}
