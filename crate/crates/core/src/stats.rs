//! Streaming mean and variance.

use crate::scalar::Real;

/// Welford accumulator with Chan's pairwise merge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunningStats<T> {
    n: u64,
    mean: T,
    m2: T,
}

impl<T: Real> Default for RunningStats<T> {
    fn default() -> Self {
        Self { n: 0, mean: T::zero(), m2: T::zero() }
    }
}

impl<T: Real> RunningStats<T> {
    pub fn push(&mut self, x: T) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean = self.mean + delta / T::lit(self.n as f64);
        self.m2 = self.m2 + delta * (x - self.mean);
    }

    pub fn merge(self, other: Self) -> Self {
        if other.n == 0 {
            return self;
        }
        if self.n == 0 {
            return other;
        }
        let n = self.n + other.n;
        let (na, nb, nn) = (T::lit(self.n as f64), T::lit(other.n as f64), T::lit(n as f64));
        let delta = other.mean - self.mean;
        Self {
            n,
            mean: self.mean + delta * nb / nn,
            m2: self.m2 + other.m2 + delta * delta * na * nb / nn,
        }
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> T {
        self.mean
    }

    /// Unbiased sample variance; zero with fewer than two observations.
    pub fn variance(&self) -> T {
        if self.n < 2 {
            T::zero()
        } else {
            (self.m2 / T::lit((self.n - 1) as f64)).max(T::zero())
        }
    }

    /// Standard error of the mean, `sd / √n`.
    pub fn std_err(&self) -> T {
        if self.n == 0 {
            T::zero()
        } else {
            (self.variance() / T::lit(self.n as f64)).sqrt()
        }
    }
}
