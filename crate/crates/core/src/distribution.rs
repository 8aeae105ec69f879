//! Position probability distributions on the walk lattice.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerance on `Σp = 1` accepted by [`Distribution::new`].
pub const SUM_TOL: f64 = 1e-12;

/// Probabilities over the lattice sites `origin − h ..= origin + h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    origin_index: i64,
    probabilities: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

impl Distribution {
    /// Validates non-negativity and unit sum (within [`SUM_TOL`]). The
    /// vector length must be odd so the lattice is centred on `origin_index`.
    pub fn new(origin_index: i64, probabilities: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(origin_index, probabilities, SUM_TOL)
    }

    pub(crate) fn with_tolerance(origin_index: i64, probabilities: Vec<f64>, tol: f64) -> Result<Self> {
        if probabilities.len() % 2 != 1 {
            return Err(Error::InvalidDistribution(format!(
                "lattice must have an odd number of sites, got {}",
                probabilities.len()
            )));
        }
        if let Some((i, p)) = probabilities.iter().enumerate().find(|(_, p)| !(**p >= 0.0)) {
            return Err(Error::InvalidDistribution(format!("entry {i} is {p}")));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(Self { origin_index, probabilities })
    }

    pub fn point(origin_index: i64, half_width: usize) -> Self {
        let mut probabilities = vec![0.0; 2 * half_width + 1];
        probabilities[half_width] = 1.0;
        Self { origin_index, probabilities }
    }

    pub fn origin_index(&self) -> i64 {
        self.origin_index
    }

    pub fn half_width(&self) -> usize {
        self.probabilities.len() / 2
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Lattice position of the first stored site.
    pub fn first_position(&self) -> i64 {
        self.origin_index - self.half_width() as i64
    }

    /// `(position, probability)` pairs in increasing position order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let first = self.first_position();
        self.probabilities.iter().enumerate().map(move |(i, &p)| (first + i as i64, p))
    }

    /// Probability at an absolute lattice position; zero off the lattice.
    pub fn prob_at(&self, position: i64) -> f64 {
        let offset = position - self.first_position();
        if offset < 0 {
            return 0.0;
        }
        self.probabilities.get(offset as usize).copied().unwrap_or(0.0)
    }

    /// Mean and variance in lattice units.
    pub fn moments(&self) -> Moments {
        let mean: f64 = self.iter().map(|(x, p)| x as f64 * p).sum();
        let variance: f64 = self
            .iter()
            .map(|(x, p)| {
                let dx = x as f64 - mean;
                dx * dx * p
            })
            .sum();
        Moments { mean, variance }
    }

    /// Half the L1 distance, aligned on absolute lattice positions.
    pub fn total_variation(&self, other: &Distribution) -> f64 {
        let lo = self.first_position().min(other.first_position());
        let hi = (self.first_position() + self.probabilities.len() as i64)
            .max(other.first_position() + other.probabilities.len() as i64);
        0.5 * (lo..hi).map(|x| (self.prob_at(x) - other.prob_at(x)).abs()).sum::<f64>()
    }

    /// Largest per-site absolute difference, aligned on absolute positions.
    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        let lo = self.first_position().min(other.first_position());
        let hi = (self.first_position() + self.probabilities.len() as i64)
            .max(other.first_position() + other.probabilities.len() as i64);
        (lo..hi).map(|x| (self.prob_at(x) - other.prob_at(x)).abs()).fold(0.0, f64::max)
    }

    /// Positions whose probability is within `rel_tol` (relative) of the
    /// global maximum.
    pub fn peaks(&self, rel_tol: f64) -> Vec<i64> {
        let max = self.probabilities.iter().copied().fold(0.0, f64::max);
        self.iter().filter(|&(_, p)| p >= max * (1.0 - rel_tol)).map(|(x, _)| x).collect()
    }

    /// Largest `|P(origin + k) − P(origin − k)|` over all k.
    pub fn asymmetry(&self) -> f64 {
        let p = &self.probabilities;
        let n = p.len();
        (0..n / 2).map(|k| (p[k] - p[n - 1 - k]).abs()).fold(0.0, f64::max)
    }
}

/// Cumulative `ln k!` for `k = 0..=n`.
pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// Unbiased classical walk of `n` steps started at `origin_index`: the
/// binomial law on `origin ± n` with the parity of `n`.
///
/// Binomial coefficients are exact integers up to `n = 120`; beyond that the
/// law is built from term ratios and normalized.
pub fn classical_walk(origin_index: i64, n: usize) -> Distribution {
    let mut probabilities = vec![0.0; 2 * n + 1];
    if n <= 120 {
        let scale = 0.5f64.powi(n as i32);
        let mut binom: u128 = 1;
        for k in 0..=n {
            // k right-steps land at offset 2k − n, stored at index 2k.
            probabilities[2 * k] = binom as f64 * scale;
            binom = binom * (n - k) as u128 / (k + 1) as u128;
        }
    } else {
        // Ratios of neighbouring terms, walked outward from the mode and
        // normalized at the end, stay in range for any n.
        let mode = n / 2;
        let mut terms = vec![0.0; n + 1];
        terms[mode] = 1.0;
        for k in mode..n {
            terms[k + 1] = terms[k] * (n - k) as f64 / (k + 1) as f64;
        }
        for k in (1..=mode).rev() {
            terms[k - 1] = terms[k] * k as f64 / (n - k + 1) as f64;
        }
        let total: f64 = terms.iter().sum();
        for (k, t) in terms.into_iter().enumerate() {
            probabilities[2 * k] = t / total;
        }
    }
    Distribution { origin_index, probabilities }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_loglog_exponent(points: &[(f64, f64)]) -> Result<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return Err(Error::DegenerateFit);
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit);
    }
    Ok(sxy / sxx)
}
