//! Exact unitary simulation of the coined walk on a bounded lattice.
//!
//! Coin `0` moves the walker one site left, coin `1` one site right. The
//! lattice spans `origin − half_width ..= origin + half_width` and is sized up
//! front; shifting amplitude past either edge is an error, never a wrap.
//!
//! Amplitudes are stored site-major with the two coin components adjacent,
//! so index `2·site + coin`.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::{CoinOperator, Distribution, Error, Result, C64};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Norm drift tolerated by the debug-build check run after every operation.
pub const NORM_DRIFT_TOL: f64 = 1e-9;

/// `|0⟩`.
pub fn coin_zero() -> [C64; 2] {
    [C64::new(1.0, 0.0), ZERO]
}

/// `|1⟩`.
pub fn coin_one() -> [C64; 2] {
    [ZERO, C64::new(1.0, 0.0)]
}

/// `(|0⟩ + i|1⟩)/√2`, the start that gives a symmetric Hadamard walk.
pub fn coin_symmetric() -> [C64; 2] {
    [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, FRAC_1_SQRT_2)]
}

/// Exponentially small tails beyond the walk's caustic would otherwise sink
/// into subnormal range, where arithmetic is two orders of magnitude slower.
/// Anything this small carries no probability at double precision.
#[inline]
fn flush_subnormal(z: C64) -> C64 {
    let f = |x: f64| if x.abs() < f64::MIN_POSITIVE { 0.0 } else { x };
    C64::new(f(z.re), f(z.im))
}

/// Pure state of the walker on the coin ⊗ position space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkState {
    origin_index: i64,
    half_width: usize,
    /// Physical step length in metres; metadata only.
    step_length: f64,
    amplitudes: Vec<C64>,
    /// Inclusive site-index bounds outside which every amplitude is zero.
    support: (usize, usize),
}

impl WalkState {
    /// Walker localized on `origin_index` with the given (normalized here)
    /// coin state.
    pub fn point(origin_index: i64, half_width: usize, coin: [C64; 2]) -> Result<Self> {
        let sites = 2 * half_width + 1;
        let mut amplitudes = vec![ZERO; 2 * sites];
        amplitudes[2 * half_width] = coin[0];
        amplitudes[2 * half_width + 1] = coin[1];
        Self::from_amplitudes(origin_index, amplitudes)
    }

    /// Discrete Gaussian position envelope of standard deviation
    /// `width_sites` (in the probability) times the coin state, truncated at
    /// [`envelope_radius`].
    pub fn gaussian(origin_index: i64, half_width: usize, coin: [C64; 2], width_sites: f64) -> Result<Self> {
        if !(width_sites > 0.0) || !width_sites.is_finite() {
            return Err(Error::param("envelope_width", format!("must be positive, got {width_sites}")));
        }
        let radius = envelope_radius(width_sites);
        if radius > half_width {
            return Err(Error::InsufficientLattice { half_width, required: radius });
        }
        let sites = 2 * half_width + 1;
        let mut amplitudes = vec![ZERO; 2 * sites];
        for k in -(radius as i64)..=radius as i64 {
            let envelope = (-(k * k) as f64 / (4.0 * width_sites * width_sites)).exp();
            let site = (half_width as i64 + k) as usize;
            amplitudes[2 * site] = coin[0] * envelope;
            amplitudes[2 * site + 1] = coin[1] * envelope;
        }
        Self::from_amplitudes(origin_index, amplitudes)
    }

    /// Normalizes `amplitudes` (length `2·(2h+1)`) into a state. Zero-norm
    /// input is rejected.
    pub fn from_amplitudes(origin_index: i64, mut amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() % 4 != 2 {
            return Err(Error::LatticeMismatch(format!(
                "amplitude vector length {} is not 2·(2h+1)",
                amplitudes.len()
            )));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !(norm_sq > 0.0) || !norm_sq.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let scale = 1.0 / norm_sq.sqrt();
        amplitudes.iter_mut().for_each(|a| *a *= scale);
        let sites = amplitudes.len() / 2;
        let occupied = |s: &usize| amplitudes[2 * s] != ZERO || amplitudes[2 * s + 1] != ZERO;
        let lo = (0..sites).find(occupied).unwrap_or(0);
        let hi = (0..sites).rev().find(occupied).unwrap_or(0);
        Ok(Self { origin_index, half_width: (sites - 1) / 2, step_length: 0.0, amplitudes, support: (lo, hi) })
    }

    pub fn with_step_length(mut self, metres: f64) -> Self {
        self.step_length = metres;
        self
    }

    pub fn origin_index(&self) -> i64 {
        self.origin_index
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn step_length(&self) -> f64 {
        self.step_length
    }

    pub fn sites(&self) -> usize {
        2 * self.half_width + 1
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    fn first_position(&self) -> i64 {
        self.origin_index - self.half_width as i64
    }

    fn site_of(&self, position: i64) -> Option<usize> {
        let s = position - self.first_position();
        (0..self.sites() as i64).contains(&s).then_some(s as usize)
    }

    /// Amplitude of `|coin, position⟩`; zero off the lattice.
    pub fn amplitude(&self, position: i64, coin: usize) -> C64 {
        self.site_of(position).map_or(ZERO, |s| self.amplitudes[2 * s + coin])
    }

    pub fn norm_sq(&self) -> f64 {
        let (lo, hi) = self.support;
        self.amplitudes[2 * lo..2 * hi + 2].iter().map(|a| a.norm_sqr()).sum()
    }

    /// Largest distance from the origin carrying nonzero amplitude.
    pub fn support_radius(&self) -> usize {
        let (lo, hi) = self.support;
        self.half_width.abs_diff(lo).max(hi.abs_diff(self.half_width))
    }

    /// Largest entrywise amplitude difference; both states must share a lattice.
    pub fn max_distance(&self, other: &WalkState) -> f64 {
        assert_eq!(self.amplitudes.len(), other.amplitudes.len(), "lattice mismatch");
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    #[inline]
    fn debug_check_norm(&self) {
        debug_assert!((self.norm_sq() - 1.0).abs() < NORM_DRIFT_TOL, "norm drifted to {}", self.norm_sq());
    }

    fn overflow(&self, site: usize) -> Error {
        Error::LatticeOverflow { site: self.first_position() + site as i64, half_width: self.half_width }
    }

    /// Multiplies the coin vector at every site by `coin`.
    pub fn apply_coin(&mut self, coin: &CoinOperator) {
        let (lo, hi) = self.support;
        for pair in self.amplitudes[2 * lo..2 * hi + 2].chunks_exact_mut(2) {
            let w = coin.apply([pair[0], pair[1]]);
            pair[0] = w[0];
            pair[1] = w[1];
        }
        self.debug_check_norm();
    }

    /// Swaps the coin labels at every site.
    pub fn bit_flip(&mut self) {
        let (lo, hi) = self.support;
        for pair in self.amplitudes[2 * lo..2 * hi + 2].chunks_exact_mut(2) {
            pair.swap(0, 1);
        }
    }

    /// Moves the component with coin `left` one site left and the other one
    /// site right, keeping labels.
    fn translate(&mut self, left: usize) -> Result<()> {
        let right = 1 - left;
        let (lo, hi) = self.support;
        let last = self.sites() - 1;
        if lo == 0 && self.amplitudes[left] != ZERO {
            return Err(self.overflow(0));
        }
        if hi == last && self.amplitudes[2 * last + right] != ZERO {
            return Err(self.overflow(last));
        }
        let amps = &mut self.amplitudes;
        for s in lo.max(1)..=hi {
            amps[2 * (s - 1) + left] = amps[2 * s + left];
        }
        amps[2 * hi + left] = ZERO;
        for s in (lo..=hi.min(last - 1)).rev() {
            amps[2 * (s + 1) + right] = amps[2 * s + right];
        }
        amps[2 * lo + right] = ZERO;
        self.support = (lo.saturating_sub(1), (hi + 1).min(last));
        self.trim_support();
        Ok(())
    }

    fn trim_support(&mut self) {
        let (mut lo, mut hi) = self.support;
        let empty = |a: &[C64], s: usize| a[2 * s] == ZERO && a[2 * s + 1] == ZERO;
        while lo < hi && empty(&self.amplitudes, lo) {
            lo += 1;
        }
        while hi > lo && empty(&self.amplitudes, hi) {
            hi -= 1;
        }
        self.support = (lo, hi);
    }

    /// Conditional shift: coin 0 moves to `x − 1`, coin 1 to `x + 1`.
    pub fn conditional_shift(&mut self) -> Result<()> {
        self.translate(0)?;
        self.debug_check_norm();
        Ok(())
    }

    /// The Raman-kick shift, which also exchanges the internal state: coin 0
    /// at `x` lands at `x − 1` with label 1, coin 1 lands at `x + 1` with
    /// label 0.
    pub fn shift_with_flip(&mut self) -> Result<()> {
        let (lo, hi) = self.support;
        let last = self.sites() - 1;
        if lo == 0 && self.amplitudes[0] != ZERO {
            return Err(self.overflow(0));
        }
        if hi == last && self.amplitudes[2 * last + 1] != ZERO {
            return Err(self.overflow(last));
        }
        // Exchange labels first, then the component now labelled 1 (formerly
        // 0) travels left.
        self.bit_flip();
        self.translate(1)?;
        self.debug_check_norm();
        Ok(())
    }

    /// One walk step `W = U(C ⊗ 1)`, fused into a single sweep.
    pub fn step(&mut self, coin: &CoinOperator) -> Result<()> {
        let (lo, hi) = self.support;
        let last = self.sites() - 1;
        let site_pair = |s: usize, a: &[C64]| coin.apply([a[2 * s], a[2 * s + 1]]);
        if lo == 0 && site_pair(0, &self.amplitudes)[0] != ZERO {
            return Err(self.overflow(0));
        }
        if hi == last && site_pair(last, &self.amplitudes)[1] != ZERO {
            return Err(self.overflow(last));
        }
        let amps = &mut self.amplitudes;
        let mut pending_right = ZERO;
        for s in lo..=hi {
            let w = site_pair(s, amps).map(flush_subnormal);
            amps[2 * s + 1] = pending_right;
            if s > 0 {
                amps[2 * (s - 1)] = w[0];
            }
            pending_right = w[1];
        }
        amps[2 * hi] = ZERO;
        if hi < last {
            amps[2 * (hi + 1) + 1] = pending_right;
        }
        self.support = (lo.saturating_sub(1), (hi + 1).min(last));
        self.trim_support();
        self.debug_check_norm();
        Ok(())
    }

    /// The physically ordered step: coin pulse, shift-with-flip, then the
    /// compensating bit flip. Equal to [`WalkState::step`].
    pub fn physical_step(&mut self, coin: &CoinOperator) -> Result<()> {
        self.apply_coin(coin);
        self.shift_with_flip()?;
        self.bit_flip();
        Ok(())
    }

    /// `n` applications of [`WalkState::step`]. The lattice must hold the
    /// final light cone, which is checked before any step is taken.
    pub fn evolve(&mut self, n: usize, coin: &CoinOperator) -> Result<()> {
        let required = self.support_radius() + n;
        if required > self.half_width {
            return Err(Error::InsufficientLattice { half_width: self.half_width, required });
        }
        for _ in 0..n {
            self.step(coin)?;
        }
        Ok(())
    }

    /// Projective coin measurement driven by a uniform variate `u ∈ [0, 1)`;
    /// the state collapses onto the outcome and is renormalized.
    pub fn measure_coin(&mut self, u: f64) -> usize {
        let (lo, hi) = self.support;
        let p0: f64 = (lo..=hi).map(|s| self.amplitudes[2 * s].norm_sqr()).sum();
        let outcome = if u < p0 / self.norm_sq() { 0 } else { 1 };
        for s in lo..=hi {
            self.amplitudes[2 * s + 1 - outcome] = ZERO;
        }
        self.renormalize();
        outcome
    }

    /// Projective position measurement driven by a uniform variate; returns
    /// the lattice position the walker collapsed to.
    pub fn measure_position(&mut self, u: f64) -> i64 {
        let (lo, hi) = self.support;
        let target = u * self.norm_sq();
        let mut acc = 0.0;
        let mut chosen = None;
        for s in lo..=hi {
            let w = self.amplitudes[2 * s].norm_sqr() + self.amplitudes[2 * s + 1].norm_sqr();
            if w > 0.0 {
                chosen = Some(s);
                acc += w;
                if target < acc {
                    break;
                }
            }
        }
        let site = chosen.expect("normalized state has support");
        for s in (lo..=hi).filter(|&s| s != site) {
            self.amplitudes[2 * s] = ZERO;
            self.amplitudes[2 * s + 1] = ZERO;
        }
        self.support = (site, site);
        self.renormalize();
        self.first_position() + site as i64
    }

    fn renormalize(&mut self) {
        self.trim_support();
        let scale = 1.0 / self.norm_sq().sqrt();
        let (lo, hi) = self.support;
        self.amplitudes[2 * lo..2 * hi + 2].iter_mut().for_each(|a| *a *= scale);
    }

    /// Position distribution with the coin traced out.
    pub fn distribution(&self) -> Distribution {
        let probabilities: Vec<f64> =
            self.amplitudes.chunks_exact(2).map(|p| p[0].norm_sqr() + p[1].norm_sqr()).collect();
        // Accumulated rounding over long runs stays far inside this bound.
        Distribution::with_tolerance(self.origin_index, probabilities, 1e-9)
            .expect("walk state lost normalization")
    }
}

/// Lattice radius used to truncate a Gaussian envelope of the given width.
pub fn envelope_radius(width_sites: f64) -> usize {
    (6.0 * width_sites).ceil() as usize
}

/// Variance after each requested step count, from one evolution pass.
/// Results follow the order of `n_list`.
pub fn variance_scan(initial: &WalkState, coin: &CoinOperator, n_list: &[usize]) -> Result<Vec<(usize, f64)>> {
    let mut order: Vec<usize> = n_list.to_vec();
    order.sort_unstable();
    order.dedup();
    let mut state = initial.clone();
    if let Some(&max) = order.last() {
        let required = state.support_radius() + max;
        if required > state.half_width {
            return Err(Error::InsufficientLattice { half_width: state.half_width, required });
        }
    }
    let mut done = 0;
    let mut by_n = std::collections::BTreeMap::new();
    for n in order {
        state.evolve(n - done, coin)?;
        done = n;
        by_n.insert(n, state.distribution().moments().variance);
    }
    Ok(n_list.iter().map(|n| (*n, by_n[n])).collect())
}
