//! Decoherent walk evolution.
//!
//! A noisy step applies, in order: the coin (over-rotated by the coherent
//! angle error), the conditional shift, coin dephasing, and partial position
//! measurement. Both channels are held in Kraus form and checked for
//! completeness when built. Atom loss does not touch the state; it only
//! scales the number of usable experimental trials.
//!
//! [`trajectory_run`] unravels the same channels into pure-state
//! trajectories with sampled measurement outcomes.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rng::trial_rng;
use crate::walk::WalkState;
use crate::{CoinOperator, Distribution, Error, Result, C64};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Trace deviation tolerated after each noisy step.
pub const TRACE_TOL: f64 = 1e-10;
/// Tolerance of the Kraus completeness check `Σ K†K = 1`.
pub const KRAUS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Probability per step that the coin is dephased (measured).
    pub coin_dephasing_prob: f64,
    /// Probability per step that the position is measured.
    pub position_measure_prob: f64,
    /// Systematic over-rotation of the coin pulse, radians on the Bloch sphere.
    pub coin_angle_error: f64,
    /// Fraction of atoms surviving one step.
    pub survival_fraction_per_step: f64,
}

impl NoiseModel {
    pub fn new(
        coin_dephasing_prob: f64,
        position_measure_prob: f64,
        coin_angle_error: f64,
        survival_fraction_per_step: f64,
    ) -> Result<Self> {
        let model = Self { coin_dephasing_prob, position_measure_prob, coin_angle_error, survival_fraction_per_step };
        model.validate()?;
        Ok(model)
    }

    pub fn noiseless() -> Self {
        Self { coin_dephasing_prob: 0.0, position_measure_prob: 0.0, coin_angle_error: 0.0, survival_fraction_per_step: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = 0.0..=1.0;
        if !unit.contains(&self.coin_dephasing_prob) {
            return Err(Error::param("coin_dephasing_prob", format!("{} not in [0, 1]", self.coin_dephasing_prob)));
        }
        if !unit.contains(&self.position_measure_prob) {
            return Err(Error::param("position_measure_prob", format!("{} not in [0, 1]", self.position_measure_prob)));
        }
        if !self.coin_angle_error.is_finite() {
            return Err(Error::param("coin_angle_error", "must be finite"));
        }
        if !(self.survival_fraction_per_step > 0.0 && self.survival_fraction_per_step <= 1.0) {
            return Err(Error::param(
                "survival_fraction_per_step",
                format!("{} not in (0, 1]", self.survival_fraction_per_step),
            ));
        }
        Ok(())
    }

    pub fn is_coherent(&self) -> bool {
        self.coin_dephasing_prob == 0.0 && self.position_measure_prob == 0.0
    }

    /// Multiplier on the number of usable trials after `n` steps.
    pub fn trial_multiplier(&self, n: usize) -> f64 {
        self.survival_fraction_per_step.powi(n as i32)
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::noiseless()
    }
}

type Mat2 = [[C64; 2]; 2];

fn completeness_deviation(ops: &[Mat2]) -> f64 {
    let mut sum = [[ZERO; 2]; 2];
    for k in ops {
        for i in 0..2 {
            for j in 0..2 {
                sum[i][j] += k[0][i].conj() * k[0][j] + k[1][i].conj() * k[1][j];
            }
        }
    }
    let mut d: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let target = if i == j { 1.0 } else { 0.0 };
            d = d.max((sum[i][j] - C64::new(target, 0.0)).norm());
        }
    }
    d
}

/// A channel acting as `1_position ⊗ K` for each coin-space Kraus operator `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinChannel {
    kraus: Vec<Mat2>,
}

impl CoinChannel {
    pub fn new(kraus: Vec<Mat2>) -> Result<Self> {
        let deviation = completeness_deviation(&kraus);
        if deviation > KRAUS_TOL {
            return Err(Error::NumericDrift { quantity: "kraus completeness", deviation });
        }
        Ok(Self { kraus })
    }

    /// `ρ → (1 − p)ρ + p Σ_i Π_i ρ Π_i` over the coin projectors `Π_i`.
    pub fn dephasing(p: f64) -> Result<Self> {
        let keep = C64::new((1.0 - p).sqrt(), 0.0);
        let proj = C64::new(p.sqrt(), 0.0);
        Self::new(vec![[[keep, ZERO], [ZERO, keep]], [[proj, ZERO], [ZERO, ZERO]], [[ZERO, ZERO], [ZERO, proj]]])
    }

    pub fn kraus(&self) -> &[Mat2] {
        &self.kraus
    }

    fn apply_block(&self, b: &Mat2) -> Mat2 {
        let mut out = [[ZERO; 2]; 2];
        for k in &self.kraus {
            let kb = mat_mul(k, b);
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] += kb[i][0] * k[j][0].conj() + kb[i][1] * k[j][1].conj();
                }
            }
        }
        out
    }
}

/// Partial position measurement with Kraus operators `√(1−p)·1` and
/// `√p·(Π_x ⊗ 1)` for each lattice site `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionChannel {
    p: f64,
}

impl PositionChannel {
    pub fn new(p: f64, sites: usize) -> Result<Self> {
        // Σ K†K is diagonal; each site collects (1 − p) + p.
        let keep = (1.0 - p).sqrt();
        let proj = p.sqrt();
        let deviation =
            (0..sites).map(|_| (keep * keep + proj * proj - 1.0).abs()).fold(0.0, f64::max);
        if deviation > KRAUS_TOL {
            return Err(Error::NumericDrift { quantity: "kraus completeness", deviation });
        }
        Ok(Self { p })
    }
}

/// The per-step channels derived from a [`NoiseModel`].
#[derive(Debug, Clone)]
pub struct NoiseChannels {
    coin: CoinOperator,
    dephasing: Option<CoinChannel>,
    position: Option<PositionChannel>,
}

impl NoiseChannels {
    pub fn new(coin: &CoinOperator, noise: &NoiseModel, sites: usize) -> Result<Self> {
        noise.validate()?;
        let dephasing =
            (noise.coin_dephasing_prob > 0.0).then(|| CoinChannel::dephasing(noise.coin_dephasing_prob)).transpose()?;
        let position = (noise.position_measure_prob > 0.0)
            .then(|| PositionChannel::new(noise.position_measure_prob, sites))
            .transpose()?;
        Ok(Self { coin: coin.over_rotated(noise.coin_angle_error), dephasing, position })
    }

    /// The coin actually applied, after over-rotation.
    pub fn coin(&self) -> &CoinOperator {
        &self.coin
    }
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Density matrix over the coin ⊗ position space, row-major, index
/// `2·site + coin`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    origin_index: i64,
    half_width: usize,
    matrix: Vec<C64>,
    /// Inclusive site bounds of the nonzero region.
    support: (usize, usize),
}

impl DensityState {
    /// The projector `|ψ⟩⟨ψ|`.
    pub fn from_pure(state: &WalkState) -> Self {
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut matrix = vec![ZERO; dim * dim];
        for (i, a) in amps.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            for (j, b) in amps.iter().enumerate() {
                matrix[i * dim + j] = a * b.conj();
            }
        }
        let sites = dim / 2;
        let occupied = |s: &usize| amps[2 * s] != ZERO || amps[2 * s + 1] != ZERO;
        let lo = (0..sites).find(occupied).unwrap_or(0);
        let hi = (0..sites).rev().find(occupied).unwrap_or(0);
        Self { origin_index: state.origin_index(), half_width: state.half_width(), matrix, support: (lo, hi) }
    }

    pub fn dim(&self) -> usize {
        2 * (2 * self.half_width + 1)
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn origin_index(&self) -> i64 {
        self.origin_index
    }

    pub fn matrix(&self) -> &[C64] {
        &self.matrix
    }

    /// Entry `⟨x, c| ρ |y, c'⟩` by absolute positions.
    pub fn entry(&self, x: i64, c: usize, y: i64, c2: usize) -> C64 {
        let first = self.origin_index - self.half_width as i64;
        let sites = (2 * self.half_width + 1) as i64;
        let (sx, sy) = (x - first, y - first);
        if !(0..sites).contains(&sx) || !(0..sites).contains(&sy) {
            return ZERO;
        }
        self.matrix[(2 * sx as usize + c) * self.dim() + 2 * sy as usize + c2]
    }

    pub fn trace(&self) -> f64 {
        let d = self.dim();
        (0..d).map(|i| self.matrix[i * d + i].re).sum()
    }

    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ.
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut dev: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                dev = dev.max((self.matrix[i * d + j] - self.matrix[j * d + i].conj()).norm());
            }
        }
        dev
    }

    /// Largest entrywise distance to `other`, which must share the lattice.
    pub fn max_distance(&self, other: &DensityState) -> f64 {
        assert_eq!(self.matrix.len(), other.matrix.len(), "lattice mismatch");
        self.matrix.iter().zip(&other.matrix).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Diagonal traced over the coin.
    pub fn distribution(&self) -> Distribution {
        let d = self.dim();
        let probabilities: Vec<f64> = (0..d / 2)
            .map(|s| (self.matrix[2 * s * d + 2 * s].re + self.matrix[(2 * s + 1) * d + 2 * s + 1].re).max(0.0))
            .collect();
        Distribution::with_tolerance(self.origin_index, probabilities, 1e-9).expect("density trace lost")
    }

    fn site_range(&self) -> std::ops::RangeInclusive<usize> {
        self.support.0..=self.support.1
    }

    fn apply_coin(&mut self, coin: &CoinOperator) {
        let d = self.dim();
        let m = coin.entries();
        let sites: Vec<usize> = self.site_range().collect();
        for &x in &sites {
            for &y in &sites {
                let b = self.block(x, y);
                let cb = mat_mul(m, &b);
                let mut out = [[ZERO; 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        out[i][j] = cb[i][0] * m[j][0].conj() + cb[i][1] * m[j][1].conj();
                    }
                }
                self.set_block(x, y, &out, d);
            }
        }
    }

    #[inline]
    fn block(&self, x: usize, y: usize) -> Mat2 {
        let d = self.dim();
        let r0 = 2 * x * d + 2 * y;
        let r1 = r0 + d;
        [[self.matrix[r0], self.matrix[r0 + 1]], [self.matrix[r1], self.matrix[r1 + 1]]]
    }

    #[inline]
    fn set_block(&mut self, x: usize, y: usize, b: &Mat2, d: usize) {
        let r0 = 2 * x * d + 2 * y;
        let r1 = r0 + d;
        self.matrix[r0] = b[0][0];
        self.matrix[r0 + 1] = b[0][1];
        self.matrix[r1] = b[1][0];
        self.matrix[r1 + 1] = b[1][1];
    }

    fn shift(&mut self) -> Result<()> {
        let d = self.dim();
        let last = d / 2 - 1;
        let first_pos = self.origin_index - self.half_width as i64;
        let overflow = |site: usize| Error::LatticeOverflow { site: first_pos + site as i64, half_width: self.half_width };
        if self.matrix[0].re > 0.0 {
            return Err(overflow(0));
        }
        let top = 2 * last + 1;
        if self.matrix[top * d + top].re > 0.0 {
            return Err(overflow(last));
        }
        let (lo, hi) = self.support;
        // Row/column index after the shift; None when the component is
        // already zero and would leave the lattice.
        let target = |i: usize| -> Option<usize> {
            let (s, c) = (i / 2, i % 2);
            match c {
                0 => s.checked_sub(1).map(|t| 2 * t),
                _ => (s < last).then(|| 2 * (s + 1) + 1),
            }
        };
        let mut next = vec![ZERO; d * d];
        for i in 2 * lo..2 * hi + 2 {
            let Some(ti) = target(i) else { continue };
            for j in 2 * lo..2 * hi + 2 {
                let Some(tj) = target(j) else { continue };
                next[ti * d + tj] = self.matrix[i * d + j];
            }
        }
        self.matrix = next;
        self.support = (lo.saturating_sub(1), (hi + 1).min(last));
        Ok(())
    }

    fn apply_coin_channel(&mut self, channel: &CoinChannel) {
        let d = self.dim();
        let sites: Vec<usize> = self.site_range().collect();
        for &x in &sites {
            for &y in &sites {
                let b = channel.apply_block(&self.block(x, y));
                self.set_block(x, y, &b, d);
            }
        }
    }

    fn apply_position_channel(&mut self, channel: &PositionChannel) {
        let d = self.dim();
        let keep = 1.0 - channel.p;
        for x in self.site_range() {
            for y in self.site_range() {
                if x == y {
                    continue;
                }
                let r0 = 2 * x * d + 2 * y;
                for r in [r0, r0 + d] {
                    self.matrix[r] *= keep;
                    self.matrix[r + 1] *= keep;
                }
            }
        }
    }

    /// One noisy walk step with pre-built channels.
    pub fn step_with(&mut self, channels: &NoiseChannels) -> Result<()> {
        self.apply_coin(&channels.coin);
        self.shift()?;
        if let Some(ch) = &channels.dephasing {
            self.apply_coin_channel(ch);
        }
        if let Some(ch) = &channels.position {
            self.apply_position_channel(ch);
        }
        let deviation = (self.trace() - 1.0).abs();
        if !(deviation < TRACE_TOL) {
            return Err(Error::NumericDrift { quantity: "trace", deviation });
        }
        debug_assert!(self.hermiticity_deviation() < 1e-12);
        Ok(())
    }

    /// One noisy walk step.
    pub fn noisy_step(&mut self, coin: &CoinOperator, noise: &NoiseModel) -> Result<()> {
        let channels = NoiseChannels::new(coin, noise, self.dim() / 2)?;
        self.step_with(&channels)
    }
}

/// Result of a density-matrix run.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenRun {
    pub distribution: Distribution,
    /// `survival_fraction^n`: the fraction of trials still carrying atoms.
    pub trial_multiplier: f64,
}

fn check_lattice(initial: &WalkState, n: usize) -> Result<()> {
    let required = initial.support_radius() + n;
    if required > initial.half_width() {
        return Err(Error::InsufficientLattice { half_width: initial.half_width(), required });
    }
    Ok(())
}

/// `n` noisy steps from `|ψ⟩⟨ψ|`, returning the position distribution.
pub fn run_open(initial: &WalkState, n: usize, coin: &CoinOperator, noise: &NoiseModel) -> Result<OpenRun> {
    check_lattice(initial, n)?;
    let mut rho = DensityState::from_pure(initial);
    let channels = NoiseChannels::new(coin, noise, rho.dim() / 2)?;
    for _ in 0..n {
        rho.step_with(&channels)?;
    }
    Ok(OpenRun { distribution: rho.distribution(), trial_multiplier: noise.trial_multiplier(n) })
}

/// Variance of the noisy walk at each requested step count, from one pass.
/// Results follow the order of `n_list`.
pub fn open_variance_scan(
    initial: &WalkState,
    coin: &CoinOperator,
    noise: &NoiseModel,
    n_list: &[usize],
) -> Result<Vec<(usize, f64)>> {
    let max = n_list.iter().copied().max().unwrap_or(0);
    check_lattice(initial, max)?;
    let mut rho = DensityState::from_pure(initial);
    let channels = NoiseChannels::new(coin, noise, rho.dim() / 2)?;
    let mut by_n = std::collections::BTreeMap::new();
    for k in 0..=max {
        if k > 0 {
            rho.step_with(&channels)?;
        }
        if n_list.contains(&k) {
            by_n.insert(k, rho.distribution().moments().variance);
        }
    }
    Ok(n_list.iter().map(|n| (*n, by_n[n])).collect())
}

const TRIAL_CHUNK: usize = 256;

/// Monte Carlo unravelling of [`run_open`]: each trial evolves a pure state,
/// and after the coin and shift it undergoes a coin measurement with
/// probability `p_c` and a position measurement with probability `p_x`.
/// The returned distribution averages the trajectories' position
/// distributions.
///
/// Trial `t` draws only from the stream `(seed, t)`; chunks are summed in
/// index order, so the result is independent of thread scheduling.
pub fn trajectory_run(
    initial: &WalkState,
    n: usize,
    coin: &CoinOperator,
    noise: &NoiseModel,
    trials: usize,
    seed: u64,
) -> Result<Distribution> {
    if trials == 0 {
        return Err(Error::param("trials", "must be at least 1"));
    }
    check_lattice(initial, n)?;
    noise.validate()?;
    let coin = coin.over_rotated(noise.coin_angle_error);
    if noise.is_coherent() {
        let mut state = initial.clone();
        state.evolve(n, &coin)?;
        return Ok(state.distribution());
    }
    let sites = initial.sites();
    let run_trial = |t: usize| -> Result<Vec<f64>> {
        let mut rng = trial_rng(seed, t as u64);
        let mut state = initial.clone();
        for _ in 0..n {
            state.step(&coin)?;
            let (u_c, u_cm, u_x, u_xm): (f64, f64, f64, f64) = (rng.random(), rng.random(), rng.random(), rng.random());
            if u_c < noise.coin_dephasing_prob {
                state.measure_coin(u_cm);
            }
            if u_x < noise.position_measure_prob {
                state.measure_position(u_xm);
            }
        }
        Ok(state.distribution().probabilities().to_vec())
    };
    let chunk_sums: Vec<Vec<f64>> = (0..trials.div_ceil(TRIAL_CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let mut acc = vec![0.0; sites];
            for t in chunk * TRIAL_CHUNK..((chunk + 1) * TRIAL_CHUNK).min(trials) {
                for (a, p) in acc.iter_mut().zip(run_trial(t)?) {
                    *a += p;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = vec![0.0; sites];
    for chunk in chunk_sums {
        total.iter_mut().zip(chunk).for_each(|(a, p)| *a += p);
    }
    let inv = 1.0 / trials as f64;
    total.iter_mut().for_each(|p| *p *= inv);
    Distribution::with_tolerance(initial.origin_index(), total, 1e-9)
}
