//! Trap geometry, timing and measurement.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rng::trial_rng;
use crate::{Distribution, Error, Result};

/// `π w0² / λ`.
pub fn rayleigh_range(wavelength: f64, w0: f64) -> f64 {
    std::f64::consts::PI * w0 * w0 / wavelength
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapConfig {
    /// Trapping-beam wavelength, m.
    pub wavelength: f64,
    /// Beam waist, m.
    pub beam_waist_w0: f64,
    /// Half-length `Z` of the axial region usable for the walk, m.
    pub usable_half_range_z: f64,
    /// Walk step length, m.
    pub step_length: f64,
}

impl TrapConfig {
    pub fn new(wavelength: f64, beam_waist_w0: f64, usable_half_range_z: f64, step_length: f64) -> Result<Self> {
        for (name, v) in [
            ("wavelength", wavelength),
            ("beam_waist", beam_waist_w0),
            ("usable_half_range", usable_half_range_z),
            ("step_length", step_length),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::param(name, format!("must be positive, got {v}")));
            }
        }
        let zr = rayleigh_range(wavelength, beam_waist_w0);
        if usable_half_range_z > zr {
            return Err(Error::param(
                "usable_half_range",
                format!("{usable_half_range_z} m exceeds the Rayleigh range {zr} m"),
            ));
        }
        Ok(Self { wavelength, beam_waist_w0, usable_half_range_z, step_length })
    }

    pub fn rayleigh_range(&self) -> f64 {
        rayleigh_range(self.wavelength, self.beam_waist_w0)
    }
}

/// Number of steps whose light cone `±n·l` fits inside `±Z`.
pub fn max_steps(trap: &TrapConfig) -> usize {
    let ratio = trap.usable_half_range_z / trap.step_length;
    // Guard against ratios like 499.99999999999994 from decimal inputs.
    (ratio * (1.0 + 4.0 * f64::EPSILON)).floor() as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingBudget {
    /// Raman kick duration `t`, s.
    pub kick_time: f64,
    /// Coin pulse duration `τ`, s.
    pub hadamard_pulse_tau: f64,
    /// Bit-flip pulse duration `τ_bf`, s.
    pub bitflip_pulse_tau_bf: f64,
    /// Free flight over one step, s.
    pub translation_time: f64,
}

impl TimingBudget {
    pub fn new(kick_time: f64, hadamard_pulse_tau: f64, bitflip_pulse_tau_bf: f64, translation_time: f64) -> Result<Self> {
        for (name, v) in [
            ("kick_time", kick_time),
            ("hadamard_duration", hadamard_pulse_tau),
            ("bitflip_duration", bitflip_pulse_tau_bf),
            ("translation_time", translation_time),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::param(name, format!("must be non-negative, got {v}")));
            }
        }
        Ok(Self { kick_time, hadamard_pulse_tau, bitflip_pulse_tau_bf, translation_time })
    }

    pub fn per_step(&self) -> f64 {
        self.kick_time + self.hadamard_pulse_tau + self.translation_time + self.bitflip_pulse_tau_bf
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeMode {
    /// `n·(t + τ + t_move + τ_bf)`.
    #[default]
    PerStepSum,
    /// `n t + (n τ − 1) + n + n P/(m l) + (n τ_bf − 1)` read term by term in
    /// SI seconds, with `P/(m l) = 1/t_move`. Dimensionally inconsistent;
    /// kept for comparison only.
    PaperLiteral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TotalTime {
    pub mode: TimeMode,
    pub seconds: f64,
    pub units_consistent: bool,
}

pub fn total_time(budget: &TimingBudget, n: usize, mode: TimeMode) -> TotalTime {
    let nf = n as f64;
    match mode {
        TimeMode::PerStepSum => TotalTime { mode, seconds: nf * budget.per_step(), units_consistent: true },
        TimeMode::PaperLiteral => {
            let seconds = nf * budget.kick_time
                + (nf * budget.hadamard_pulse_tau - 1.0)
                + nf
                + nf / budget.translation_time
                + (nf * budget.bitflip_pulse_tau_bf - 1.0);
            TotalTime { mode, seconds, units_consistent: false }
        }
    }
}

/// Outcomes of repeated runs, each collapsing the walker into one microtrap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub trials: usize,
    /// Absolute lattice position observed in each trial.
    pub outcomes: Vec<i64>,
    pub seed: u64,
    pub origin_index: i64,
    pub half_width: usize,
}

impl MeasurementRecord {
    pub fn new(outcomes: Vec<i64>, seed: u64, origin_index: i64, half_width: usize) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::param("trials", "must be at least 1"));
        }
        let h = half_width as i64;
        if let Some(x) = outcomes.iter().find(|x| (**x - origin_index).abs() > h) {
            return Err(Error::LatticeOverflow { site: *x, half_width });
        }
        Ok(Self { trials: outcomes.len(), outcomes, seed, origin_index, half_width })
    }

    /// Occupation count per lattice site.
    pub fn counts(&self) -> Vec<u64> {
        let first = self.origin_index - self.half_width as i64;
        let mut counts = vec![0u64; 2 * self.half_width + 1];
        for x in &self.outcomes {
            counts[(x - first) as usize] += 1;
        }
        counts
    }

    /// Pools two records taken on the same lattice. The seed of `self` is
    /// kept.
    pub fn merge(&self, other: &MeasurementRecord) -> Result<MeasurementRecord> {
        if self.origin_index != other.origin_index || self.half_width != other.half_width {
            return Err(Error::LatticeMismatch("records cover different lattices".into()));
        }
        let mut outcomes = self.outcomes.clone();
        outcomes.extend_from_slice(&other.outcomes);
        Ok(MeasurementRecord { trials: outcomes.len(), outcomes, ..self.clone() })
    }
}

/// Draws `trials` independent positions from `d`. Trial `t` uses only the
/// stream `(seed, t)`.
pub fn sample_measurement(d: &Distribution, trials: usize, seed: u64) -> Result<MeasurementRecord> {
    if trials == 0 {
        return Err(Error::param("trials", "must be at least 1"));
    }
    let mut cdf = Vec::with_capacity(d.probabilities().len());
    let mut acc = 0.0;
    for p in d.probabilities() {
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    let first = d.first_position();
    let outcomes: Vec<i64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let u: f64 = trial_rng(seed, t).random();
            let target = u * total;
            // First bin whose cumulative mass exceeds the target; empty bins
            // never satisfy this strictly.
            let idx = cdf.partition_point(|&c| c <= target).min(cdf.len() - 1);
            first + idx as i64
        })
        .collect();
    MeasurementRecord::new(outcomes, seed, d.origin_index(), d.half_width())
}

/// Empirical frequencies of a record.
pub fn estimate_distribution(record: &MeasurementRecord) -> Result<Distribution> {
    let n = record.trials as f64;
    let probabilities = record.counts().into_iter().map(|c| c as f64 / n).collect();
    Distribution::new(record.origin_index, probabilities)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub steps: usize,
    pub max_steps: usize,
    pub rayleigh_range_m: f64,
    pub walk_span_m: f64,
    pub usable_half_range_m: f64,
    pub total_time: TotalTime,
    pub constraints: Vec<ConstraintCheck>,
    pub feasible: bool,
}

impl FeasibilityReport {
    pub fn failed(&self) -> impl Iterator<Item = &ConstraintCheck> {
        self.constraints.iter().filter(|c| !c.pass)
    }
}

pub fn plan_experiment(trap: &TrapConfig, budget: &TimingBudget, n: usize) -> FeasibilityReport {
    let max = max_steps(trap);
    let span = n as f64 * trap.step_length;
    let zr = trap.rayleigh_range();
    let constraints = vec![
        ConstraintCheck {
            name: "step_budget".into(),
            pass: n <= max,
            detail: format!("{n} steps requested, {max} fit in ±Z"),
        },
        ConstraintCheck {
            name: "walk_span".into(),
            pass: span <= trap.usable_half_range_z * (1.0 + 4.0 * f64::EPSILON),
            detail: format!("light cone ±{span:.6e} m against ±{:.6e} m", trap.usable_half_range_z),
        },
        ConstraintCheck {
            name: "rayleigh_range".into(),
            pass: trap.usable_half_range_z <= zr,
            detail: format!("Z = {:.6e} m, Z_R = {zr:.6e} m", trap.usable_half_range_z),
        },
    ];
    let feasible = constraints.iter().all(|c| c.pass);
    FeasibilityReport {
        steps: n,
        max_steps: max,
        rayleigh_range_m: zr,
        walk_span_m: span,
        usable_half_range_m: trap.usable_half_range_z,
        total_time: total_time(budget, n, TimeMode::PerStepSum),
        constraints,
        feasible,
    }
}
