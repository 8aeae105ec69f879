//! Two-level rf dynamics.
//!
//! The amplitudes `(a, b)` of `|0⟩, |1⟩` obey
//! `i d/dτ (a, b)ᵀ = [[0, ω_R/2], [ω_R/2, Δ]] (a, b)ᵀ`, with ħ absorbed into
//! angular frequencies.

use serde::{Deserialize, Serialize};

use crate::{CoinOperator, Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RfPulse {
    /// ω_R, rad/s.
    pub rabi_frequency: f64,
    /// Δ, rad/s.
    pub detuning: f64,
    /// τ, s.
    pub duration: f64,
}

impl RfPulse {
    pub fn new(rabi_frequency: f64, detuning: f64, duration: f64) -> Result<Self> {
        if !(rabi_frequency > 0.0) || !rabi_frequency.is_finite() {
            return Err(Error::param("rabi_frequency", format!("must be positive, got {rabi_frequency}")));
        }
        if !detuning.is_finite() {
            return Err(Error::param("detuning", "must be finite"));
        }
        if !(duration >= 0.0) || !duration.is_finite() {
            return Err(Error::param("duration", format!("must be non-negative, got {duration}")));
        }
        Ok(Self { rabi_frequency, detuning, duration })
    }

    /// Generalized Rabi frequency `√(ω_R² + Δ²)`.
    pub fn generalized_rabi(&self) -> f64 {
        self.rabi_frequency.hypot(self.detuning)
    }

    /// Bloch rotation angle `ω_R τ` of a resonant pulse.
    pub fn area(&self) -> f64 {
        self.rabi_frequency * self.duration
    }

    pub fn with_duration(self, duration: f64) -> Self {
        Self { duration, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelAmps {
    pub a: C64,
    pub b: C64,
}

impl TwoLevelAmps {
    pub fn new(a: C64, b: C64) -> Result<Self> {
        let norm_sq = a.norm_sqr() + b.norm_sqr();
        if (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { a, b })
    }

    /// All population in `|0⟩`.
    pub fn ground() -> Self {
        Self { a: C64::new(1.0, 0.0), b: C64::new(0.0, 0.0) }
    }

    pub fn populations(&self) -> (f64, f64) {
        (self.a.norm_sqr(), self.b.norm_sqr())
    }

    pub fn norm_sq(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }
}

/// Closed-form propagator `exp(−iHτ)`:
/// `e^{−iΔτ/2} [cos(Ωτ/2)·1 − i sin(Ωτ/2)·(ω_R σx − Δ σz)/Ω]`.
pub fn rf_propagator(pulse: &RfPulse) -> [[C64; 2]; 2] {
    let omega = pulse.generalized_rabi();
    let (s, c) = (omega * pulse.duration / 2.0).sin_cos();
    let nx = pulse.rabi_frequency / omega;
    let nz = -pulse.detuning / omega;
    let g = C64::from_polar(1.0, -pulse.detuning * pulse.duration / 2.0);
    [
        [g * C64::new(c, -s * nz), g * C64::new(0.0, -s * nx)],
        [g * C64::new(0.0, -s * nx), g * C64::new(c, s * nz)],
    ]
}

/// Evolves the amplitudes through the pulse with the closed-form propagator.
pub fn rf_evolve(amps: &TwoLevelAmps, pulse: &RfPulse) -> TwoLevelAmps {
    let u = rf_propagator(pulse);
    TwoLevelAmps { a: u[0][0] * amps.a + u[0][1] * amps.b, b: u[1][0] * amps.a + u[1][1] * amps.b }
}

/// Largest phase advance `h·|λ|max` allowed per RK4 step.
const RK4_PHASE_STEP: f64 = 2e-3;

/// Evolves the amplitudes by classical fourth-order Runge-Kutta integration
/// of the Schrödinger equation, with the step chosen so that the phase
/// advance per step stays below `2·10⁻³` rad.
pub fn rf_evolve_rk4(amps: &TwoLevelAmps, pulse: &RfPulse) -> TwoLevelAmps {
    if pulse.duration == 0.0 {
        return *amps;
    }
    let half_w = pulse.rabi_frequency / 2.0;
    let delta = pulse.detuning;
    let lambda_max = (delta.abs() + pulse.generalized_rabi()) / 2.0;
    let steps = ((pulse.duration * lambda_max / RK4_PHASE_STEP).ceil() as usize).max(1);
    let h = pulse.duration / steps as f64;
    let mi = C64::new(0.0, -1.0);
    // d/dτ (a, b) = −i H (a, b)
    let deriv = |a: C64, b: C64| (mi * (b * half_w), mi * (a * half_w + b * delta));
    let (mut a, mut b) = (amps.a, amps.b);
    for _ in 0..steps {
        let k1 = deriv(a, b);
        let k2 = deriv(a + k1.0 * (h / 2.0), b + k1.1 * (h / 2.0));
        let k3 = deriv(a + k2.0 * (h / 2.0), b + k2.1 * (h / 2.0));
        let k4 = deriv(a + k3.0 * h, b + k3.1 * h);
        a += (k1.0 + k2.0 * 2.0 + k3.0 * 2.0 + k4.0) * (h / 6.0);
        b += (k1.1 + k2.1 * 2.0 + k3.1 * 2.0 + k4.1) * (h / 6.0);
    }
    TwoLevelAmps { a, b }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PulseKind {
    /// π/2 rotation: equal populations from a basis state.
    HadamardRotation,
    /// π rotation: the compensating bit flip.
    PiFlip,
}

/// Resonant pulse of the requested kind at Rabi frequency `rabi_frequency`.
pub fn design_pulse(kind: PulseKind, rabi_frequency: f64) -> Result<RfPulse> {
    let area = match kind {
        PulseKind::HadamardRotation => std::f64::consts::FRAC_PI_2,
        PulseKind::PiFlip => std::f64::consts::PI,
    };
    RfPulse::new(rabi_frequency, 0.0, area / rabi_frequency)
}

/// The coin realized by a resonant rf pulse:
/// `cos(ω_Rτ/2)·1 − i sin(ω_Rτ/2)·σx`. This is not the Hadamard matrix; a
/// π/2 pulse gives `(1/√2)[[1, −i], [−i, 1]]`.
pub fn rf_coin_matrix(pulse: &RfPulse) -> Result<CoinOperator> {
    if pulse.detuning != 0.0 {
        return Err(Error::param("detuning", "only resonant pulses define a coin"));
    }
    CoinOperator::new(rf_propagator(pulse))
}
