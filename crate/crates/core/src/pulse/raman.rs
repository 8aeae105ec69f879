//! Stimulated Raman kick through the intermediate state `|e⟩`.
//!
//! States are ordered `(|0⟩, |e⟩, |1⟩)`. Both detunings are single-photon
//! detunings from `|e⟩`, so the two-photon detuning is `Δ1 − Δ2` and
//! `Δ1 = Δ2` is Raman resonance.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64, HBAR};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RamanConfig {
    /// Dipole couplings, rad/s.
    pub v1: f64,
    pub v2: f64,
    /// Single-photon detunings, rad/s.
    pub delta1: f64,
    pub delta2: f64,
    /// Field phases, rad.
    pub phi1: f64,
    pub phi2: f64,
    /// Signed wave numbers along the trap axis, rad/m.
    pub k1: f64,
    pub k2: f64,
    /// kg.
    pub atom_mass: f64,
    /// m.
    pub step_length: f64,
}

impl RamanConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("v1", self.v1), ("v2", self.v2)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::param(name, format!("coupling must be non-negative, got {v}")));
            }
        }
        for (name, v) in [
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("phi1", self.phi1),
            ("phi2", self.phi2),
            ("k1", self.k1),
            ("k2", self.k2),
        ] {
            if !v.is_finite() {
                return Err(Error::param(name, "must be finite"));
            }
        }
        if !(self.atom_mass > 0.0) {
            return Err(Error::param("atom_mass", "must be positive"));
        }
        if !(self.step_length > 0.0) {
            return Err(Error::param("step_length", "must be positive"));
        }
        Ok(())
    }

    /// Counter-propagating beams of wavelength `wavelength`: `k1 = +k`,
    /// `k2 = −k`.
    pub fn counterpropagating(wavelength: f64) -> (f64, f64) {
        let k = 2.0 * std::f64::consts::PI / wavelength;
        (k, -k)
    }

    /// Adiabatic-elimination estimate `V1·V2 / (2Δ1)` of the two-photon
    /// Rabi frequency.
    pub fn effective_rabi(&self) -> f64 {
        self.v1 * self.v2 / (2.0 * self.delta1.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `|0⟩ → |e⟩ → |1⟩`, energies referenced to `|0⟩`.
    A,
    /// `|1⟩ → |e⟩ → |0⟩`, energies referenced to `|1⟩`.
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Kick received on `|0⟩ → |1⟩`.
    Left,
    /// Kick received on `|1⟩ → |0⟩`.
    Right,
}

/// Rotating-wave Hamiltonian of one kick branch, in rad/s.
///
/// Couplings carry conjugate phases on transposed elements so the matrix is
/// Hermitian by construction.
pub fn raman_hamiltonian(config: &RamanConfig, branch: Branch) -> Matrix3<C64> {
    let c1 = C64::from_polar(-config.v1 / 2.0, -config.phi1);
    let c2 = C64::from_polar(-config.v2 / 2.0, config.phi2);
    let real = |x: f64| C64::new(x, 0.0);
    let mut h = Matrix3::<C64>::zeros();
    match branch {
        Branch::A => {
            h[(1, 1)] = real(config.delta1);
            h[(2, 2)] = real(config.delta1 - config.delta2);
            // |e⟩⟨0| and |e⟩⟨1|
            h[(1, 0)] = c1;
            h[(1, 2)] = c2;
        }
        Branch::B => {
            h[(0, 0)] = real(config.delta2 - config.delta1);
            h[(1, 1)] = real(config.delta2);
            h[(1, 2)] = c2.conj();
            h[(1, 0)] = c1.conj();
        }
    }
    h[(0, 1)] = h[(1, 0)].conj();
    h[(2, 1)] = h[(1, 2)].conj();
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeLevelState {
    /// Amplitudes of `|0⟩, |e⟩, |1⟩`.
    pub amplitudes: [C64; 3],
}

impl ThreeLevelState {
    pub fn new(amplitudes: [C64; 3]) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes })
    }

    pub fn basis(index: usize) -> Self {
        let mut amplitudes = [C64::new(0.0, 0.0); 3];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn populations(&self) -> [f64; 3] {
        self.amplitudes.map(|a| a.norm_sqr())
    }

    pub fn norm_sq(&self) -> f64 {
        self.populations().iter().sum()
    }
}

fn hermiticity_deviation(h: &Matrix3<C64>) -> f64 {
    (h - h.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `exp(−iHt)` through the eigendecomposition of a Hermitian `H`.
#[derive(Debug, Clone)]
pub struct HermitianPropagator {
    energies: Vector3<f64>,
    vectors: Matrix3<C64>,
}

impl HermitianPropagator {
    pub fn new(h: &Matrix3<C64>) -> Result<Self> {
        let scale = h.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let deviation = hermiticity_deviation(h);
        if deviation > 1e-12 * scale {
            return Err(Error::NonHermitian { deviation });
        }
        let eig = h.symmetric_eigen();
        Ok(Self { energies: eig.eigenvalues, vectors: eig.eigenvectors })
    }

    pub fn at(&self, t: f64) -> Matrix3<C64> {
        let phases = Matrix3::from_diagonal(&self.energies.map(|e| C64::from_polar(1.0, -e * t)));
        self.vectors * phases * self.vectors.adjoint()
    }

    /// `⟨to| exp(−iHt) |from⟩`.
    pub fn element(&self, to: usize, from: usize, t: f64) -> C64 {
        (0..3)
            .map(|k| self.vectors[(to, k)] * C64::from_polar(1.0, -self.energies[k] * t) * self.vectors[(from, k)].conj())
            .sum()
    }

    pub fn apply(&self, state: &ThreeLevelState, t: f64) -> ThreeLevelState {
        let u = self.at(t);
        let v = u * Vector3::from(state.amplitudes);
        ThreeLevelState { amplitudes: [v[0], v[1], v[2]] }
    }
}

/// Evolves `state` for time `t` under the Hermitian `h`.
pub fn raman_evolve(state: &ThreeLevelState, h: &Matrix3<C64>, t: f64) -> Result<ThreeLevelState> {
    Ok(HermitianPropagator::new(h)?.apply(state, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KickCalibration {
    /// Kick duration maximizing the transfer, s.
    pub t_kick: f64,
    /// Transfer probability `|⟨1| e^{−iH_a t} |0⟩|²` at `t_kick`.
    pub fidelity: f64,
    /// Largest `|e⟩` population sampled over `[0, t_kick]`.
    pub max_excited_population: f64,
}

const SCAN_POINTS: usize = 4096;
const EXCITED_SAMPLES: usize = 2000;

/// Finds the kick duration in `(0, t_max]` maximizing the `|0⟩ → |1⟩`
/// transfer of branch A.
///
/// A coarse grid locates the earliest point within `1e-9` of the grid
/// maximum; golden-section search then refines it to a relative precision of
/// `1e-9` in `t`. A maximum on either end of the grid means `t_max` does not
/// resolve a transfer peak and is reported as [`Error::KickAtBoundary`],
/// which still carries the calibration.
pub fn calibrate_kick(config: &RamanConfig, t_max: f64) -> Result<KickCalibration> {
    config.validate()?;
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::param("t_max", format!("must be positive, got {t_max}")));
    }
    let prop = HermitianPropagator::new(&raman_hamiltonian(config, Branch::A))?;
    let transfer = |t: f64| prop.element(2, 0, t).norm_sqr();
    let dt = t_max / SCAN_POINTS as f64;
    let grid: Vec<f64> = (1..=SCAN_POINTS).map(|i| transfer(i as f64 * dt)).collect();
    let best = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let idx = grid.iter().position(|&f| f >= best - 1e-9).expect("grid is non-empty");
    let at_boundary = idx == 0 || idx == SCAN_POINTS - 1;

    let t_grid = (idx + 1) as f64 * dt;
    let (mut a, mut b) = (t_grid - dt, (t_grid + dt).min(t_max));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (transfer(c), transfer(d));
    while (b - a) > 1e-9 * t_grid {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = transfer(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = transfer(d);
        }
    }
    let t_refined = (a + b) / 2.0;
    let (t_kick, fidelity) = {
        let f = transfer(t_refined);
        if f >= grid[idx] { (t_refined, f) } else { (t_grid, grid[idx]) }
    };
    let max_excited_population = (0..=EXCITED_SAMPLES)
        .map(|k| prop.element(1, 0, t_kick * k as f64 / EXCITED_SAMPLES as f64).norm_sqr())
        .fold(0.0, f64::max);
    let calibration = KickCalibration { t_kick, fidelity, max_excited_population };
    if at_boundary {
        return Err(Error::KickAtBoundary(calibration));
    }
    Ok(calibration)
}

/// Momentum imparted by one kick, kg·m/s: `ħ(k1 − k2)` on `|0⟩ → |1⟩`,
/// `ħ(k2 − k1)` on the reverse path.
pub fn momentum_kick(config: &RamanConfig, direction: Direction) -> Result<f64> {
    if config.k1 == config.k2 {
        return Err(Error::param("k1", "equal wave numbers impart no momentum"));
    }
    Ok(match direction {
        Direction::Left => HBAR * (config.k1 - config.k2),
        Direction::Right => HBAR * (config.k2 - config.k1),
    })
}

/// Time for the kicked condensate to travel one step, `m·l/|P|`.
pub fn translation_time(momentum: f64, config: &RamanConfig) -> Result<f64> {
    if momentum == 0.0 || !momentum.is_finite() {
        return Err(Error::param("momentum", "must be nonzero"));
    }
    Ok(config.atom_mass * config.step_length / momentum.abs())
}
