//! Shared fixtures for the criterion benches.

use qwalk_core::pulse::RamanConfig;
use qwalk_core::walk::coin_symmetric;
use qwalk_core::{WalkState, AMU};

/// Symmetric-coin point start with room for `steps` steps.
pub fn symmetric_start(steps: usize) -> WalkState {
    WalkState::point(0, steps, coin_symmetric()).expect("valid start")
}

/// Far-detuned kick, `Δ/V = 100`, Rb-87 at 780 nm.
pub fn far_detuned_kick() -> RamanConfig {
    let v = 2.0 * std::f64::consts::PI * 5.0e3;
    let (k1, k2) = RamanConfig::counterpropagating(780e-9);
    RamanConfig {
        v1: v,
        v2: v,
        delta1: 100.0 * v,
        delta2: 100.0 * v,
        phi1: 0.0,
        phi2: 0.0,
        k1,
        k2,
        atom_mass: 86.909_180_5 * AMU,
        step_length: 10e-6,
    }
}
