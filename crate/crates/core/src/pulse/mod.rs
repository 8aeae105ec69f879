//! Physical layer: the pulses that realize each walk step.
//!
//! * [`rf`]: two-level Rabi dynamics for the coin rotation and the
//!   compensating π flip.
//! * [`raman`]: three-level stimulated Raman kick, its calibration, and the
//!   momentum it imparts.
//! * [`cat`]: N-atom product-state expansion and the two-branch cat state.

pub mod cat;
pub mod raman;
pub mod rf;

pub use cat::{cat_expansion, cat_state, CatState};
pub use raman::{
    calibrate_kick, momentum_kick, raman_evolve, raman_hamiltonian, translation_time, Branch, Direction,
    KickCalibration, RamanConfig, ThreeLevelState,
};
pub use rf::{design_pulse, rf_coin_matrix, rf_evolve, rf_evolve_rk4, PulseKind, RfPulse, TwoLevelAmps};
