//! Simulation of the one-dimensional discrete Hadamard walk realized with a
//! trapped Bose-Einstein condensate.
//!
//! The crate is split into four layers:
//!
//! * [`walk`]: exact unitary lattice walk (coin, conditional shift, the
//!   physically ordered shift-with-flip plus compensating bit flip) and the
//!   classical reference walk.
//! * [`open`]: density-matrix evolution with coin dephasing, position
//!   measurement and coherent coin over-rotation, plus a Monte Carlo
//!   trajectory unravelling of the same channels.
//! * [`pulse`]: rf Rabi dynamics, three-level stimulated Raman kicks,
//!   momentum kinematics and cat-state algebra.
//! * [`apparatus`]: trap geometry, timing budget, feasibility planning and
//!   microtrap measurement sampling.

pub mod apparatus;
pub mod coin;
pub mod distribution;
mod error;
pub mod open;
pub mod pulse;
pub mod rng;
pub mod walk;

pub use num_complex::Complex64 as C64;

pub use apparatus::{MeasurementRecord, TimeMode, TimingBudget, TrapConfig};
pub use coin::CoinOperator;
pub use distribution::{classical_walk, Distribution, Moments};
pub use error::{Error, Result};
pub use open::{DensityState, NoiseModel};
pub use pulse::{CatState, RamanConfig, RfPulse, ThreeLevelState, TwoLevelAmps};
pub use walk::WalkState;

/// Reduced Planck constant, J·s (CODATA 2018, exact in the SI).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Atomic mass unit, kg.
pub const AMU: f64 = 1.660_539_066_60e-27;
