//! Command implementations and the config readers they share.

pub mod experiment;
pub mod plan;
pub mod pulse;
pub mod scan;
pub mod walk;

use std::f64::consts::FRAC_1_SQRT_2;

use qwalk_core::pulse::{design_pulse, rf_coin_matrix, PulseKind};
use qwalk_core::walk::{coin_one, coin_symmetric, coin_zero, envelope_radius};
use qwalk_core::{CoinOperator, NoiseModel, RamanConfig, TimeMode, TrapConfig, WalkState, C64};
use serde_json::{json, Value};

use crate::config::{Config, Dim};
use crate::{CliError, CliResult, DEFAULT_SEED};

pub(crate) const DEFAULT_STEP_LENGTH: f64 = 10e-6;

pub(crate) fn seed(cfg: &Config, flag: Option<u64>) -> CliResult<u64> {
    let from_cfg = cfg.unsigned("seed")?;
    Ok(flag.or(from_cfg).unwrap_or(DEFAULT_SEED))
}

/// `coin` key: hadamard (default), rf-pi-2, identity or custom (`coin_00`
/// … `coin_11` as `re, im`).
pub(crate) fn coin(cfg: &Config) -> CliResult<(CoinOperator, &'static str)> {
    let name = cfg.choice("coin", &["hadamard", "rf-pi-2", "identity", "custom"])?.unwrap_or("hadamard");
    let coin = match name {
        "hadamard" => CoinOperator::hadamard(),
        "identity" => CoinOperator::identity(),
        // The coin is fixed by the pulse area; any Rabi frequency gives it.
        "rf-pi-2" => rf_coin_matrix(&design_pulse(PulseKind::HadamardRotation, 1.0)?)?,
        _ => {
            let mut m = [[C64::new(0.0, 0.0); 2]; 2];
            for (i, row) in m.iter_mut().enumerate() {
                for (j, z) in row.iter_mut().enumerate() {
                    let key = format!("coin_{i}{j}");
                    *z = cfg
                        .complex(&key)?
                        .ok_or_else(|| CliError::parse(format!("coin = custom needs `{key}`")))?;
                }
            }
            CoinOperator::new(m)?
        }
    };
    Ok((coin, name))
}

/// `initial_coin` key: zero, one, symmetric `(|0⟩+i|1⟩)/√2` or balanced
/// `(|0⟩+|1⟩)/√2`.
pub(crate) fn initial_coin(cfg: &Config, default: &'static str) -> CliResult<([C64; 2], &'static str)> {
    let name = cfg.choice("initial_coin", &["zero", "one", "symmetric", "balanced"])?.unwrap_or(default);
    let amps = match name {
        "zero" => coin_zero(),
        "one" => coin_one(),
        "symmetric" => coin_symmetric(),
        _ => [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)],
    };
    Ok((amps, name))
}

pub(crate) struct Start {
    pub state: WalkState,
    pub coin_name: &'static str,
    pub envelope_width: Option<f64>,
}

/// Point or Gaussian start sized for `steps` steps unless `half_width` is
/// given explicitly.
pub(crate) fn start(cfg: &Config, steps: usize, default_coin: &'static str, step_length: f64) -> CliResult<Start> {
    let (amps, coin_name) = initial_coin(cfg, default_coin)?;
    let origin = cfg.integer("origin_index")?.unwrap_or(0);
    let width = cfg.real("envelope_width")?;
    let radius = width.map_or(0, envelope_radius);
    let half_width = match cfg.count("half_width")? {
        Some(h) => h,
        None => steps.checked_add(radius).ok_or_else(|| CliError::parse("steps too large"))?,
    };
    let state = match width {
        Some(w) => WalkState::gaussian(origin, half_width, amps, w)?,
        None => WalkState::point(origin, half_width, amps)?,
    };
    Ok(Start { state: state.with_step_length(step_length), coin_name, envelope_width: width })
}

pub(crate) fn noise(cfg: &Config) -> CliResult<NoiseModel> {
    Ok(NoiseModel::new(
        cfg.real("coin_dephasing_prob")?.unwrap_or(0.0),
        cfg.real("position_measure_prob")?.unwrap_or(0.0),
        cfg.quantity("coin_angle_error", Dim::Angle)?.unwrap_or(0.0),
        cfg.real("survival_fraction_per_step")?.unwrap_or(1.0),
    )?)
}

pub(crate) fn noise_json(n: &NoiseModel) -> Value {
    json!({
        "coin_dephasing_prob": n.coin_dephasing_prob,
        "position_measure_prob": n.position_measure_prob,
        "coin_angle_error_rad": n.coin_angle_error,
        "survival_fraction_per_step": n.survival_fraction_per_step,
    })
}

pub(crate) fn step_length(cfg: &Config) -> CliResult<f64> {
    let l = cfg.quantity("step_length", Dim::Length)?.unwrap_or(DEFAULT_STEP_LENGTH);
    if !(l > 0.0) {
        return Err(CliError::parse("step_length must be positive"));
    }
    Ok(l)
}

pub(crate) fn trap(cfg: &Config) -> CliResult<TrapConfig> {
    Ok(TrapConfig::new(
        cfg.require_quantity("wavelength", Dim::Length)?,
        cfg.require_quantity("beam_waist", Dim::Length)?,
        cfg.require_quantity("usable_half_range", Dim::Length)?,
        step_length(cfg)?,
    )?)
}

pub(crate) fn trap_json(t: &TrapConfig) -> Value {
    json!({
        "wavelength_m": t.wavelength,
        "beam_waist_m": t.beam_waist_w0,
        "usable_half_range_m": t.usable_half_range_z,
        "step_length_m": t.step_length,
        "rayleigh_range_m": t.rayleigh_range(),
    })
}

pub(crate) fn time_mode(cfg: &Config) -> CliResult<TimeMode> {
    Ok(match cfg.choice("time_mode", &["per-step-sum", "paper-literal"])? {
        Some("paper-literal") => TimeMode::PaperLiteral,
        _ => TimeMode::PerStepSum,
    })
}

/// Raman beam parameters. Wave numbers come from `raman_wavelength`
/// (counter-propagating beams) or explicit `k1`, `k2`. When `couplings` is
/// false the coupling keys are optional and default to zero.
pub(crate) fn raman_config(cfg: &Config, step_length: f64, couplings: bool) -> CliResult<RamanConfig> {
    let rate = |key: &str| -> CliResult<f64> {
        if couplings {
            Ok(cfg.require_quantity(key, Dim::AngularRate)?)
        } else {
            Ok(cfg.quantity(key, Dim::AngularRate)?.unwrap_or(0.0))
        }
    };
    let (v1, v2, delta1, delta2) = (rate("v1")?, rate("v2")?, rate("delta1")?, rate("delta2")?);
    let wavelength = cfg.quantity("raman_wavelength", Dim::Length)?;
    let k = (cfg.quantity("k1", Dim::WaveNumber)?, cfg.quantity("k2", Dim::WaveNumber)?);
    let (k1, k2) = match (wavelength, k) {
        (Some(w), (None, None)) if w > 0.0 => RamanConfig::counterpropagating(w),
        (None, (Some(k1), Some(k2))) => (k1, k2),
        _ => return Err(CliError::parse("give either `raman_wavelength` or both `k1` and `k2`")),
    };
    let config = RamanConfig {
        v1,
        v2,
        delta1,
        delta2,
        phi1: cfg.quantity("phi1", Dim::Angle)?.unwrap_or(0.0),
        phi2: cfg.quantity("phi2", Dim::Angle)?.unwrap_or(0.0),
        k1,
        k2,
        atom_mass: cfg.require_quantity("atom_mass", Dim::Mass)?,
        step_length,
    };
    config.validate()?;
    Ok(config)
}

pub(crate) fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}
