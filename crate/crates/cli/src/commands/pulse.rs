use std::f64::consts::PI;

use qwalk_core::pulse::{
    calibrate_kick, design_pulse, momentum_kick, rf_coin_matrix, rf_evolve, rf_evolve_rk4, translation_time,
    Direction, KickCalibration, PulseKind,
};
use qwalk_core::{Error, RfPulse, TwoLevelAmps};
use serde_json::{json, Value};

use super::{complex_json, raman_config, step_length};
use crate::config::{Config, Dim};
use crate::output::{csv, float, SCHEMA_VERSION};
use crate::{CliError, CliResult, Document, Outcome, EXIT_NUMERIC};

pub fn rf(cfg: &Config) -> CliResult<Outcome> {
    let rabi = cfg.require_quantity("rabi_frequency", Dim::AngularRate)?;
    let detuning = cfg.quantity("detuning", Dim::AngularRate)?.unwrap_or(0.0);
    let duration = cfg.quantity("duration", Dim::Time)?;
    let kind = cfg.choice("pulse", &["pi", "half-pi"])?;
    let samples = cfg.count("samples")?.unwrap_or(100).max(1);
    let integrator = cfg.choice("integrator", &["closed-form", "rk4"])?.unwrap_or("closed-form");
    cfg.finish()?;

    let pulse = match (duration, kind) {
        (Some(t), None) => RfPulse::new(rabi, detuning, t)?,
        (None, Some(k)) => {
            let kind = if k == "pi" { PulseKind::PiFlip } else { PulseKind::HadamardRotation };
            RfPulse { detuning, ..design_pulse(kind, rabi)? }
        }
        _ => return Err(CliError::parse("give exactly one of `duration` or `pulse`")),
    };
    let evolve = |p: &RfPulse| {
        if integrator == "rk4" {
            rf_evolve_rk4(&TwoLevelAmps::ground(), p)
        } else {
            rf_evolve(&TwoLevelAmps::ground(), p)
        }
    };
    let series: Vec<(f64, (f64, f64))> = (0..=samples)
        .map(|k| {
            let tau = pulse.duration * k as f64 / samples as f64;
            (tau, evolve(&pulse.with_duration(tau)).populations())
        })
        .collect();
    let last = evolve(&pulse);
    let coin = if detuning == 0.0 {
        let m = rf_coin_matrix(&pulse)?;
        Value::Array(m.entries().iter().map(|row| Value::Array(row.iter().map(|z| complex_json(*z)).collect())).collect())
    } else {
        Value::Null
    };
    let table = csv(
        &["tau_s", "population_0", "population_1"],
        series.iter().map(|(t, (p0, p1))| vec![float(*t), float(*p0), float(*p1)]),
    );
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "pulse rf",
        "rabi_frequency_rad_s": rabi,
        "detuning_rad_s": detuning,
        "duration_s": pulse.duration,
        "area_rad": pulse.area(),
        "generalized_rabi_rad_s": pulse.generalized_rabi(),
        "integrator": integrator,
        "final": {
            "population_0": last.populations().0,
            "population_1": last.populations().1,
            "amplitude_0": complex_json(last.a),
            "amplitude_1": complex_json(last.b),
        },
        "transfer": last.populations().1,
        "coin": coin,
        "samples": series.iter().map(|(t, (p0, p1))| json!({"tau_s": t, "population_0": p0, "population_1": p1})).collect::<Vec<_>>(),
    });
    Ok(Outcome::ok(vec![Document::csv("pulse_rf.csv", table), Document::json("pulse_rf.json", &report)]))
}

/// Calibration that may have hit the end of the search window; the flag is
/// part of the result rather than an error.
pub(crate) fn calibrate(cfg: &qwalk_core::RamanConfig, t_max: f64) -> CliResult<(KickCalibration, bool)> {
    match calibrate_kick(cfg, t_max) {
        Ok(c) => Ok((c, false)),
        Err(Error::KickAtBoundary(c)) => Ok((c, true)),
        Err(e) => Err(e.into()),
    }
}

/// Search window: given, or one effective Rabi period (twice the time of
/// the first transfer peak).
pub(crate) fn t_max(cfg: &Config, raman: &qwalk_core::RamanConfig) -> CliResult<f64> {
    match cfg.quantity("t_max", Dim::Time)? {
        Some(t) => Ok(t),
        None if raman.effective_rabi() > 0.0 => Ok(2.0 * PI / raman.effective_rabi()),
        None => Err(CliError::parse("`t_max` is required when a coupling is zero")),
    }
}

pub fn raman(cfg: &Config) -> CliResult<Outcome> {
    let l = step_length(cfg)?;
    let raman = raman_config(cfg, l, true)?;
    let t_max = t_max(cfg, &raman)?;
    cfg.finish()?;

    let (cal, at_boundary) = calibrate(&raman, t_max)?;
    let left = momentum_kick(&raman, Direction::Left)?;
    let right = momentum_kick(&raman, Direction::Right)?;
    let t_move = translation_time(left, &raman)?;
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "pulse raman",
        "v1_rad_s": raman.v1,
        "v2_rad_s": raman.v2,
        "delta1_rad_s": raman.delta1,
        "delta2_rad_s": raman.delta2,
        "effective_rabi_rad_s": raman.effective_rabi(),
        "t_max_s": t_max,
        "t_kick_s": cal.t_kick,
        "fidelity": cal.fidelity,
        "max_excited_population": cal.max_excited_population,
        "kick_at_boundary": at_boundary,
        "momentum_left_kg_m_s": left,
        "momentum_right_kg_m_s": right,
        "velocity_m_s": left.abs() / raman.atom_mass,
        "step_length_m": l,
        "translation_time_s": t_move,
    });
    let docs = vec![Document::json("pulse_raman.json", &report)];
    if at_boundary {
        return Ok(Outcome {
            documents: docs,
            exit: EXIT_NUMERIC,
            message: Some("transfer maximum sits on the edge of the search window".into()),
        });
    }
    Ok(Outcome::ok(docs))
}
