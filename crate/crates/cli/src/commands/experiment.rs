use std::f64::consts::{FRAC_PI_2, PI};

use qwalk_core::apparatus::{estimate_distribution, plan_experiment, sample_measurement};
use qwalk_core::pulse::{momentum_kick, translation_time, Direction};
use qwalk_core::{NoiseModel, TimingBudget};
use serde_json::{json, Value};

use super::plan::{budget_json, infeasible_message, timing_json};
use super::pulse::{calibrate, t_max};
use super::walk::evolve;
use super::{coin, noise, noise_json, raman_config, seed, start, time_mode, trap, trap_json};
use crate::config::{Config, Dim};
use crate::output::{csv, distribution_csv, float, SCHEMA_VERSION};
use crate::{CliError, CliResult, Document, Outcome, EXIT_INFEASIBLE, EXIT_NUMERIC};

/// How pulse imperfections enter the walk; echoed in every report.
pub const NOISE_MAPPING: &str = "coin_dephasing_prob = 1 - (1 - p_user) * kick_fidelity; \
     coin_angle_error = angle_user + (rabi_frequency * hadamard_duration - pi/2)";

pub fn run(cfg: &Config, seed_flag: Option<u64>) -> CliResult<Outcome> {
    let trap = trap(cfg)?;
    let l = trap.step_length;
    let steps = cfg.require_count("steps")?;
    let trials = cfg.count("trials")?.unwrap_or(100_000);
    if trials == 0 {
        return Err(CliError::parse("trials must be at least 1"));
    }
    let seed = seed(cfg, seed_flag)?;
    let (coin, coin_name) = coin(cfg)?;
    let start = start(cfg, steps, "zero", l)?;
    let user_noise = noise(cfg)?;
    let mode = time_mode(cfg)?;

    let rabi = cfg.require_quantity("rabi_frequency", Dim::AngularRate)?;
    let tau_h = cfg.quantity("hadamard_duration", Dim::Time)?.unwrap_or(FRAC_PI_2 / rabi);
    let tau_bf = cfg.quantity("bitflip_duration", Dim::Time)?.unwrap_or(PI / rabi);
    let kick_mode = cfg.choice("kick", &["calibrated", "ideal"])?.unwrap_or("calibrated");
    let atoms = cfg.count("atoms")?.unwrap_or(1).max(1);
    let scale_with_atoms = cfg.boolean("kick_scales_with_atoms")?.unwrap_or(false);
    let raman = raman_config(cfg, l, kick_mode == "calibrated")?;
    let (t_kick, fidelity, excited, boundary) = if kick_mode == "calibrated" {
        let window = t_max(cfg, &raman)?;
        cfg.finish()?;
        let (cal, boundary) = calibrate(&raman, window)?;
        (cal.t_kick, cal.fidelity, Some(cal.max_excited_population), boundary)
    } else {
        let t = cfg.require_quantity("kick_time", Dim::Time)?;
        cfg.finish()?;
        (t, 1.0, None, false)
    };
    if boundary {
        return Err(CliError {
            exit: EXIT_NUMERIC,
            message: format!("kick calibration peaked at the edge of the window (t = {t_kick:e} s); widen t_max"),
        });
    }
    let kick_time = if scale_with_atoms { t_kick * atoms as f64 } else { t_kick };
    let momentum = momentum_kick(&raman, Direction::Left)?;
    let budget = TimingBudget::new(kick_time, tau_h, tau_bf, translation_time(momentum, &raman)?)?;

    let effective = NoiseModel::new(
        1.0 - (1.0 - user_noise.coin_dephasing_prob) * fidelity,
        user_noise.position_measure_prob,
        user_noise.coin_angle_error + (rabi * tau_h - FRAC_PI_2),
        user_noise.survival_fraction_per_step,
    )?;
    let kick = json!({
        "mode": kick_mode,
        "t_kick_s": t_kick,
        "fidelity": fidelity,
        "max_excited_population": excited,
        "atoms": atoms,
        "kick_scales_with_atoms": scale_with_atoms,
        "kick_time_s": kick_time,
        "momentum_kg_m_s": momentum,
    });
    let mapping = json!({
        "convention": NOISE_MAPPING,
        "user": noise_json(&user_noise),
        "effective": noise_json(&effective),
        "bitflip_area_error_rad": rabi * tau_bf - PI,
    });
    let report = plan_experiment(&trap, &budget, steps);
    let mut envelope = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "experiment",
        "steps": steps,
        "coin": coin_name,
        "initial_coin": start.coin_name,
        "seed": seed,
        "trials": trials,
        "trap": trap_json(&trap),
        "kick": kick,
        "noise_mapping": mapping,
        "budget": budget_json(&budget),
        "timing": timing_json(&budget, steps, mode),
        "feasibility": report,
    });
    if !report.feasible {
        return Ok(Outcome {
            documents: vec![Document::json("experiment.json", &envelope)],
            exit: EXIT_INFEASIBLE,
            message: Some(infeasible_message(&report)),
        });
    }

    let evolved = evolve(&start.state, steps, &coin, &effective, None)?;
    let exact = evolved.distribution;
    // Trials that lose their atoms yield no fluorescence signal.
    let sampled = ((trials as f64 * evolved.trial_multiplier).round() as usize).max(1);
    let record = sample_measurement(&exact, sampled, seed)?;
    let empirical = estimate_distribution(&record)?;
    let exact_csv = distribution_csv(&exact, l);
    let counts = record.counts();
    let empirical_csv = csv(
        &["position_index", "physical_position_m", "probability", "count"],
        empirical
            .iter()
            .zip(&counts)
            .map(|((x, p), c)| vec![x.to_string(), float(x as f64 * l), float(p), c.to_string()]),
    );
    let results = json!({
        "method": evolved.method,
        "trial_multiplier": evolved.trial_multiplier,
        "sampled_trials": sampled,
        "tv_distance": exact.total_variation(&empirical),
        "exact_moments": exact.moments(),
        "empirical_moments": empirical.moments(),
        "exact_csv": exact_csv,
        "empirical_csv": empirical_csv,
    });
    if let Value::Object(map) = &mut envelope {
        map.insert("results".into(), results);
    }
    Ok(Outcome::ok(vec![
        Document::csv("exact.csv", exact_csv),
        Document::csv("empirical.csv", empirical_csv),
        Document::json("experiment.json", &envelope),
    ]))
}
