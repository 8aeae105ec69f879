use qwalk_core::open::{run_open, trajectory_run};
use qwalk_core::{CoinOperator, Distribution, NoiseModel, WalkState};
use serde_json::json;

use super::{coin, noise, noise_json, seed, start, step_length};
use crate::config::Config;
use crate::output::{distribution_csv, SCHEMA_VERSION};
use crate::{CliResult, Document, Outcome};

pub(crate) struct Evolved {
    pub distribution: Distribution,
    pub trial_multiplier: f64,
    pub method: &'static str,
}

/// Pure evolution when the noise is coherent, otherwise the density matrix
/// or, on request, quantum trajectories.
pub(crate) fn evolve(
    initial: &WalkState,
    n: usize,
    coin: &CoinOperator,
    noise: &NoiseModel,
    trajectories: Option<(usize, u64)>,
) -> CliResult<Evolved> {
    let multiplier = noise.trial_multiplier(n);
    if noise.is_coherent() {
        let mut s = initial.clone();
        s.evolve(n, &coin.over_rotated(noise.coin_angle_error))?;
        return Ok(Evolved { distribution: s.distribution(), trial_multiplier: multiplier, method: "pure" });
    }
    match trajectories {
        Some((trials, seed)) => Ok(Evolved {
            distribution: trajectory_run(initial, n, coin, noise, trials, seed)?,
            trial_multiplier: multiplier,
            method: "trajectories",
        }),
        None => {
            let run = run_open(initial, n, coin, noise)?;
            Ok(Evolved { distribution: run.distribution, trial_multiplier: run.trial_multiplier, method: "density" })
        }
    }
}

pub fn run(cfg: &Config, seed_flag: Option<u64>) -> CliResult<Outcome> {
    let steps = cfg.require_count("steps")?;
    let l = step_length(cfg)?;
    let (coin, coin_name) = coin(cfg)?;
    let start = start(cfg, steps, "zero", l)?;
    let noise = noise(cfg)?;
    let method = cfg.choice("method", &["density", "trajectories"])?.unwrap_or("density");
    let trajectories = if method == "trajectories" {
        Some((cfg.count("trials")?.unwrap_or(10_000), seed(cfg, seed_flag)?))
    } else {
        None
    };
    cfg.finish()?;

    let evolved = evolve(&start.state, steps, &coin, &noise, trajectories)?;
    let d = &evolved.distribution;
    let moments = d.moments();
    let peaks = d.peaks(1e-9);
    let summary = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "walk",
        "steps": steps,
        "coin": coin_name,
        "initial_coin": start.coin_name,
        "envelope_width_sites": start.envelope_width,
        "origin_index": start.state.origin_index(),
        "half_width": start.state.half_width(),
        "step_length_m": l,
        "noise": noise_json(&noise),
        "method": evolved.method,
        "trials": trajectories.map(|t| t.0),
        "seed": trajectories.map(|t| t.1),
        "mean": moments.mean,
        "variance": moments.variance,
        "mean_m": moments.mean * l,
        "variance_m2": moments.variance * l * l,
        "peaks": peaks,
        "peak_positions_m": peaks.iter().map(|x| *x as f64 * l).collect::<Vec<_>>(),
        "probability_sum": d.probabilities().iter().sum::<f64>(),
        "trial_multiplier": evolved.trial_multiplier,
    });
    Ok(Outcome::ok(vec![
        Document::csv("walk.csv", distribution_csv(d, l)),
        Document::json("walk.json", &summary),
    ]))
}
