use qwalk_core::distribution::fit_loglog_exponent;
use qwalk_core::open::open_variance_scan;
use qwalk_core::walk::variance_scan;
use qwalk_core::classical_walk;
use serde_json::json;

use super::{coin, noise, noise_json, start, step_length};
use crate::config::Config;
use crate::output::{csv, float, SCHEMA_VERSION};
use crate::{CliError, CliResult, Document, Outcome};

pub fn run(cfg: &Config) -> CliResult<Outcome> {
    let n_min = cfg.require_count("n_min")?;
    let n_max = cfg.require_count("n_max")?;
    let n_step = cfg.count("n_step")?.unwrap_or(1);
    if n_step == 0 || n_max < n_min {
        return Err(CliError::parse("need n_min ≤ n_max and n_step ≥ 1"));
    }
    let ns: Vec<usize> = (n_min..=n_max).step_by(n_step).collect();
    if ns.len() < 2 {
        return Err(CliError::parse(format!("range {n_min}..={n_max} holds a single point; no exponent can be fitted")));
    }
    let l = step_length(cfg)?;
    let (coin, coin_name) = coin(cfg)?;
    let start = start(cfg, n_max, "symmetric", l)?;
    let noise = noise(cfg)?;
    cfg.finish()?;

    let quantum = if noise.is_coherent() {
        variance_scan(&start.state, &coin.over_rotated(noise.coin_angle_error), &ns)?
    } else {
        open_variance_scan(&start.state, &coin, &noise, &ns)?
    };
    let classical: Vec<f64> = ns.iter().map(|&n| classical_walk(0, n).moments().variance).collect();
    let fit = |ys: &mut dyn Iterator<Item = f64>| {
        let pts: Vec<(f64, f64)> = ns.iter().zip(ys).map(|(n, v)| (*n as f64, v)).collect();
        fit_loglog_exponent(&pts)
    };
    let quantum_exponent = fit(&mut quantum.iter().map(|p| p.1))?;
    let classical_exponent = fit(&mut classical.iter().copied())?;

    let table = csv(
        &["n", "variance_quantum", "variance_classical"],
        quantum.iter().zip(&classical).map(|((n, q), c)| vec![n.to_string(), float(*q), float(*c)]),
    );
    let summary = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "variance-scan",
        "coin": coin_name,
        "initial_coin": start.coin_name,
        "n_min": n_min,
        "n_max": n_max,
        "n_step": n_step,
        "points": ns.len(),
        "noise": noise_json(&noise),
        "quantum_exponent": quantum_exponent,
        "classical_exponent": classical_exponent,
    });
    Ok(Outcome::ok(vec![
        Document::csv("variance_scan.csv", table),
        Document::json("variance_scan.json", &summary),
    ]))
}
