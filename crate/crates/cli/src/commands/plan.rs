use qwalk_core::apparatus::{plan_experiment, total_time, FeasibilityReport};
use qwalk_core::{TimeMode, TimingBudget};
use serde_json::{json, Value};

use super::{time_mode, trap, trap_json};
use crate::config::{Config, Dim};
use crate::output::SCHEMA_VERSION;
use crate::{CliResult, Document, Outcome, EXIT_INFEASIBLE};

pub(crate) fn budget_json(b: &TimingBudget) -> Value {
    json!({
        "kick_time_s": b.kick_time,
        "hadamard_duration_s": b.hadamard_pulse_tau,
        "bitflip_duration_s": b.bitflip_pulse_tau_bf,
        "translation_time_s": b.translation_time,
        "per_step_s": b.per_step(),
    })
}

pub(crate) fn timing_json(b: &TimingBudget, n: usize, mode: TimeMode) -> Value {
    json!({
        "requested": total_time(b, n, mode),
        "per_step_sum": total_time(b, n, TimeMode::PerStepSum),
        "paper_literal": total_time(b, n, TimeMode::PaperLiteral),
    })
}

pub(crate) fn infeasible_message(report: &FeasibilityReport) -> String {
    let names: Vec<&str> = report.failed().map(|c| c.name.as_str()).collect();
    format!("plan infeasible: {}", names.join(", "))
}

pub fn run(cfg: &Config) -> CliResult<Outcome> {
    let trap = trap(cfg)?;
    let steps = cfg.require_count("steps")?;
    let budget = TimingBudget::new(
        cfg.require_quantity("kick_time", Dim::Time)?,
        cfg.require_quantity("hadamard_duration", Dim::Time)?,
        cfg.require_quantity("bitflip_duration", Dim::Time)?,
        cfg.require_quantity("translation_time", Dim::Time)?,
    )?;
    let mode = time_mode(cfg)?;
    cfg.finish()?;

    let report = plan_experiment(&trap, &budget, steps);
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "plan",
        "trap": trap_json(&trap),
        "budget": budget_json(&budget),
        "timing": timing_json(&budget, steps, mode),
        "feasibility": report,
    });
    let docs = vec![Document::json("plan.json", &value)];
    if report.feasible {
        Ok(Outcome::ok(docs))
    } else {
        Ok(Outcome { documents: docs, exit: EXIT_INFEASIBLE, message: Some(infeasible_message(&report)) })
    }
}
