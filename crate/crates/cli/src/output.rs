//! Deterministic CSV and JSON rendering.

use qwalk_core::Distribution;
use serde_json::Value;

/// Bumped whenever a JSON field is renamed, removed or changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

/// 17 significant digits, locale independent.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `position_index, physical_position_m, probability` over the whole lattice.
pub fn distribution_csv(d: &Distribution, step_length: f64) -> String {
    csv(
        &["position_index", "physical_position_m", "probability"],
        d.iter().map(|(x, p)| vec![x.to_string(), float(x as f64 * step_length), float(p)]),
    )
}

pub fn json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}
