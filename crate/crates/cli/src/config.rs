//! Flat `key = value` configuration with mandatory units.
//!
//! One entry per line, `#` starts a comment. Physical quantities are written
//! as a number followed by a unit (`10 um`, `6.283e3 rad/s`, `5 kHz`); a bare
//! number is rejected for those keys. Frequencies in Hz are read as cyclic
//! and converted to rad/s.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use qwalk_core::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Time,
    Length,
    AngularRate,
    Angle,
    WaveNumber,
    Mass,
}

impl Dim {
    /// Accepted units as `(suffix, power of ten, extra factor)` to SI
    /// (rad/s for rates). The power of ten is applied by exact division so
    /// `10 um` lands on the nearest double to `1e-5`.
    fn units(self) -> &'static [(&'static str, i32, f64)] {
        const TAU: f64 = 2.0 * PI;
        match self {
            Dim::Time => &[("s", 0, 1.0), ("ms", -3, 1.0), ("us", -6, 1.0), ("µs", -6, 1.0), ("ns", -9, 1.0)],
            Dim::Length => &[
                ("m", 0, 1.0),
                ("cm", -2, 1.0),
                ("mm", -3, 1.0),
                ("um", -6, 1.0),
                ("µm", -6, 1.0),
                ("nm", -9, 1.0),
            ],
            Dim::AngularRate => &[
                ("rad/s", 0, 1.0),
                ("krad/s", 3, 1.0),
                ("Mrad/s", 6, 1.0),
                ("Hz", 0, TAU),
                ("kHz", 3, TAU),
                ("MHz", 6, TAU),
                ("GHz", 9, TAU),
            ],
            Dim::Angle => &[("rad", 0, 1.0), ("mrad", -3, 1.0), ("deg", 0, PI / 180.0)],
            Dim::WaveNumber => &[("rad/m", 0, 1.0), ("1/m", 0, 1.0), ("rad/um", 6, 1.0)],
            Dim::Mass => &[("kg", 0, 1.0), ("amu", 0, qwalk_core::AMU), ("u", 0, qwalk_core::AMU)],
        }
    }

    fn to_si(x: f64, exp10: i32, extra: f64) -> f64 {
        let scaled = if exp10 >= 0 { x * 10f64.powi(exp10) } else { x / 10f64.powi(-exp10) };
        scaled * extra
    }

    fn name(self) -> &'static str {
        match self {
            Dim::Time => "time",
            Dim::Length => "length",
            Dim::AngularRate => "angular rate",
            Dim::Angle => "angle",
            Dim::WaveNumber => "wave number",
            Dim::Mass => "mass",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

type Res<T> = std::result::Result<T, ConfigError>;

fn err<T>(msg: impl Into<String>) -> Res<T> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    origin: String,
}

/// Parsed entries plus a record of which keys a command read, so leftovers
/// can be reported as unknown.
#[derive(Debug, Default)]
pub struct Config {
    entries: BTreeMap<String, Entry>,
    used: RefCell<BTreeSet<String>>,
}

fn valid_key(key: &str) -> bool {
    !key.is_empty() && key.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl Config {
    pub fn parse(text: &str, source: &str) -> Res<Self> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = format!("{source}:{}", i + 1);
            let Some((key, value)) = line.split_once('=') else {
                return err(format!("{origin}: expected `key = value`"));
            };
            let (key, value) = (key.trim(), value.trim());
            if !valid_key(key) {
                return err(format!("{origin}: bad key `{key}`"));
            }
            if value.is_empty() {
                return err(format!("{origin}: `{key}` has no value"));
            }
            if cfg.entries.contains_key(key) {
                return err(format!("{origin}: `{key}` given twice"));
            }
            cfg.entries.insert(key.to_string(), Entry { value: value.to_string(), origin });
        }
        Ok(cfg)
    }

    /// Applies a `key=value` override; later overrides win.
    pub fn set(&mut self, assignment: &str) -> Res<()> {
        let Some((key, value)) = assignment.split_once('=') else {
            return err(format!("--set expects key=value, got `{assignment}`"));
        };
        let (key, value) = (key.trim(), value.trim());
        if !valid_key(key) || value.is_empty() {
            return err(format!("--set: bad assignment `{assignment}`"));
        }
        self.entries.insert(key.to_string(), Entry { value: value.to_string(), origin: "--set".into() });
        Ok(())
    }

    fn raw(&self, key: &str) -> Option<&Entry> {
        self.used.borrow_mut().insert(key.to_string());
        self.entries.get(key)
    }

    fn bad<T>(entry: &Entry, key: &str, what: impl std::fmt::Display) -> Res<T> {
        err(format!("{}: `{key} = {}`: {what}", entry.origin, entry.value))
    }

    pub fn quantity(&self, key: &str, dim: Dim) -> Res<Option<f64>> {
        let Some(e) = self.raw(key) else { return Ok(None) };
        let mut units: Vec<_> = dim.units().to_vec();
        units.sort_by_key(|(u, ..)| std::cmp::Reverse(u.len()));
        for (unit, exp10, extra) in units {
            if let Some(number) = e.value.strip_suffix(unit) {
                let number = number.trim_end();
                if let Ok(x) = number.parse::<f64>() {
                    if !x.is_finite() {
                        return Self::bad(e, key, "not finite");
                    }
                    return Ok(Some(Dim::to_si(x, exp10, extra)));
                }
            }
        }
        if e.value.parse::<f64>().is_ok() {
            return Self::bad(e, key, format!("missing {} unit", dim.name()));
        }
        let accepted: Vec<&str> = dim.units().iter().map(|(u, ..)| *u).collect();
        Self::bad(e, key, format!("expected a {} in one of: {}", dim.name(), accepted.join(", ")))
    }

    pub fn require_quantity(&self, key: &str, dim: Dim) -> Res<f64> {
        self.quantity(key, dim)?.map_or_else(|| err(format!("missing required key `{key}`")), Ok)
    }

    /// Dimensionless real number.
    pub fn real(&self, key: &str) -> Res<Option<f64>> {
        let Some(e) = self.raw(key) else { return Ok(None) };
        match e.value.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Some(x)),
            _ => Self::bad(e, key, "expected a plain number"),
        }
    }

    pub fn count(&self, key: &str) -> Res<Option<usize>> {
        let Some(e) = self.raw(key) else { return Ok(None) };
        e.value.parse::<usize>().map(Some).or_else(|_| Self::bad(e, key, "expected a non-negative integer"))
    }

    pub fn require_count(&self, key: &str) -> Res<usize> {
        self.count(key)?.map_or_else(|| err(format!("missing required key `{key}`")), Ok)
    }

    pub fn integer(&self, key: &str) -> Res<Option<i64>> {
        let Some(e) = self.raw(key) else { return Ok(None) };
        e.value.parse::<i64>().map(Some).or_else(|_| Self::bad(e, key, "expected an integer"))
    }

    pub fn unsigned(&self, key: &str) -> Res<Option<u64>> {
        let Some(e) = self.raw(key) else { return Ok(None) };
        e.value.parse::<u64>().map(Some).or_else(|_| Self::bad(e, key, "expected a non-negative integer"))
    }

    pub fn boolean(&self, key: &str) -> Res<Option<bool>> {
        let Some(e) = self.raw(key) else { return Ok(None) };
        match e.value.as_str() {
            "true" => Ok(Some(true)),
            "false" => Ok(Some(false)),
            _ => Self::bad(e, key, "expected true or false"),
        }
    }

    /// One of `choices`.
    pub fn choice(&self, key: &str, choices: &[&'static str]) -> Res<Option<&'static str>> {
        let Some(e) = self.raw(key) else { return Ok(None) };
        match choices.iter().find(|c| **c == e.value) {
            Some(c) => Ok(Some(c)),
            None => Self::bad(e, key, format!("expected one of: {}", choices.join(", "))),
        }
    }

    /// `re, im`.
    pub fn complex(&self, key: &str) -> Res<Option<C64>> {
        let Some(e) = self.raw(key) else { return Ok(None) };
        let parts: Vec<_> = e.value.split(',').map(str::trim).collect();
        let parsed: Vec<f64> = parts.iter().filter_map(|p| p.parse().ok()).collect();
        match (parts.len(), parsed.as_slice()) {
            (2, [re, im]) => Ok(Some(C64::new(*re, *im))),
            _ => Self::bad(e, key, "expected `re, im`"),
        }
    }

    /// Errors on any key no command getter asked for.
    pub fn finish(&self) -> Res<()> {
        let used = self.used.borrow();
        let unknown: Vec<String> = self
            .entries
            .iter()
            .filter(|(k, _)| !used.contains(*k))
            .map(|(k, e)| format!("{} (`{k}`)", e.origin))
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            err(format!("unknown keys for this command: {}", unknown.join(", ")))
        }
    }
}
