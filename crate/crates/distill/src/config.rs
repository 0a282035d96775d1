//! Flat `key = value` experiment configuration.
//!
//! The format has no nesting: one assignment per line, `#` starts a comment,
//! blank lines are ignored. Three value shapes exist — scalars (`r = 0.7`),
//! lists (`N_list = [2, 3, 4, 5]`), and linear ranges
//! (`d_over_sigma = (0, 30, 61)` meaning 61 evenly spaced points from 0 to
//! 30 inclusive). Unknown keys, duplicate keys, and out-of-range values are
//! rejected with the key name and line number.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use gaussmix::mixture::GridPolicy;
use gaussmix::protocols::{ProtocolKind, SweepPlan, DEFAULT_PRUNE_TOL};

use crate::CliError;

/// Default Gauss–Legendre node count for the one-shot conditioning grid.
pub const DEFAULT_GRID_POINTS: usize = 64;
/// Default output path when neither the config nor `--output` names one.
pub const DEFAULT_OUTPUT: &str = "sweep.csv";

/// A fully validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub protocol: ProtocolKind,
    pub r: f64,
    pub p: f64,
    /// Displacement abscissa grid (detection-quadrature units).
    pub d_over_sigma: Vec<f64>,
    /// Copy counts (multi-copy protocols only; empty otherwise).
    pub copy_counts: Vec<usize>,
    /// Beam-splitter transmittances (one-shot protocol only; empty otherwise).
    pub transmittances: Vec<f64>,
    /// Accept-threshold override; empty means the per-run default e^{−r}.
    pub delta_prime: Vec<f64>,
    pub grid_points: usize,
    pub prune_tol: f64,
    pub output: PathBuf,
}

impl ExperimentConfig {
    /// Lower this configuration to an engine sweep plan.
    pub fn to_plan(&self) -> SweepPlan {
        SweepPlan {
            protocol: self.protocol,
            r: self.r,
            p: self.p,
            d_over_sigma: self.d_over_sigma.clone(),
            transmittances: self.transmittances.clone(),
            copy_counts: self.copy_counts.clone(),
            thresholds: self.delta_prime.clone(),
            grid: GridPolicy::with_nodes(self.grid_points),
            prune_tol: self.prune_tol,
        }
    }
}

/// One raw assignment: the value text and the line it came from.
struct RawValue {
    line: usize,
    text: String,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Parse a scalar float.
fn parse_float(key: &str, raw: &RawValue) -> Result<f64, CliError> {
    raw.text.parse::<f64>().map_err(|_| {
        config_err(format!(
            "line {}: key \"{key}\": expected a number, got \"{}\"",
            raw.line, raw.text
        ))
    })
}

/// Parse `[a, b, c]` into float entries; the empty list `[]` is allowed here
/// and rejected later by the nonempty-grid validation so the error can name
/// the key.
fn parse_float_list(key: &str, raw: &RawValue) -> Result<Vec<f64>, CliError> {
    let inner = raw
        .text
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| {
            config_err(format!(
                "line {}: key \"{key}\": expected a list like [a, b, c], got \"{}\"",
                raw.line, raw.text
            ))
        })?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|piece| {
            piece.trim().parse::<f64>().map_err(|_| {
                config_err(format!(
                    "line {}: key \"{key}\": list entry \"{}\" is not a number",
                    raw.line,
                    piece.trim()
                ))
            })
        })
        .collect()
}

/// Parse `(start, stop, count)` into a linear grid.
fn parse_range(key: &str, raw: &RawValue) -> Result<Vec<f64>, CliError> {
    let inner = raw
        .text
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| {
            config_err(format!(
                "line {}: key \"{key}\": expected a range like (start, stop, count), got \"{}\"",
                raw.line, raw.text
            ))
        })?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(config_err(format!(
            "line {}: key \"{key}\": a range needs exactly (start, stop, count)",
            raw.line
        )));
    }
    let start: f64 = parts[0].parse().map_err(|_| {
        config_err(format!(
            "line {}: key \"{key}\": range start \"{}\" is not a number",
            raw.line, parts[0]
        ))
    })?;
    let stop: f64 = parts[1].parse().map_err(|_| {
        config_err(format!(
            "line {}: key \"{key}\": range stop \"{}\" is not a number",
            raw.line, parts[1]
        ))
    })?;
    let count: usize = parts[2].parse().map_err(|_| {
        config_err(format!(
            "line {}: key \"{key}\": range count \"{}\" is not a positive integer",
            raw.line, parts[2]
        ))
    })?;
    if count == 0 {
        return Err(config_err(format!(
            "line {}: key \"{key}\": range count must be at least 1",
            raw.line
        )));
    }
    if !(start.is_finite() && stop.is_finite()) {
        return Err(config_err(format!(
            "line {}: key \"{key}\": range endpoints must be finite",
            raw.line
        )));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

/// A grid value: list or range syntax, by first character.
fn parse_grid(key: &str, raw: &RawValue) -> Result<Vec<f64>, CliError> {
    match raw.text.chars().next() {
        Some('[') => parse_float_list(key, raw),
        Some('(') => parse_range(key, raw),
        _ => Err(config_err(format!(
            "line {}: key \"{key}\": expected a list [a, b, c] or a range (start, stop, count), got \"{}\"",
            raw.line, raw.text
        ))),
    }
}

/// Parse a list of copy counts (positive integers).
fn parse_count_list(key: &str, raw: &RawValue) -> Result<Vec<usize>, CliError> {
    let floats = parse_float_list(key, raw)?;
    let mut counts = Vec::with_capacity(floats.len());
    for value in floats {
        if value.fract() != 0.0 || !(value >= 1.0) || value > usize::MAX as f64 {
            return Err(config_err(format!(
                "line {}: key \"{key}\": entries must be positive integers, got {value}",
                raw.line
            )));
        }
        counts.push(value as usize);
    }
    Ok(counts)
}

/// Validate a grid-points value (shared with the `--grid-points` flag).
pub fn validate_grid_points(grid_points: usize) -> Result<(), CliError> {
    if grid_points < 8 {
        return Err(config_err(format!(
            "key \"grid_points\" must be at least 8, got {grid_points}"
        )));
    }
    Ok(())
}

fn require<'a>(
    key: &'static str,
    raw: &'a BTreeMap<String, RawValue>,
) -> Result<&'a RawValue, CliError> {
    raw.get(key)
        .ok_or_else(|| config_err(format!("missing required key \"{key}\"")))
}

/// Parse and validate configuration text. Line numbers in error messages are
/// 1-based positions in `text`.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig, CliError> {
    let mut raw: BTreeMap<String, RawValue> = BTreeMap::new();
    for (idx, full_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match full_line.find('#') {
            Some(pos) => &full_line[..pos],
            None => full_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            config_err(format!(
                "line {line_no}: expected key = value, got \"{line}\""
            ))
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() {
            return Err(config_err(format!("line {line_no}: missing key before \"=\"")));
        }
        // `t_list` is accepted as a shorthand for `transmissivity_list`.
        let canonical = if key == "t_list" { "transmissivity_list".to_string() } else { key.clone() };
        if let Some(previous) = raw.get(&canonical) {
            return Err(config_err(format!(
                "line {line_no}: duplicate key \"{key}\" (first set on line {})",
                previous.line
            )));
        }
        const KNOWN: [&str; 9] = [
            "protocol",
            "r",
            "p",
            "d_over_sigma",
            "N_list",
            "transmissivity_list",
            "delta_prime",
            "grid_points",
            "prune_tol",
        ];
        if !KNOWN.contains(&canonical.as_str()) && canonical != "output" {
            return Err(config_err(format!("line {line_no}: unknown key \"{key}\"")));
        }
        raw.insert(canonical, RawValue { line: line_no, text: value });
    }

    let protocol_raw = require("protocol", &raw)?;
    let protocol = match protocol_raw.text.as_str() {
        "one_shot_squeeze" => ProtocolKind::OneShot,
        "multicopy_squeeze" => ProtocolKind::MulticopySqueeze,
        "multicopy_ent" => ProtocolKind::MulticopyEnt,
        other => {
            return Err(config_err(format!(
                "line {}: key \"protocol\": expected one_shot_squeeze, multicopy_squeeze, or multicopy_ent, got \"{other}\"",
                protocol_raw.line
            )))
        }
    };

    let r_raw = require("r", &raw)?;
    let r = parse_float("r", r_raw)?;
    if !(r.is_finite() && r > 0.0) {
        return Err(config_err(format!(
            "line {}: key \"r\" out of range: need r > 0, got {r}",
            r_raw.line
        )));
    }

    let p_raw = require("p", &raw)?;
    let p = parse_float("p", p_raw)?;
    if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
        return Err(config_err(format!(
            "line {}: key \"p\" out of range: need 0 ≤ p ≤ 1, got {p}",
            p_raw.line
        )));
    }

    let d_raw = require("d_over_sigma", &raw)?;
    let d_over_sigma = parse_grid("d_over_sigma", d_raw)?;
    if d_over_sigma.is_empty() {
        return Err(config_err(format!(
            "line {}: key \"d_over_sigma\" must not be empty",
            d_raw.line
        )));
    }
    for &a in &d_over_sigma {
        if !(a.is_finite() && a >= 0.0) {
            return Err(config_err(format!(
                "line {}: key \"d_over_sigma\" out of range: entries must be ≥ 0, got {a}",
                d_raw.line
            )));
        }
    }

    let forbid = |key: &'static str, why: &str, raw: &BTreeMap<String, RawValue>| {
        if let Some(v) = raw.get(key) {
            return Err(config_err(format!(
                "line {}: key \"{key}\" does not apply: {why}",
                v.line
            )));
        }
        Ok(())
    };

    let mut copy_counts = Vec::new();
    let mut transmittances = Vec::new();
    match protocol {
        ProtocolKind::OneShot => {
            forbid("N_list", "the one-shot protocol uses a single copy", &raw)?;
            forbid("delta_prime", "the one-shot protocol has no accept threshold", &raw)?;
            let t_raw = require("transmissivity_list", &raw)
                .map_err(|_| config_err("missing required key \"transmissivity_list\" (or \"t_list\")"))?;
            transmittances = parse_grid("transmissivity_list", t_raw)?;
            if transmittances.is_empty() {
                return Err(config_err(format!(
                    "line {}: key \"transmissivity_list\" must not be empty",
                    t_raw.line
                )));
            }
            for &t in &transmittances {
                if !(t > 0.0 && t < 1.0) {
                    return Err(config_err(format!(
                        "line {}: key \"transmissivity_list\" out of range: need 0 < t < 1, got {t}",
                        t_raw.line
                    )));
                }
            }
        }
        ProtocolKind::MulticopySqueeze | ProtocolKind::MulticopyEnt => {
            forbid(
                "transmissivity_list",
                "the multi-copy protocols use balanced beam splitters (t = 1/2)",
                &raw,
            )?;
            let n_raw = require("N_list", &raw)?;
            copy_counts = parse_count_list("N_list", n_raw)?;
            if copy_counts.is_empty() {
                return Err(config_err(format!(
                    "line {}: key \"N_list\" must not be empty",
                    n_raw.line
                )));
            }
            for &n in &copy_counts {
                if n < 2 {
                    return Err(config_err(format!(
                        "line {}: key \"N_list\" out of range: need N ≥ 2, got {n}",
                        n_raw.line
                    )));
                }
            }
        }
    }

    let delta_prime = match raw.get("delta_prime") {
        None => Vec::new(),
        Some(v) => {
            let schedule = if v.text.starts_with('[') {
                parse_float_list("delta_prime", v)?
            } else {
                vec![parse_float("delta_prime", v)?]
            };
            for &dp in &schedule {
                if !(dp.is_finite() && dp > 0.0) {
                    return Err(config_err(format!(
                        "line {}: key \"delta_prime\" out of range: thresholds must be > 0, got {dp}",
                        v.line
                    )));
                }
            }
            schedule
        }
    };

    let grid_points = match raw.get("grid_points") {
        None => DEFAULT_GRID_POINTS,
        Some(v) => {
            let value = parse_float("grid_points", v)?;
            if value.fract() != 0.0 || !(value >= 1.0) {
                return Err(config_err(format!(
                    "line {}: key \"grid_points\" must be a positive integer, got {}",
                    v.line, v.text
                )));
            }
            let k = value as usize;
            validate_grid_points(k)
                .map_err(|_| config_err(format!(
                    "line {}: key \"grid_points\" must be at least 8, got {k}",
                    v.line
                )))?;
            k
        }
    };

    let prune_tol = match raw.get("prune_tol") {
        None => DEFAULT_PRUNE_TOL,
        Some(v) => {
            let tol = parse_float("prune_tol", v)?;
            if !(tol.is_finite() && tol > 0.0 && tol < 1.0) {
                return Err(config_err(format!(
                    "line {}: key \"prune_tol\" out of range: need 0 < tol < 1, got {tol}",
                    v.line
                )));
            }
            tol
        }
    };

    let output = match raw.get("output") {
        None => PathBuf::from(DEFAULT_OUTPUT),
        Some(v) => {
            if v.text.is_empty() {
                return Err(config_err(format!(
                    "line {}: key \"output\" must name a path",
                    v.line
                )));
            }
            PathBuf::from(&v.text)
        }
    };

    Ok(ExperimentConfig {
        protocol,
        r,
        p,
        d_over_sigma,
        copy_counts,
        transmittances,
        delta_prime,
        grid_points,
        prune_tol,
        output,
    })
}

/// Read and parse a configuration file.
pub fn parse_config_file(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|err| {
        config_err(format!("cannot read config file {}: {err}", path.display()))
    })?;
    parse_config_str(&text)
}
