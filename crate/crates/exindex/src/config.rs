//! Plain-text key-value configuration.
//!
//! Grammar: one `key = value` pair per line; `#` starts a comment (full-line
//! or trailing); blank lines are ignored; a `[name]` line opens a section.
//! Entries before the first section header form the preamble. Within a
//! section, a repeated key overrides the earlier value.
//!
//! Recognized selection keys: `levels`, `mode`, `delta1`, `delta2`, `k_rule`,
//! `estimator`, `K_range`, `pilot`, `stat_theta`, `tolerance`, `w`. Process
//! specifications use the same compact syntax as their display form, e.g.
//! `process = armax(0.75)`.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::selection::{
    EstimatorChoice, KRule, Mode, PilotSpec, SelectionConfig, StatTheta,
};
use crate::simulate::{Marginal, ProcessSpec};

/// K-scan range used when `estimator = kgaps` appears without `K_range`.
pub const DEFAULT_K_RANGE: (u64, u64) = (0, 20);

/// One `key = value` entry with its 1-based source line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KvEntry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// A `[name]` block (or the preamble, with an empty name and line 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KvSection {
    pub name: String,
    pub line: usize,
    pub entries: Vec<KvEntry>,
}

impl KvSection {
    /// Last value bound to `key`, if any.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|e| e.key == key)
            .map(|e| e.value.as_str())
    }

    /// Source line of the last binding of `key`.
    pub fn line_of(&self, key: &str) -> Option<usize> {
        self.entries.iter().rev().find(|e| e.key == key).map(|e| e.line)
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| Error::ConfigSyntax {
            line: self.line,
            msg: format!("section `[{}]` is missing required key `{}`", self.name, key),
        })
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

/// Split a config file into its preamble and sections.
pub fn parse_sections(text: &str) -> Result<Vec<KvSection>> {
    let mut sections = vec![KvSection { name: String::new(), line: 0, entries: Vec::new() }];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return Err(Error::ConfigSyntax {
                    line,
                    msg: "section header must close with `]`".into(),
                });
            };
            let name = name.trim();
            if name.is_empty() {
                return Err(Error::ConfigSyntax { line, msg: "section name is empty".into() });
            }
            sections.push(KvSection { name: name.to_string(), line, entries: Vec::new() });
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::ConfigSyntax {
                line,
                msg: format!("expected `key = value`, got `{content}`"),
            });
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::ConfigSyntax { line, msg: "key is empty".into() });
        }
        sections
            .last_mut()
            .expect("preamble always present")
            .entries
            .push(KvEntry { key: key.to_string(), value: value.trim().to_string(), line });
    }
    Ok(sections)
}

/// Parse `a,b,c` or `start:stop:step` (inclusive) into quantile levels.
pub fn parse_levels(value: &str) -> Result<Vec<f64>> {
    let bad = |msg: String| Error::InvalidConfig(msg);
    if value.contains(':') {
        let parts: Vec<&str> = value.split(':').collect();
        if parts.len() != 3 {
            return Err(bad(format!("level range must be `start:stop:step`, got `{value}`")));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| bad(format!("level range `{value}`: {e}")))?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if !(step > 0.0) || stop < start {
            return Err(bad(format!("level range `{value}` is empty or reversed")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| start + step * i as f64).collect());
    }
    value
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| bad(format!("quantile level `{}`: {e}", p.trim())))
        })
        .collect()
}

/// Parse an inclusive `lo..hi` K range.
pub fn parse_k_range(value: &str) -> Result<(u64, u64)> {
    let bad = || Error::InvalidConfig(format!("K range must be `lo..hi`, got `{value}`"));
    let (lo, hi) = value.split_once("..").ok_or_else(bad)?;
    let lo = lo.trim().parse::<u64>().map_err(|_| bad())?;
    let hi = hi.trim().parse::<u64>().map_err(|_| bad())?;
    Ok((lo, hi))
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Equation => "equation",
            Mode::Inequality => "inequality",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equation" => Ok(Mode::Equation),
            "inequality" => Ok(Mode::Inequality),
            other => Err(Error::InvalidConfig(format!(
                "mode must be `equation` or `inequality`, got `{other}`"
            ))),
        }
    }
}

impl std::fmt::Display for KRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KRule::PilotL => f.write_str("pilot_l"),
            KRule::MinPilotSqrt => f.write_str("min_pilot_sqrt"),
            KRule::LogSquared => f.write_str("log_squared"),
            KRule::FixedTheta(s) => write!(f, "fixed_theta:{s}"),
        }
    }
}

impl FromStr for KRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pilot_l" => return Ok(KRule::PilotL),
            "min_pilot_sqrt" => return Ok(KRule::MinPilotSqrt),
            "log_squared" => return Ok(KRule::LogSquared),
            _ => {}
        }
        if let Some(frac) = s.strip_prefix("fixed_theta:") {
            let v = frac.trim().parse::<f64>().map_err(|e| {
                Error::InvalidConfig(format!("fixed_theta fraction `{frac}`: {e}"))
            })?;
            return Ok(KRule::FixedTheta(v));
        }
        Err(Error::InvalidConfig(format!(
            "k rule must be pilot_l | min_pilot_sqrt | log_squared | fixed_theta:<s>, got `{s}`"
        )))
    }
}

impl std::fmt::Display for StatTheta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StatTheta::Pilot => "pilot",
            StatTheta::Candidate => "candidate",
        })
    }
}

impl FromStr for StatTheta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pilot" => Ok(StatTheta::Pilot),
            "candidate" => Ok(StatTheta::Candidate),
            other => Err(Error::InvalidConfig(format!(
                "stat_theta must be `pilot` or `candidate`, got `{other}`"
            ))),
        }
    }
}

impl std::fmt::Display for PilotSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PilotSpec::Intervals => f.write_str("intervals"),
            PilotSpec::KGaps { k } => write!(f, "kgaps:{k}"),
        }
    }
}

impl FromStr for PilotSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "intervals" {
            return Ok(PilotSpec::Intervals);
        }
        if let Some(k) = s.strip_prefix("kgaps:") {
            let k = k.trim().parse::<u64>().map_err(|e| {
                Error::InvalidConfig(format!("pilot K value `{k}`: {e}"))
            })?;
            return Ok(PilotSpec::KGaps { k });
        }
        Err(Error::InvalidConfig(format!(
            "pilot must be `intervals` or `kgaps:<K>`, got `{s}`"
        )))
    }
}

/// Resolve the `estimator` value, consulting `K_range` for a bare `kgaps`.
/// An explicit `kgaps:<K>` or `k0:<k>` ignores any `K_range`.
pub fn resolve_estimator(value: &str, k_range: Option<(u64, u64)>) -> Result<EstimatorChoice> {
    match value {
        "intervals" => return Ok(EstimatorChoice::Intervals),
        "kgaps" => {
            let (lo, hi) = k_range.unwrap_or(DEFAULT_K_RANGE);
            return Ok(EstimatorChoice::KGapsScan { lo, hi });
        }
        "k0" => return Ok(EstimatorChoice::K0 { k: None }),
        _ => {}
    }
    if let Some(k) = value.strip_prefix("kgaps:") {
        let k = k.trim().parse::<u64>().map_err(|e| {
            Error::InvalidConfig(format!("K-gap value `{k}`: {e}"))
        })?;
        return Ok(EstimatorChoice::KGaps { k });
    }
    if let Some(k) = value.strip_prefix("k0:") {
        let k = k.trim().parse::<usize>().map_err(|e| {
            Error::InvalidConfig(format!("pinned cluster count `{k}`: {e}"))
        })?;
        return Ok(EstimatorChoice::K0 { k: Some(k) });
    }
    Err(Error::InvalidConfig(format!(
        "estimator must be intervals | kgaps | kgaps:<K> | k0 | k0:<k>, got `{value}`"
    )))
}

fn estimator_keys(choice: EstimatorChoice) -> (String, Option<String>) {
    match choice {
        EstimatorChoice::Intervals => ("intervals".into(), None),
        EstimatorChoice::KGaps { k } => (format!("kgaps:{k}"), None),
        EstimatorChoice::KGapsScan { lo, hi } => ("kgaps".into(), Some(format!("{lo}..{hi}"))),
        EstimatorChoice::K0 { k: None } => ("k0".into(), None),
        EstimatorChoice::K0 { k: Some(k) } => (format!("k0:{k}"), None),
    }
}

/// Keys consumed by [`selection_config_from_section`]; callers embedding a
/// selection config into a larger section (e.g. an experiment plan) can use
/// this to separate their own keys from selection keys.
pub const SELECTION_KEYS: [&str; 11] = [
    "levels", "mode", "delta1", "delta2", "k_rule", "estimator", "K_range", "pilot",
    "stat_theta", "tolerance", "w",
];

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|e| Error::InvalidConfig(format!("{key} value `{value}`: {e}")))
}

/// Build a selection config from a section's entries, starting from defaults.
/// Unknown keys are rejected unless listed in `extra_keys`.
pub fn selection_config_from_section(
    section: &KvSection,
    extra_keys: &[&str],
) -> Result<SelectionConfig> {
    let mut cfg = SelectionConfig::default();
    let at_line = |line: usize, e: Error| -> Error {
        match e {
            Error::InvalidConfig(msg) => Error::ConfigSyntax { line, msg },
            other => other,
        }
    };
    for entry in &section.entries {
        let known = SELECTION_KEYS.contains(&entry.key.as_str());
        if !known {
            if extra_keys.contains(&entry.key.as_str()) {
                continue;
            }
            return Err(Error::ConfigSyntax {
                line: entry.line,
                msg: format!("unknown key `{}`", entry.key),
            });
        }
    }
    if let Some(v) = section.get("levels") {
        let line = section.line_of("levels").unwrap_or(section.line);
        cfg.levels = parse_levels(v).map_err(|e| at_line(line, e))?;
    }
    macro_rules! set {
        ($key:literal, $field:ident, $parse:expr) => {
            if let Some(v) = section.get($key) {
                let line = section.line_of($key).unwrap_or(section.line);
                #[allow(clippy::redundant_closure_call)]
                {
                    cfg.$field = ($parse)(v).map_err(|e| at_line(line, e))?;
                }
            }
        };
    }
    set!("mode", mode, Mode::from_str);
    set!("delta1", delta1, |v| parse_f64("delta1", v));
    set!("delta2", delta2, |v| parse_f64("delta2", v));
    set!("k_rule", k_rule, KRule::from_str);
    set!("pilot", pilot, PilotSpec::from_str);
    set!("stat_theta", stat_theta, StatTheta::from_str);
    set!("tolerance", tolerance, |v| parse_f64("tolerance", v));
    set!("w", w, |v| parse_f64("w", v));
    let k_range = match section.get("K_range") {
        Some(v) => {
            let line = section.line_of("K_range").unwrap_or(section.line);
            Some(parse_k_range(v).map_err(|e| at_line(line, e))?)
        }
        None => None,
    };
    if let Some(v) = section.get("estimator") {
        let line = section.line_of("estimator").unwrap_or(section.line);
        cfg.estimator = resolve_estimator(v, k_range).map_err(|e| at_line(line, e))?;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parse a standalone selection config file (preamble keys only).
pub fn parse_selection_config(text: &str) -> Result<SelectionConfig> {
    let sections = parse_sections(text)?;
    if sections.len() > 1 {
        return Err(Error::ConfigSyntax {
            line: sections[1].line,
            msg: format!("unexpected section `[{}]` in a selection config", sections[1].name),
        });
    }
    selection_config_from_section(&sections[0], &[])
}

/// Serialize a selection config to the same key-value format.
pub fn selection_config_to_text(cfg: &SelectionConfig) -> String {
    let levels: Vec<String> = cfg.levels.iter().map(|q| format!("{q}")).collect();
    let (estimator, k_range) = estimator_keys(cfg.estimator);
    let mut out = String::new();
    out.push_str(&format!("levels = {}\n", levels.join(",")));
    out.push_str(&format!("mode = {}\n", cfg.mode));
    out.push_str(&format!("delta1 = {}\n", cfg.delta1));
    out.push_str(&format!("delta2 = {}\n", cfg.delta2));
    out.push_str(&format!("k_rule = {}\n", cfg.k_rule));
    out.push_str(&format!("estimator = {estimator}\n"));
    if let Some(range) = k_range {
        out.push_str(&format!("K_range = {range}\n"));
    }
    out.push_str(&format!("pilot = {}\n", cfg.pilot));
    out.push_str(&format!("stat_theta = {}\n", cfg.stat_theta));
    out.push_str(&format!("tolerance = {}\n", cfg.tolerance));
    out.push_str(&format!("w = {}\n", cfg.w));
    out
}

impl FromStr for Marginal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frechet" => return Ok(Marginal::Frechet),
            "uniform" => return Ok(Marginal::Uniform),
            "exponential" => return Ok(Marginal::Exponential),
            "gaussian" => return Ok(Marginal::Gaussian),
            "cauchy" => return Ok(Marginal::Cauchy),
            _ => {}
        }
        if let Some(alpha) = s.strip_prefix("pareto:") {
            let alpha = alpha.trim().parse::<f64>().map_err(|e| {
                Error::InvalidConfig(format!("Pareto tail index `{alpha}`: {e}"))
            })?;
            return Ok(Marginal::Pareto { alpha });
        }
        Err(Error::InvalidConfig(format!("unknown marginal `{s}`")))
    }
}

fn split_spec(s: &str) -> Result<(&str, Vec<&str>)> {
    match s.find('(') {
        None => Ok((s, Vec::new())),
        Some(pos) => {
            let name = &s[..pos];
            let rest = &s[pos + 1..];
            let Some(args) = rest.strip_suffix(')') else {
                return Err(Error::InvalidConfig(format!(
                    "process spec `{s}` is missing the closing `)`"
                )));
            };
            if args.trim().is_empty() {
                return Err(Error::InvalidConfig(format!("process spec `{s}` has no arguments")));
            }
            Ok((name, args.split(';').map(str::trim).collect()))
        }
    }
}

fn spec_f64(spec: &str, arg: &str) -> Result<f64> {
    arg.parse::<f64>()
        .map_err(|e| Error::InvalidConfig(format!("process `{spec}` argument `{arg}`: {e}")))
}

fn arity(spec: &str, args: &[&str], n: usize) -> Result<()> {
    if args.len() == n {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "process `{spec}` expects {n} argument(s), got {}",
            args.len()
        )))
    }
}

impl FromStr for ProcessSpec {
    type Err = Error;

    /// Inverse of the display form: `mm(0.5;0.3;0.2)`, `armax(0.75)`,
    /// `aru+(2)`, `aru-(5)`, `ma2(0.3;0.3;2)`, `arcauchy`, `ar2pareto`,
    /// `garch11`, `iid(frechet)`, `iid(pareto:2.5)`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = split_spec(s)?;
        let spec = match name {
            "mm" => {
                if args.is_empty() {
                    return Err(Error::InvalidConfig(
                        "process `mm` needs at least one weight".into(),
                    ));
                }
                let weights: Vec<f64> =
                    args.iter().map(|a| spec_f64(s, a)).collect::<Result<_>>()?;
                ProcessSpec::MovingMax { weights }
            }
            "armax" => {
                arity(s, &args, 1)?;
                ProcessSpec::Armax { alpha: spec_f64(s, args[0])? }
            }
            "aru+" | "aru-" => {
                arity(s, &args, 1)?;
                let r = args[0].parse::<u32>().map_err(|e| {
                    Error::InvalidConfig(format!("process `{s}` argument `{}`: {e}", args[0]))
                })?;
                if name == "aru+" {
                    ProcessSpec::ArUniformPlus { r }
                } else {
                    ProcessSpec::ArUniformMinus { r }
                }
            }
            "ma2" => {
                arity(s, &args, 3)?;
                ProcessSpec::Ma2 {
                    p: spec_f64(s, args[0])?,
                    q: spec_f64(s, args[1])?,
                    tail: spec_f64(s, args[2])?,
                }
            }
            "arcauchy" => {
                arity(s, &args, 0)?;
                ProcessSpec::ar_cauchy()
            }
            "ar2pareto" => {
                arity(s, &args, 0)?;
                ProcessSpec::ar_pareto2()
            }
            "garch11" => {
                arity(s, &args, 0)?;
                ProcessSpec::garch11()
            }
            "iid" => {
                arity(s, &args, 1)?;
                ProcessSpec::Iid { marginal: args[0].parse()? }
            }
            other => {
                return Err(Error::InvalidConfig(format!("unknown process `{other}`")));
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}
