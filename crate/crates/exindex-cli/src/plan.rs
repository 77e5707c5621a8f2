//! Benchmark plan files: a preamble fixing seed and default scale, `[process]`
//! sections naming the data generators, and `[variant]` sections configuring
//! the selection algorithm rows of the report.
//!
//! ```text
//! seed = 42
//! n = 5000
//! reps = 100
//!
//! [process]
//! process = armax(0.75)
//!
//! [variant]
//! name = intervals-ineq
//! mode = inequality
//! estimator = intervals
//! ```

use anyhow::{bail, Context, Result};
use exindex::config::{parse_sections, selection_config_from_section, KvSection};
use exindex::selection::SelectionConfig;
use exindex::simulate::ProcessSpec;

pub const DESK_N: usize = 5000;
pub const DESK_REPS: usize = 100;
pub const PAPER_N: usize = 100_000;
pub const PAPER_REPS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessEntry {
    pub spec: ProcessSpec,
    pub n: usize,
    pub reps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variant {
    pub name: String,
    pub cfg: SelectionConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub seed: u64,
    pub processes: Vec<ProcessEntry>,
    pub variants: Vec<Variant>,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        if self.processes.is_empty() {
            bail!("the plan defines no [process] section");
        }
        if self.variants.is_empty() {
            bail!("the plan defines no [variant] section");
        }
        for p in &self.processes {
            if p.reps == 0 {
                bail!("process `{}` has reps = 0", p.spec.label());
            }
            if p.n < 2 {
                bail!("process `{}` has n < 2", p.spec.label());
            }
        }
        let mut names: Vec<&str> = self.variants.iter().map(|v| v.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != self.variants.len() {
            bail!("variant names must be unique");
        }
        Ok(())
    }

    /// Force one sample size on every process (CLI `--n` / `--paper-scale`).
    pub fn override_n(&mut self, n: usize) {
        for p in &mut self.processes {
            p.n = n;
        }
    }

    /// Force one replication count on every process (CLI `--reps`).
    pub fn override_reps(&mut self, reps: usize) {
        for p in &mut self.processes {
            p.reps = reps;
        }
    }
}

fn parse_usize(section: &KvSection, key: &str, default: usize) -> Result<usize> {
    match section.get(key) {
        None => Ok(default),
        Some(v) => v.parse::<usize>().with_context(|| {
            format!("line {}: `{key}` value `{v}` is not a count", section.line_of(key).unwrap())
        }),
    }
}

pub fn parse_plan(text: &str) -> Result<ExperimentPlan> {
    let sections = parse_sections(text)?;
    let preamble = &sections[0];
    for entry in &preamble.entries {
        if !matches!(entry.key.as_str(), "seed" | "n" | "reps") {
            bail!("line {}: unknown plan key `{}`", entry.line, entry.key);
        }
    }
    let seed = match preamble.get("seed") {
        None => 1,
        Some(v) => v.parse::<u64>().with_context(|| {
            format!("line {}: seed `{v}` is not a 64-bit integer", preamble.line_of("seed").unwrap())
        })?,
    };
    let default_n = parse_usize(preamble, "n", DESK_N)?;
    let default_reps = parse_usize(preamble, "reps", DESK_REPS)?;

    let mut plan =
        ExperimentPlan { seed, processes: Vec::new(), variants: Vec::new() };
    for section in &sections[1..] {
        match section.name.as_str() {
            "process" => {
                for entry in &section.entries {
                    if !matches!(entry.key.as_str(), "process" | "n" | "reps") {
                        bail!("line {}: unknown process key `{}`", entry.line, entry.key);
                    }
                }
                let label = section.require("process")?;
                let spec: ProcessSpec = label
                    .parse()
                    .with_context(|| format!("line {}", section.line_of("process").unwrap()))?;
                plan.processes.push(ProcessEntry {
                    spec,
                    n: parse_usize(section, "n", default_n)?,
                    reps: parse_usize(section, "reps", default_reps)?,
                });
            }
            "variant" => {
                let name = section.require("name")?.to_string();
                let cfg = selection_config_from_section(section, &["name"])
                    .with_context(|| format!("variant `{name}`"))?;
                plan.variants.push(Variant { name, cfg });
            }
            other => bail!("line {}: unknown section `[{other}]`", section.line),
        }
    }
    plan.validate()?;
    Ok(plan)
}
