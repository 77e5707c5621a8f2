//! Monte Carlo execution of an experiment plan. Replications run in
//! parallel with seeds derived from the master seed and the replication's
//! global index, so the output is a pure function of the plan — identical
//! across runs and worker-thread counts. All variants of one replication
//! share the simulated path.

use anyhow::{Context, Result};
use exindex::rng::derive;
use exindex::selection::scan_thresholds;
use exindex::{run_algorithm, Series};
use rayon::prelude::*;

use crate::plan::ExperimentPlan;

/// One (replication, variant) outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct RepOutcome {
    pub process: String,
    pub variant: String,
    pub rep: usize,
    pub seed: u64,
    pub failed: bool,
    /// Aggregate estimates; all present on success, all absent on failure.
    pub theta: [Option<f64>; 3],
    /// Gap count L at each solution threshold, in solution order.
    pub solution_ls: Vec<usize>,
}

/// Estimate-vs-level curve of replication 0, one per (process, variant).
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub process: String,
    pub variant: String,
    /// (quantile level, θ̂ at that level) for every evaluable candidate.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub records: Vec<RepOutcome>,
    pub curves: Vec<Curve>,
}

struct Task {
    p_idx: usize,
    rep: usize,
    seed: u64,
}

fn run_task(plan: &ExperimentPlan, task: &Task) -> Result<(Vec<RepOutcome>, Vec<Curve>)> {
    let entry = &plan.processes[task.p_idx];
    let label = entry.spec.label();
    let series: Series = exindex::simulate(&entry.spec, entry.n, task.seed)
        .with_context(|| format!("simulating {label}"))?;
    let mut records = Vec::with_capacity(plan.variants.len());
    let mut curves = Vec::new();
    for variant in &plan.variants {
        let mut outcome = RepOutcome {
            process: label.clone(),
            variant: variant.name.clone(),
            rep: task.rep,
            seed: task.seed,
            failed: true,
            theta: [None; 3],
            solution_ls: Vec::new(),
        };
        if let Ok(result) = run_algorithm(&series, &variant.cfg) {
            outcome.failed = false;
            outcome.theta = [result.theta1, result.theta2, result.theta3];
            outcome.solution_ls = result.solutions.iter().map(|c| c.l).collect();
        }
        records.push(outcome);
        if task.rep == 0 {
            let scan = scan_thresholds(&series, &variant.cfg);
            curves.push(Curve {
                process: label.clone(),
                variant: variant.name.clone(),
                points: scan.candidates.iter().map(|c| (c.q, c.theta)).collect(),
            });
        }
    }
    Ok((records, curves))
}

/// Execute the plan on `threads` workers (0 = rayon's default).
pub fn run_experiment(plan: &ExperimentPlan, threads: usize) -> Result<RunOutput> {
    plan.validate()?;
    let mut tasks = Vec::new();
    let mut offset = 0u64;
    for (p_idx, entry) in plan.processes.iter().enumerate() {
        for rep in 0..entry.reps {
            tasks.push(Task { p_idx, rep, seed: derive(plan.seed, offset + rep as u64) });
        }
        offset += entry.reps as u64;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("cannot build the worker pool")?;
    let results: Vec<Result<(Vec<RepOutcome>, Vec<Curve>)>> =
        pool.install(|| tasks.par_iter().map(|t| run_task(plan, t)).collect());
    let mut out = RunOutput { records: Vec::new(), curves: Vec::new() };
    for result in results {
        let (records, curves) = result?;
        out.records.extend(records);
        out.curves.extend(curves);
    }
    Ok(out)
}
