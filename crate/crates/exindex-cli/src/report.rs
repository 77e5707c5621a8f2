//! Report assembly: aggregate replication outcomes into the RMSE/bias table,
//! write it with the per-replication log and the plot-ready curves, and read
//! the log back (the log is the audit trail — aggregates must be exactly
//! recomputable from it).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use crate::plan::ExperimentPlan;
use crate::runner::{RepOutcome, RunOutput};

/// Aggregates of one (variant, process) cell. Failed replications are
/// excluded from every estimate-derived number and show up only in
/// `failure_rate`; a cell with no successes renders as `-`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellStats {
    pub reps: usize,
    pub successes: usize,
    /// RMSE·10⁴ of θ̂₁..θ̂₃ over successful replications.
    pub rmse_e4: [Option<f64>; 3],
    /// |Bias|·10⁴ of θ̂₁..θ̂₃ over successful replications.
    pub bias_e4: [Option<f64>; 3],
    pub failure_rate: f64,
    /// Mean number of solution thresholds over successful replications.
    pub mean_solutions: Option<f64>,
}

/// True θ per process label, the reference for RMSE/bias.
pub fn true_thetas(plan: &ExperimentPlan) -> BTreeMap<String, f64> {
    plan.processes
        .iter()
        .map(|p| (p.spec.label(), p.spec.true_theta()))
        .collect()
}

/// Group records by (variant, process) and reduce each cell.
pub fn aggregate(
    records: &[RepOutcome],
    truths: &BTreeMap<String, f64>,
) -> BTreeMap<(String, String), CellStats> {
    let mut groups: BTreeMap<(String, String), Vec<&RepOutcome>> = BTreeMap::new();
    for r in records {
        groups.entry((r.variant.clone(), r.process.clone())).or_default().push(r);
    }
    let mut cells = BTreeMap::new();
    for (key, rows) in groups {
        let theta = truths[&key.1];
        let reps = rows.len();
        let successes: Vec<&&RepOutcome> = rows.iter().filter(|r| !r.failed).collect();
        let s = successes.len();
        let mut rmse_e4 = [None; 3];
        let mut bias_e4 = [None; 3];
        let mut mean_solutions = None;
        if s > 0 {
            for j in 0..3 {
                let mut sq = 0.0f64;
                let mut sum = 0.0f64;
                for r in &successes {
                    let est = r.theta[j].expect("successful replications carry estimates");
                    sq += (est - theta) * (est - theta);
                    sum += est;
                }
                rmse_e4[j] = Some((sq / s as f64).sqrt() * 1e4);
                bias_e4[j] = Some((sum / s as f64 - theta).abs() * 1e4);
            }
            let total: usize = successes.iter().map(|r| r.solution_ls.len()).sum();
            mean_solutions = Some(total as f64 / s as f64);
        }
        cells.insert(
            key,
            CellStats {
                reps,
                successes: s,
                rmse_e4,
                bias_e4,
                failure_rate: (reps - s) as f64 / reps as f64,
                mean_solutions,
            },
        );
    }
    cells
}

const METRICS: [&str; 8] = [
    "rmse1e4_theta1",
    "rmse1e4_theta2",
    "rmse1e4_theta3",
    "bias1e4_theta1",
    "bias1e4_theta2",
    "bias1e4_theta3",
    "failure_rate",
    "mean_solutions",
];

fn metric_value(cell: &CellStats, metric: &str) -> Option<f64> {
    match metric {
        "rmse1e4_theta1" => cell.rmse_e4[0],
        "rmse1e4_theta2" => cell.rmse_e4[1],
        "rmse1e4_theta3" => cell.rmse_e4[2],
        "bias1e4_theta1" => cell.bias_e4[0],
        "bias1e4_theta2" => cell.bias_e4[1],
        "bias1e4_theta3" => cell.bias_e4[2],
        "failure_rate" => Some(cell.failure_rate),
        "mean_solutions" => cell.mean_solutions,
        _ => unreachable!("metric list is fixed"),
    }
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

/// Files written by one benchmark invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportPaths {
    pub report: PathBuf,
    pub log: PathBuf,
    pub curves: PathBuf,
}

/// `report.csv` → `report.log.csv` / `report.curves.csv`.
fn sibling(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}.{tag}.{ext}"))
}

/// Write the aggregate table (rows = variant × metric, columns = processes),
/// the per-replication log, and the θ̂-vs-level curves of replication 0.
pub fn emit_report_files(
    path: &Path,
    delimiter: u8,
    plan: &ExperimentPlan,
    out: &RunOutput,
) -> Result<ReportPaths> {
    let paths = ReportPaths {
        report: path.to_path_buf(),
        log: sibling(path, "log"),
        curves: sibling(path, "curves"),
    };
    let cells = aggregate(&out.records, &true_thetas(plan));
    let process_labels: Vec<String> = plan.processes.iter().map(|p| p.spec.label()).collect();

    let mut w = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_path(&paths.report)
        .with_context(|| format!("cannot write {}", paths.report.display()))?;
    let mut header = vec!["variant".to_string(), "metric".to_string()];
    header.extend(process_labels.iter().cloned());
    w.write_record(&header)?;
    for variant in &plan.variants {
        for metric in METRICS {
            let mut row = vec![variant.name.clone(), metric.to_string()];
            for label in &process_labels {
                let cell = cells.get(&(variant.name.clone(), label.clone()));
                let text = cell
                    .and_then(|c| metric_value(c, metric))
                    .map_or_else(|| "-".to_string(), fmt);
                row.push(text);
            }
            w.write_record(&row)?;
        }
    }
    w.flush()?;

    let mut w = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_path(&paths.log)
        .with_context(|| format!("cannot write {}", paths.log.display()))?;
    w.write_record([
        "seed", "process", "variant", "rep", "solution_ls", "theta1", "theta2", "theta3",
        "failed",
    ])?;
    for r in &out.records {
        let ls: Vec<String> = r.solution_ls.iter().map(|l| l.to_string()).collect();
        w.write_record([
            r.seed.to_string(),
            r.process.clone(),
            r.variant.clone(),
            r.rep.to_string(),
            ls.join(";"),
            r.theta[0].map_or_else(String::new, fmt),
            r.theta[1].map_or_else(String::new, fmt),
            r.theta[2].map_or_else(String::new, fmt),
            r.failed.to_string(),
        ])?;
    }
    w.flush()?;

    let mut w = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_path(&paths.curves)
        .with_context(|| format!("cannot write {}", paths.curves.display()))?;
    w.write_record(["process", "variant", "q", "theta"])?;
    for curve in &out.curves {
        for &(q, theta) in &curve.points {
            w.write_record([curve.process.clone(), curve.variant.clone(), fmt(q), fmt(theta)])?;
        }
    }
    w.flush()?;
    Ok(paths)
}

/// Read a per-replication log back into records (inverse of the log writer).
pub fn parse_log(path: &Path) -> Result<Vec<RepOutcome>> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(detect_delimiter(path)?)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let mut records = Vec::new();
    for (idx, row) in reader.records().enumerate() {
        let line = idx + 2;
        let row = row.with_context(|| format!("line {line}: malformed log row"))?;
        if row.len() != 9 {
            bail!("line {line}: expected 9 fields, got {}", row.len());
        }
        let parse_theta = |cell: &str| -> Result<Option<f64>> {
            if cell.is_empty() {
                Ok(None)
            } else {
                Ok(Some(cell.parse::<f64>().with_context(|| format!("line {line}"))?))
            }
        };
        let solution_ls = if row[4].is_empty() {
            Vec::new()
        } else {
            row[4]
                .split(';')
                .map(|s| s.parse::<usize>().with_context(|| format!("line {line}")))
                .collect::<Result<_>>()?
        };
        records.push(RepOutcome {
            seed: row[0].parse().with_context(|| format!("line {line}"))?,
            process: row[1].to_string(),
            variant: row[2].to_string(),
            rep: row[3].parse().with_context(|| format!("line {line}"))?,
            solution_ls,
            theta: [parse_theta(&row[5])?, parse_theta(&row[6])?, parse_theta(&row[7])?],
            failed: row[8].parse().with_context(|| format!("line {line}"))?,
        });
    }
    Ok(records)
}

fn detect_delimiter(path: &Path) -> Result<u8> {
    let head = std::fs::read_to_string(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    Ok(if head.lines().next().is_some_and(|l| l.contains('\t')) { b'\t' } else { b',' })
}
