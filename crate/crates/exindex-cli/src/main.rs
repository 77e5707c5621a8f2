use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use exindex::config::parse_levels;
use exindex::cvm::{cms_quantile, DELTA1, DELTA2};
use exindex::selection::{scan_thresholds, SelectionConfig};
use exindex::simulate::{Marginal, ProcessSpec};
use exindex::{run_algorithm, Error as ExError, Series};

use exindex_cli::cli::{self, Cli, Command, Missing};
use exindex_cli::ingest::{self, ColumnSel, MissingPolicy};
use exindex_cli::{plan, report, runner, stats};

fn main() -> ExitCode {
    let parsed = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match run(parsed) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::SelectThreshold(args) => cmd_select_threshold(args),
        Command::Benchmark(args) => cmd_benchmark(args),
        Command::GofTest(args) => cmd_gof_test(args),
        Command::Cms(args) => cmd_cms(args),
    }
}

fn load_series(data: &cli::DataArgs) -> Result<Series> {
    let policy = match data.missing {
        Missing::Drop => MissingPolicy::Drop,
        Missing::Fail => MissingPolicy::Fail,
    };
    let (series, dropped) =
        ingest::ingest_csv(&data.input, &ColumnSel::parse(&data.column), policy)?;
    if dropped > 0 {
        eprintln!("dropped {dropped} unusable cell(s); n = {}", series.len());
    }
    Ok(series)
}

fn writer_to(path: Option<&Path>, delimiter: u8) -> Result<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match path {
        Some(p) => {
            Box::new(std::fs::File::create(p).with_context(|| format!("cannot write {}", p.display()))?)
        }
        None => Box::new(std::io::stdout().lock()),
    };
    Ok(csv::WriterBuilder::new().delimiter(delimiter).from_writer(sink))
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn cmd_simulate(args: cli::SimulateArgs) -> Result<u8> {
    let spec: ProcessSpec = args.process.parse()?;
    let series: Series = exindex::simulate(&spec, args.n, args.seed)?;
    let mut w = writer_to(args.output.as_deref(), args.format.delimiter())?;
    w.write_record(["value"])?;
    for &v in series.values() {
        w.write_record([fmt(v)])?;
    }
    w.flush()?;
    Ok(0)
}

fn candidate_header() -> [&'static str; 8] {
    ["q", "u", "n_u", "l", "k", "kgap", "theta", "stat"]
}

fn candidate_row(c: &exindex::selection::Candidate<f64>) -> [String; 8] {
    [
        fmt(c.q),
        fmt(c.u),
        c.n_u.to_string(),
        c.l.to_string(),
        c.k.to_string(),
        c.kgap.map_or_else(String::new, |k| k.to_string()),
        fmt(c.theta),
        fmt(c.stat),
    ]
}

fn cmd_estimate(args: cli::EstimateArgs) -> Result<u8> {
    let series = load_series(&args.data)?;
    let cfg: SelectionConfig = args.selection.resolve()?;
    let scan = scan_thresholds(&series, &cfg);
    if !scan.skipped.is_empty() {
        eprintln!("skipped {} infeasible (level, K) pair(s)", scan.skipped.len());
    }
    let mut w = writer_to(args.output.as_deref(), args.format.delimiter())?;
    w.write_record(candidate_header())?;
    for c in &scan.candidates {
        w.write_record(candidate_row(c))?;
    }
    w.flush()?;
    Ok(0)
}

fn cmd_select_threshold(args: cli::SelectThresholdArgs) -> Result<u8> {
    let series = load_series(&args.data)?;
    let cfg: SelectionConfig = args.selection.resolve()?;
    let result = match run_algorithm(&series, &cfg) {
        Ok(r) => r,
        Err(ExError::NoSolutions) => {
            eprintln!("no solution thresholds on the configured grid");
            return Ok(2);
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(path) = &args.output {
        let mut w = writer_to(Some(path), args.format.delimiter())?;
        w.write_record(candidate_header())?;
        for c in &result.solutions {
            w.write_record(candidate_row(c))?;
        }
        w.flush()?;
    }
    println!("solutions = {}", result.len());
    println!("theta1 = {}", fmt(result.theta1.expect("nonempty")));
    println!("theta2 = {}", fmt(result.theta2.expect("nonempty")));
    println!("theta3 = {}", fmt(result.theta3.expect("nonempty")));
    Ok(0)
}

fn cmd_benchmark(args: cli::BenchmarkArgs) -> Result<u8> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("cannot read {}", args.config.display()))?;
    let mut plan = plan::parse_plan(&text)
        .with_context(|| format!("plan {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        plan.seed = seed;
    }
    if args.paper_scale {
        plan.override_n(plan::PAPER_N);
        plan.override_reps(plan::PAPER_REPS);
    }
    if let Some(n) = args.n {
        plan.override_n(n);
    }
    if let Some(reps) = args.reps {
        plan.override_reps(reps);
    }
    let out = runner::run_experiment(&plan, args.threads)?;
    let paths =
        report::emit_report_files(&args.output, args.format.delimiter(), &plan, &out)?;
    let failures = out.records.iter().filter(|r| r.failed).count();
    println!(
        "ran {} replication-variant pairs ({} failed); report: {}",
        out.records.len(),
        failures,
        paths.report.display()
    );
    println!("log: {}", paths.log.display());
    println!("curves: {}", paths.curves.display());
    Ok(0)
}

fn cmd_gof_test(args: cli::GofTestArgs) -> Result<u8> {
    let series = load_series(&args.data)?;
    let marginal: Marginal = args.dist.parse()?;
    let n = series.len();
    if args.k == 0 || args.k + 1 > n {
        anyhow::bail!("k must satisfy 1 ≤ k ≤ n−1 (n = {n})");
    }
    let sorted = series.sorted();
    let top = &sorted[n - args.k - 1..];
    let stat = exindex::tail_gof_statistic(top, |x| stats::marginal_cdf(marginal, x))?;
    let p_value = 1.0 - exindex::cms_cdf(stat);
    println!("statistic = {}", fmt(stat));
    println!("p_value = {}", fmt(p_value));
    Ok(0)
}

fn cmd_cms(args: cli::CmsArgs) -> Result<u8> {
    println!("delta1 = {DELTA1}");
    println!("delta2 = {DELTA2}");
    let ps = match &args.quantiles {
        Some(list) => parse_levels(list)?,
        None => vec![0.5, 0.9, 0.95, 0.99, 0.999, 0.9998],
    };
    for p in ps {
        anyhow::ensure!(p > 0.0 && p < 1.0, "quantile probability {p} outside (0,1)");
        println!("quantile({p}) = {}", fmt(cms_quantile(p)));
    }
    Ok(0)
}
