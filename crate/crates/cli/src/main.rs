use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use nrecur_cli::{cmd_run, ExperimentConfig, Mode, SystemKind, TraceFormat};

/// Construct, simulate and check threshold recurrence systems.
///
/// Exit status: 0 when every claim and prediction holds, 1 when any fails
/// (the report is still written), 2 on configuration or I/O errors.
#[derive(Debug, Parser)]
#[command(name = "nrecur", version)]
struct Args {
    /// TOML experiment file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    m: Option<usize>,
    /// Bifurcation indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    d: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, value_enum)]
    system: Option<SystemKind>,
    /// Lane index for x and v systems.
    #[arg(long = "lane", short = 'i')]
    lane: Option<usize>,
    /// Step budget for cycle search.
    #[arg(long)]
    budget: Option<u64>,
    /// Claim ids, comma separated, or `all`.
    #[arg(long, value_delimiter = ',')]
    claims: Option<Vec<String>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    emit_traces: bool,
    #[arg(long, value_enum)]
    trace_format: Option<TraceFormat>,
    /// Steps for `simulate`.
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Add the long-tier scales m = 16 and m = 21 to `verify`.
    #[arg(long)]
    long: bool,
}

impl Args {
    fn into_config(self) -> anyhow::Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if self.m.is_some() {
            c.m = self.m;
        }
        if self.d.is_some() {
            c.d = self.d;
        }
        if self.lane.is_some() {
            c.lane = self.lane;
        }
        if self.budget.is_some() {
            c.budget = self.budget;
        }
        if let Some(claims) = self.claims {
            c.claims = claims;
        }
        c.mode = self.mode.unwrap_or(c.mode);
        c.system = self.system.unwrap_or(c.system);
        c.out = self.out.unwrap_or(c.out);
        c.trace_format = self.trace_format.unwrap_or(c.trace_format);
        c.steps = self.steps.unwrap_or(c.steps);
        c.seed = self.seed.unwrap_or(c.seed);
        c.emit_traces |= self.emit_traces;
        c.long |= self.long;
        Ok(c)
    }
}

fn main() -> ExitCode {
    let outcome = Args::parse().into_config().and_then(|c| cmd_run(&c));
    match outcome {
        Ok(report) => {
            for c in report.claims.iter().filter(|c| !c.passed) {
                eprintln!("FAIL {} m={:?} d={:?}: {}", c.claim, c.m, c.d, c.detail);
            }
            for line in &report.diagnostics {
                eprintln!("note: {line}");
            }
            println!(
                "{} claim(s), {} cycle row(s), all passed: {} ({:.2} s) -> {}",
                report.claims.len(),
                report.cycles.len(),
                report.all_passed,
                report.wall_clock_seconds,
                report.config.out.join("report.json").display()
            );
            if report.all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
