//! `gaplab`: runs the identity catalog on generated or pinned scenarios.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use gaplab::generror::{evaluate_catalog, Evaluator, Params, References, Tolerance};
use gaplab::harness::{self, demo_scenario, Format, Mode, RunConfig};

#[derive(Parser)]
#[command(
    name = "gaplab",
    version,
    about = "Check exact generalization-error identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the catalog on a batch of scenarios and emit a report.
    Check(CheckArgs),
    /// Print the identity table for a worked 2×2×2 example.
    Demo,
}

#[derive(Args)]
struct CheckArgs {
    /// JSON run configuration.
    #[arg(long, conflicts_with_all = ["seed", "scenarios"])]
    config: Option<PathBuf>,
    /// Base seed; scenario i uses seed + i. GAPLAB_SEED overrides it.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of generated scenarios.
    #[arg(long)]
    scenarios: Option<usize>,
    /// Relative tolerance (default 1e-9).
    #[arg(long)]
    tol_rel: Option<f64>,
    /// Absolute tolerance floor (default 1e-12).
    #[arg(long)]
    tol_abs: Option<f64>,
    /// Scenario generation mode (default full_support).
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format (default json).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ModeArg {
    FullSupport,
    Adversarial,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check(args) => check(args),
        Command::Demo => demo(),
    }
}

fn check(args: CheckArgs) -> Result<u8> {
    let mut config = match &args.config {
        Some(path) => {
            RunConfig::load(path).with_context(|| format!("reading config {}", path.display()))?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Ok(text) = std::env::var("GAPLAB_SEED") {
        config.seed = text
            .trim()
            .parse()
            .with_context(|| format!("GAPLAB_SEED={text:?} is not a u64"))?;
    }
    if let Some(k) = args.scenarios {
        config.num_scenarios = k;
    }
    if let Some(rel) = args.tol_rel {
        config.tolerance.rel = rel;
    }
    if let Some(abs) = args.tol_abs {
        config.tolerance.abs = abs;
    }
    if let Some(mode) = args.mode {
        config.mode = match mode {
            ModeArg::FullSupport => Mode::FullSupport,
            ModeArg::Adversarial => Mode::Adversarial,
        };
    }
    if let Some(out) = args.out {
        config.output = Some(out);
    }
    if let Some(format) = args.format {
        config.format = match format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        };
    }

    let report = harness::run(&config)?;
    harness::write_report(&report, config.format, config.output.as_deref())
        .context("writing report")?;
    let s = report.summary;
    eprintln!(
        "{} scenarios: {} pass, {} fail, {} skipped in {:.2}s",
        report.scenarios.len(),
        s.pass,
        s.fail,
        s.skipped,
        report.wall_time_secs
    );
    Ok(harness::exit_code(&report) as u8)
}

fn demo() -> Result<u8> {
    let scenario = demo_scenario();
    let ev = Evaluator::new(&scenario)?;
    println!(
        "loss (rows: datapoints, columns: models): {:?}",
        scenario.loss.rows()
    );
    println!("P_Z = {:?}, n = {}", scenario.p_z.masses(), scenario.n);
    println!("generalization error (oracle) = {:.12}", ev.gen_error());
    println!(
        "I = {:.12}, L = {:.12}",
        ev.mutual_information()?,
        ev.lautum_information()?
    );
    println!();
    println!(
        "{:<4} {:<28} {:>16} {:>16} {:>10}  status",
        "id", "params", "lhs", "rhs", "abs_err"
    );
    let results = evaluate_catalog(
        &scenario,
        &[scenario.lambda],
        &[scenario.beta],
        &References::default(),
        &Tolerance::default(),
    )?;
    let mut fails = 0;
    for r in &results {
        fails += usize::from(r.status == gaplab::generror::Status::Fail);
        println!(
            "{:<4} {:<28} {:>16.12} {:>16.12} {:>10.2e}  {}",
            r.id.tag(),
            r.params,
            r.lhs,
            r.rhs,
            r.abs_err,
            r.status
        );
    }
    println!();
    for t in ev.triangles(&Params::of(&scenario))? {
        println!(
            "triangle {:<16} {:.12} + {:.12} = {:.12}",
            t.kind, t.legs[0], t.legs[1], t.hypotenuse
        );
    }
    Ok(u8::from(fails > 0))
}
