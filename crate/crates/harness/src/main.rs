use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use petz_harness::config::OutputFormat;
use petz_harness::demo::{demo, DemoChannel};
use petz_harness::suite::{load_replay_file, run_suite, write_outputs, Summary};
use petz_harness::{replay, Check, Family, HarnessConfig, HarnessError};

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "petz", version, about = "Randomized verification of Petz recovery bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the randomized suite described by a TOML config.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Trials per (algebra, family).
        #[arg(long)]
        trials: Option<usize>,
        /// Master seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<OutputFormat>,
        /// Comma-separated channel families.
        #[arg(long, value_delimiter = ',')]
        families: Option<Vec<Family>>,
        /// Comma-separated checks to skip.
        #[arg(long, value_delimiter = ',')]
        skip: Option<Vec<Check>>,
    },
    /// Re-evaluate a persisted instance.
    Replay {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Print the worked example on M2.
    Demo {
        #[arg(long, default_value = "pinching")]
        channel: DemoChannel,
    },
}

fn exit_code(e: &HarnessError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_CONFIG)
}

fn print_summary(s: &Summary) {
    println!(
        "trials: {}  passed: {}  failed: {}  errors: {}  resamples: {}",
        s.total_trials, s.passed_trials, s.failed_trials, s.error_trials, s.resamples
    );
    println!("{:<24} {:>9} {:>7} {:>14} {:>10}", "check", "evaluated", "failed", "min margin", "tolerance");
    for (c, cs) in &s.checks {
        let min = cs.min_margin.map_or("-".to_string(), |m| format!("{m:.3e}"));
        println!("{:<24} {:>9} {:>7} {:>14} {:>10.1e}", c.name(), cs.evaluated, cs.failed, min, cs.tolerance);
    }
    if !s.skipped.is_empty() {
        let names: Vec<&str> = s.skipped.iter().map(|c| c.name()).collect();
        println!("skipped: {}", names.join(", "));
    }
    for na in &s.not_applicable {
        println!("not applicable: {} / {} ({})", na.algebra, na.family, na.reason);
    }
    let fmt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.6e}"));
    println!(
        "swb gap sign histogram: negative {}  zero {}  positive {}  min {}  max {}",
        s.swb.negative,
        s.swb.zero,
        s.swb.positive,
        fmt(s.swb.min),
        fmt(s.swb.max)
    );
    println!(
        "sufficiency: vacuous {}  pass {}  fail {}",
        s.sufficiency.vacuous, s.sufficiency.pass, s.sufficiency.fail
    );
}

fn verify(
    config: PathBuf,
    trials: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
    families: Option<Vec<Family>>,
    skip: Option<Vec<Check>>,
) -> ExitCode {
    let mut cfg = match HarnessConfig::load(&config) {
        Ok(c) => c,
        Err(e) => return exit_code(&e),
    };
    if let Some(t) = trials {
        cfg.trials = t;
    }
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    if let Some(f) = families {
        cfg.families = f;
    }
    if let Some(s) = skip {
        cfg.skip = s.iter().map(|c| c.name().to_string()).collect();
    }
    let outcome = match run_suite(&cfg) {
        Ok(o) => o,
        Err(e) => return exit_code(&e),
    };
    print_summary(&outcome.summary);
    let target = out.or_else(|| cfg.output.as_ref().map(|o| o.path.clone()));
    if let Some(path) = target {
        let fmt = format
            .or_else(|| cfg.output.as_ref().map(|o| o.format))
            .unwrap_or(OutputFormat::Json);
        match write_outputs(&outcome, &cfg, &path, fmt) {
            Ok(files) => {
                println!("report: {}", path.display());
                if !files.is_empty() {
                    println!("persisted instances: {}", files.len());
                }
            }
            Err(e) => return exit_code(&e),
        }
    }
    if outcome.summary.all_passed() {
        println!("result: PASS");
        ExitCode::SUCCESS
    } else {
        println!("result: FAIL");
        ExitCode::from(EXIT_FAIL)
    }
}

fn run_replay(path: PathBuf) -> ExitCode {
    let file = match load_replay_file(&path) {
        Ok(f) => f,
        Err(e) => return exit_code(&e),
    };
    let r = match replay(&file) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("channel construction failed");
            return exit_code(&e);
        }
    };
    match serde_json::to_string_pretty(&r.report) {
        Ok(s) => println!("{s}"),
        Err(e) => return exit_code(&e.into()),
    }
    println!("identical to recorded report: {}", r.identical);
    if r.identical && r.report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Verify { config, trials, seed, out, format, families, skip } => {
            verify(config, trials, seed, out, format, families, skip)
        }
        Command::Replay { instance } => run_replay(instance),
        Command::Demo { channel } => match demo(channel) {
            Ok(t) => {
                print!("{t}");
                ExitCode::SUCCESS
            }
            Err(e) => exit_code(&e),
        },
    }
}
