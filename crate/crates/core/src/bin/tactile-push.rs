use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use tactile_push::harness::{
    export, irregular_shapes, prism_shapes, read_records, run_experiment_1, run_experiment_2, run_experiment_3,
    run_repeated, write_plot, ExperimentConfig, ExperimentResult, Outcome,
};
use tactile_push::scene::{builtin_shapes, load_scenario};

#[derive(Parser)]
#[command(name = "tactile-push", version, about = "Simulated tactile pushing experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(clap::Args)]
struct GridArgs {
    /// Trials per grid cell.
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Master seed for the per-trial seed fan-out.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

impl GridArgs {
    fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            trials_per_cell: self.trials,
            master_seed: self.seed,
            threads: self.threads,
            ..ExperimentConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Master seed; defaults to the scenario's rng_seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        noise: Option<Switch>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Contact offset x angle grid on the blue square.
    Exp1(GridArgs),
    /// Five prisms from three start poses, corner first.
    Exp2(GridArgs),
    /// Irregular outlines with random start orientations.
    Exp3(GridArgs),
    /// Render records.json to SVG.
    Plot {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Load and validate a scenario, printing it with defaults filled in.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Print the built-in shape catalog as JSON.
    Shapes,
}

/// Prints `text`, treating a closed pipe (`| head`) as success.
fn emit(text: &str) -> Result<ExitCode> {
    use std::io::Write;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(ExitCode::SUCCESS),
    }
}

fn report(result: &ExperimentResult, out: &std::path::Path) -> Result<ExitCode> {
    let paths = export(&result.name, &result.records, out)?;
    let m = &result.metrics;
    println!(
        "{}: {}/{} reached ({:.1}%), y_targ {}",
        result.name,
        m.reached,
        m.trials,
        100.0 * m.success_rate,
        m.y_targ_summary()
    );
    if let Some(t) = m.taps {
        println!("taps: min {} median {} max {}", t.min, t.median, t.max);
    }
    println!("wrote {}", paths.records.parent().unwrap_or(out).display());
    let faults: Vec<_> = result
        .records
        .iter()
        .filter(|r| r.outcome == Outcome::PhysicsFault)
        .collect();
    for r in &faults {
        if let Some(f) = &r.fault {
            eprintln!("{}: {f}", r.scenario_id);
        }
    }
    Ok(if faults.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run {
            scenario,
            trials,
            seed,
            noise,
            out,
            threads,
        } => {
            let mut s = load_scenario(&scenario)?;
            if let Some(n) = noise {
                s.noise.enabled = matches!(n, Switch::On);
            }
            let cfg = ExperimentConfig {
                trials_per_cell: trials,
                master_seed: seed.unwrap_or(s.rng_seed),
                noise: s.noise,
                threads,
                ..ExperimentConfig::default()
            };
            report(&run_repeated(&s, &cfg)?, &out)
        }
        Command::Exp1(args) => report(&run_experiment_1(&args.config())?, &args.out),
        Command::Exp2(args) => report(&run_experiment_2(&prism_shapes(), &args.config())?, &args.out),
        Command::Exp3(args) => report(&run_experiment_3(&irregular_shapes(), &args.config())?, &args.out),
        Command::Plot { records, out } => {
            let recs = read_records(&records)?;
            write_plot(&recs, &out)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { scenario } => {
            let s = load_scenario(&scenario)?;
            let text = serde_json::to_string_pretty(&s.to_file()).context("serializing scenario")?;
            emit(&text)
        }
        Command::Shapes => emit(&serde_json::to_string_pretty(&builtin_shapes())?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
