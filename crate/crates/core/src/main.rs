use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tribody::harness::{run_benchmark, run_scenario, run_verify, BenchConfig, Scenario};

#[derive(Parser)]
#[command(name = "tribody", version, about = "Lennard-Jones + Axilrod-Teller-Muto molecular dynamics on linked cells")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config (melt, equilibration, production).
    Run { config: PathBuf },
    /// Time the three-body routine over traversals, cutoffs and thread counts.
    Bench { config: PathBuf },
    /// Check traversals against the brute-force oracle and schedule coverage.
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> tribody::Result<bool> {
    match cli.command {
        Command::Run { config } => {
            let sc = Scenario::load(&config)?;
            let report = run_scenario(&sc)?;
            print!("{}", report.summary_csv());
            for f in &report.fits {
                println!("fit,{},{:.6},{:.6},{:.6},{:.6}", f.side, f.rho_l, f.rho_g, f.z0, f.d);
            }
            for (side, e) in &report.fit_errors {
                eprintln!("fit {side}: {e}");
            }
            Ok(true)
        }
        Command::Bench { config } => {
            let cfg = BenchConfig::load(&config)?;
            println!("{}", tribody::harness::BenchReport::CSV_HEADER);
            let report = run_benchmark(&cfg, |r| {
                println!(
                    "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.4},{:.4},{}",
                    r.traversal,
                    r.cutoff,
                    r.threads,
                    r.wall_seconds,
                    r.wall_std,
                    r.step_seconds,
                    r.mmups,
                    r.hitrate,
                    r.speedup,
                    r.high_variance
                )
            })?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            Ok(true)
        }
        Command::Verify { seed } => {
            let lines = run_verify(seed)?;
            for l in &lines {
                println!("{l}");
            }
            Ok(lines.iter().all(|l| l.passed))
        }
    }
}
