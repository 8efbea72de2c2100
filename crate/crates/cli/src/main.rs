use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use esd_cli::commands::{
    evolve_csv, negativity_text, run_scan, scan_csv, scan_warnings, EvolveArgs, GridSpec, RateArgs,
    ScanArgs, ScanMode,
};
use esd_cli::figures::write_figure;
use esd_cli::spec_text::StateSpec;
use esd_cli::validate::run_validation;
use esd_core::dynamics::DEFAULT_DT;

/// Entanglement sudden death in a qubit-qutrit system under spontaneous emission.
#[derive(Parser, Debug)]
#[command(name = "esd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Rates {
    /// Decay rate of the qubit.
    #[arg(long, value_name = "R")]
    gamma: Option<f64>,
    /// Decay rate of the qutrit transition |1⟩→|0⟩.
    #[arg(long, value_name = "R")]
    gamma1: Option<f64>,
    /// Decay rate of the qutrit transition |2⟩→|0⟩.
    #[arg(long, value_name = "R")]
    gamma2: Option<f64>,
    /// Interference parameter; sets gamma1 = k·gamma2.
    #[arg(long, value_name = "K")]
    k: Option<f64>,
}

impl Rates {
    fn args(&self) -> RateArgs {
        RateArgs {
            gamma: self.gamma,
            gamma1: self.gamma1,
            gamma2: self.gamma2,
            k: self.k,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Negativity of a state.
    Negativity {
        #[arg(long, value_name = "SPEC")]
        state: StateSpec,
    },
    /// Integrate the master equation and write the trajectory as CSV.
    Evolve {
        #[arg(long, value_name = "SPEC")]
        state: StateSpec,
        #[command(flatten)]
        rates: Rates,
        #[arg(long, value_name = "T")]
        t_max: f64,
        #[arg(long, value_name = "DT", default_value_t = DEFAULT_DT)]
        dt: f64,
        /// Write every n-th integrator step.
        #[arg(long, value_name = "N", default_value_t = 10)]
        stride: usize,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Classify a grid of states and locate the sudden-death threshold.
    Scan {
        #[arg(long, value_name = "beta|mixed-c")]
        mode: ScanMode,
        #[command(flatten)]
        rates: Rates,
        /// Weight b of the mixed family.
        #[arg(long, value_name = "B")]
        b: Option<f64>,
        #[arg(long, value_name = "START:STOP:COUNT")]
        grid: Option<GridSpec>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Write the data and a gnuplot script for one figure.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        id: u8,
        #[arg(long, value_name = "DIR", default_value = ".")]
        out: PathBuf,
    },
    /// Run the self-check suite.
    Validate {
        #[arg(long, hide = true, default_value_t = DEFAULT_DT)]
        dt: f64,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .context("cannot write to stdout"),
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Negativity { state } => {
            println!("{}", negativity_text(&state)?);
        }
        Command::Evolve {
            state,
            rates,
            t_max,
            dt,
            stride,
            out,
        } => {
            let args = EvolveArgs {
                state,
                rates: rates.args().resolve()?,
                t_max,
                dt,
                stride,
            };
            emit(&evolve_csv(&args)?, out.as_ref())?;
        }
        Command::Scan {
            mode,
            rates,
            b,
            grid,
            out,
        } => {
            let scan = run_scan(&ScanArgs {
                mode,
                rates: rates.args().resolve()?,
                b,
                grid,
            })?;
            for w in scan_warnings(&scan) {
                eprintln!("warning: {w}");
            }
            emit(&scan_csv(&scan), out.as_ref())?;
        }
        Command::Figure { id, out } => {
            for f in write_figure(id, &out)? {
                eprintln!("wrote {}", out.join(&f.name).display());
            }
        }
        Command::Validate { dt } => {
            let checks = run_validation(dt);
            for c in &checks {
                println!("{}", c.line());
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} of {} checks passed", checks.len() - failed, checks.len());
            return Ok(failed == 0);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
