use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use hankel_harness::config::{IntList, RawSettings};
use hankel_harness::csv_out::to_csv_string;
use hankel_harness::{emit_csv, run_norm_scan, run_phase_transition, run_recover, HarnessError};
use hankel_recover::Family;

/// Recover sums of complex exponentials from Gaussian projections by Hankel
/// nuclear-norm minimization, and run the associated experiments.
#[derive(Debug, Parser)]
#[command(name = "hankel-recover", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Single recovery run; writes a result JSON with --out.
    Recover(Flags),
    /// Success-rate grid over model orders (--r) and measurement counts (--m).
    PhaseTransition(Flags),
    /// Monte-Carlo estimate of E||G g||_2 over Hankel sizes (--n).
    NormScan(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    /// Hankel dimension N (signal length 2N-1); a list for norm-scan.
    #[arg(long)]
    n: Option<String>,
    /// Model order R; a list such as `1,2,4` or `1:6` for phase-transition.
    #[arg(long)]
    r: Option<String>,
    /// Measurement count M; a list such as `2:2:30` for phase-transition.
    #[arg(long)]
    m: Option<String>,
    /// Noise level ||eta||_2 (0 solves the equality-constrained program).
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Relative-error success threshold.
    #[arg(long)]
    threshold: Option<f64>,
    /// ADMM penalty parameter.
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Primal and dual stopping tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Output path (JSON for recover, CSV otherwise; CSV goes to stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Use the full-size experiment protocol instead of desk-scale defaults.
    #[arg(long)]
    full: bool,
    /// Signal family: sinusoid or damped.
    #[arg(long)]
    family: Option<Family>,
    /// Input signal JSON for recover.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Extract modes from the recovered signal with the matrix pencil method.
    #[arg(long)]
    pencil: bool,
    /// Keep rho fixed instead of balancing primal and dual residuals.
    #[arg(long)]
    fixed_rho: bool,
}

impl Flags {
    fn settings(&self) -> Result<RawSettings, HarnessError> {
        let file = match &self.config {
            Some(path) => RawSettings::load(path)?,
            None => RawSettings::default(),
        };
        let flags = RawSettings {
            n: self.n.clone().map(IntList::Text),
            r: self.r.clone().map(IntList::Text),
            m: self.m.clone().map(IntList::Text),
            delta: self.delta,
            seed: self.seed,
            trials: self.trials,
            threshold: self.threshold,
            rho: self.rho,
            max_iters: self.max_iters,
            tol: self.tol,
            out: self.out.clone(),
            full: self.full.then_some(true),
            family: self.family,
            input: self.input.clone(),
            pencil: self.pencil.then_some(true),
            fixed_rho: self.fixed_rho.then_some(true),
        };
        Ok(flags.overlay(file))
    }
}

const EXIT_USAGE: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 2;

fn fail(err: HarnessError) -> ExitCode {
    eprintln!("error: {err}");
    if matches!(err, HarnessError::Config(_)) {
        eprintln!("run `hankel-recover help` for usage");
    }
    ExitCode::from(EXIT_USAGE)
}

fn emit<T: hankel_harness::CsvTable>(table: &T, out: Option<&PathBuf>) -> Result<(), HarnessError> {
    match out {
        Some(path) => {
            emit_csv(table, path)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{}", to_csv_string(table)),
    }
    Ok(())
}

fn run(command: Command) -> Result<ExitCode, HarnessError> {
    match command {
        Command::Recover(flags) => {
            let settings = flags.settings()?;
            let spec = settings.recover_spec()?;
            let report = run_recover(&spec)?;
            if let Some(path) = &settings.out {
                report.write_json(path)?;
            }
            println!("{}", report.summary());
            if let Some(err) = &report.pencil_error {
                eprintln!("matrix pencil: {err}");
            }
            Ok(if report.converged {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_NOT_CONVERGED)
            })
        }
        Command::PhaseTransition(flags) => {
            let settings = flags.settings()?;
            let spec = settings.phase_spec()?;
            eprintln!(
                "phase transition: N={} R={:?} M={:?} trials={} seed={}",
                spec.n, spec.r_values, spec.m_values, spec.trials, spec.base_seed
            );
            let grid = run_phase_transition(&spec)?;
            emit(&grid, settings.out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::NormScan(flags) => {
            let settings = flags.settings()?;
            let (n_values, trials, seed) = settings.norm_scan_params()?;
            let scan = run_norm_scan(&n_values, trials, seed)?;
            emit(&scan, settings.out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => fail(e),
    }
}
