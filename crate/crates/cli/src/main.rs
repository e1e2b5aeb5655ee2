//! `multipartite`: evaluate entanglement criteria, sweep state families, and
//! run the built-in verification suites.
//!
//! Exit codes: 0 success, 1 invalid configuration, 2 verification failure,
//! 3 I/O error.

mod commands;
mod config;
mod error;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Format, RunConfig, Settings};
use error::CliError;

#[derive(Parser)]
#[command(name = "multipartite", version, about = "k-partite entanglement and k-nonseparability criteria")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate criteria on one state and print verdict records.
    Eval(Options),
    /// Sweep a family's (p, q) simplex and write grid, curve and plot files.
    Sweep(Options),
    /// Run the seeded verification suites.
    Verify(Options),
}

/// Every option is also accepted as `key = value` in the --config document;
/// flags take precedence.
#[derive(Args, Default)]
struct Options {
    /// Configuration document with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// GhzMix<N>, WQutritMix, or custom (two components from --state-file).
    #[arg(long)]
    family: Option<String>,
    /// State document; without --family the mixture it describes is evaluated.
    #[arg(long)]
    state_file: Option<String>,
    /// Comma-separated criterion codes: thm1, thm2, thm2k1, thm3, thm4,
    /// critI, critII, critIII, critIV, critGHZ.
    #[arg(long)]
    criterion: Option<String>,
    /// Comma-separated k values; every admissible k when omitted.
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    /// Swap fiducial as LABEL/LABEL, e.g. 0000/1111.
    #[arg(long)]
    phi: Option<String>,
    /// Base label of the element fiducial.
    #[arg(long)]
    base: Option<String>,
    /// Comma-separated excitation levels of the element fiducial.
    #[arg(long)]
    omega: Option<String>,
    /// Grid points per axis.
    #[arg(long)]
    resolution: Option<String>,
    /// Rays used for threshold curves.
    #[arg(long)]
    rays: Option<String>,
    /// Bisection tolerance.
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Output directory for sweep files.
    #[arg(long)]
    out: Option<String>,
    /// eval: csv or text; sweep: csv, svg or all.
    #[arg(long)]
    format: Option<String>,
    /// Worker threads for sweeps.
    #[arg(long)]
    workers: Option<String>,
    /// Comma-separated suites: oracle, soundness, special, observables, all.
    #[arg(long)]
    suite: Option<String>,
    /// Random states per suite (and per (N, k) for soundness).
    #[arg(long)]
    samples: Option<String>,
    /// Site count override for the verification suites.
    #[arg(long)]
    n: Option<String>,
}

impl Options {
    fn settings(&self) -> Result<Settings, CliError> {
        let mut s = match &self.config {
            Some(path) => config::read_document(path)?,
            None => Settings::new(),
        };
        let flags = [
            ("family", &self.family),
            ("state-file", &self.state_file),
            ("criterion", &self.criterion),
            ("k", &self.k),
            ("p", &self.p),
            ("q", &self.q),
            ("phi", &self.phi),
            ("base", &self.base),
            ("omega", &self.omega),
            ("resolution", &self.resolution),
            ("rays", &self.rays),
            ("tol", &self.tol),
            ("seed", &self.seed),
            ("out", &self.out),
            ("format", &self.format),
            ("workers", &self.workers),
            ("suite", &self.suite),
            ("samples", &self.samples),
            ("n", &self.n),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                s.insert(key.to_string(), v.clone());
            }
        }
        Ok(s)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eval(opts) => {
            let cfg = RunConfig::from_settings(&opts.settings()?)?;
            let format = match cfg.format {
                None | Some(Format::Csv) => Format::Csv,
                Some(Format::Text) => Format::Text,
                Some(_) => return Err(CliError::Validation("eval prints csv or text".into())),
            };
            let out = commands::eval(&cfg)?;
            for w in out.warnings() {
                eprintln!("warning: {w}");
            }
            print!("{}", out.render(format));
        }
        Command::Sweep(opts) => {
            let cfg = RunConfig::from_settings(&opts.settings()?)?;
            for line in commands::sweep(&cfg)? {
                println!("wrote {line}");
            }
        }
        Command::Verify(opts) => {
            let cfg = RunConfig::from_settings(&opts.settings()?)?;
            let reports = verify::run(&cfg)?;
            let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.suite.name()).collect();
            for r in &reports {
                println!("{}", r.line());
            }
            println!("verify: {} suites, {} failed (seed {})", reports.len(), failed.len(), cfg.seed);
            if !failed.is_empty() {
                return Err(CliError::SuiteFailure(failed.join(", ")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
