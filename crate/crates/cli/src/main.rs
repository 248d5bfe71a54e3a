use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gkrelay::montecarlo::{DEFAULT_SAMPLES, MIN_SAMPLES};
use gkrelay_cli::scenario::{CrossTermSetting, RegimeSetting};
use gkrelay_cli::{run_capacity, run_sweep, run_table1, write_csv, CliError, McOptions, ScenarioFile};
use gkrelay_validation::{run_all, SuiteConfig};

/// Ergodic capacity of underlay cognitive dual-hop AF relaying over
/// generalized-K fading.
#[derive(Parser)]
#[command(name = "gkrelay", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity of the scenario at its own parameters (one CSV row).
    Capacity(RunArgs),
    /// Capacity along the scenario's sweep axis (one CSV row per point).
    Sweep(RunArgs),
    /// Convergence counts of the cross-term quadrature on the reference grid.
    Table1 {
        /// Output file (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the full oracle suite and prints one line per criterion.
    Validate {
        /// Monte Carlo draws per estimate
        #[arg(long)]
        samples: Option<usize>,
        /// Master seed
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (JSON)
    #[arg(long)]
    scenario: PathBuf,
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add Monte Carlo estimates of the capacity
    #[arg(long)]
    with_mc: bool,
    /// Monte Carlo draws per point
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Monte Carlo seed
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Override the Gauss-Chebyshev order of the scenario
    #[arg(long)]
    quadrature_n: Option<usize>,
    /// Override the regime selection of the scenario
    #[arg(long, value_enum)]
    regime: Option<RegimeSetting>,
    /// Override the cross-term integration rule of the scenario
    #[arg(long, value_enum)]
    cross_term: Option<CrossTermSetting>,
    /// Print the effective scenario (after overrides) as JSON and exit
    #[arg(long)]
    dump_config: bool,
}

impl RunArgs {
    fn scenario(&self) -> Result<ScenarioFile, CliError> {
        let mut file = ScenarioFile::read(&self.scenario)?;
        if let Some(n) = self.quadrature_n {
            file.quadrature_order = n;
        }
        if let Some(r) = self.regime {
            file.regime = r;
        }
        if let Some(c) = self.cross_term {
            file.cross_term = c;
        }
        Ok(file)
    }

    fn mc(&self) -> Option<McOptions> {
        self.with_mc.then_some(McOptions {
            samples: self.samples,
            seed: self.seed,
        })
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Io(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Capacity(args) | Command::Sweep(args) if args.dump_config => {
            output(&args.out)?.write_all(args.scenario()?.to_json().as_bytes())?;
        }
        Command::Capacity(args) => {
            let row = run_capacity(&args.scenario()?, args.mc())?;
            write_csv(output(&args.out)?, &[row])?;
        }
        Command::Sweep(args) => {
            let rows = run_sweep(&args.scenario()?, args.mc())?;
            write_csv(output(&args.out)?, &rows)?;
        }
        Command::Table1 { out } => run_table1(output(&out)?)?,
        Command::Validate { samples, seed } => {
            let mut cfg = SuiteConfig::default();
            if let Some(n) = samples {
                if n < MIN_SAMPLES {
                    return Err(CliError::Input(format!(
                        "samples must be at least {MIN_SAMPLES}, got {n}"
                    )));
                }
                cfg.mc_samples = n;
                cfg.histogram_samples = n;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let reports = run_all(&cfg, |r| print!("{r}"));
            println!();
            for r in &reports {
                println!("{}", r.headline());
            }
            if reports.iter().any(|r| !r.passed) {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("gkrelay: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
