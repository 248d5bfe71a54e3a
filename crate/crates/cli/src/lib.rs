//! Library behind the `gkrelay` binary: scenario files, sweep evaluation and
//! CSV output. Exit codes: 0 success, 1 failed validation or I/O error,
//! 2 invalid input, 3 numerical non-convergence.

pub mod scenario;

use std::io::Write;

use gkrelay::capacity::{ergodic_capacity, CapacityResult};
use gkrelay::channel::Regime;
use gkrelay::montecarlo::{estimate_capacity, MCConfig, MCEstimate};
use gkrelay_validation::table::{self, Count};
use rayon::prelude::*;

pub use scenario::ScenarioFile;

#[derive(Debug)]
pub enum CliError {
    /// Malformed or out-of-range input; the message names the key.
    Input(String),
    /// A numerical procedure failed; the message names the operation.
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<gkrelay::Error> for CliError {
    fn from(e: gkrelay::Error) -> Self {
        match e {
            gkrelay::Error::InvalidParameter { .. } => CliError::Input(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Monte Carlo settings of a run; every point reuses the same seed so that
/// neighbouring points of a curve share their random numbers.
#[derive(Debug, Clone, Copy)]
pub struct McOptions {
    pub samples: usize,
    pub seed: u64,
}

/// One evaluated point of a curve.
#[derive(Debug, Clone, Copy)]
pub struct Row {
    pub sweep_value: Option<f64>,
    pub result: CapacityResult,
    pub mc: Option<MCEstimate>,
}

pub const CSV_HEADER: [&str; 10] = [
    "sweep_value",
    "capacity_total",
    "c1",
    "c2",
    "c12",
    "mc_mean",
    "mc_stderr",
    "n_used",
    "regime_hop1",
    "regime_hop2",
];

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::InterferenceLimited => "interference",
        Regime::PmaxLimited => "pmax",
    }
}

fn evaluate(file: &ScenarioFile, sweep_value: Option<f64>, mc: Option<McOptions>) -> Result<Row, CliError> {
    let scn = file.build()?;
    let result = ergodic_capacity(&scn)?;
    let mc = match mc {
        Some(o) => Some(estimate_capacity(&scn, &MCConfig::new(o.samples, o.seed)?)?),
        None => None,
    };
    Ok(Row {
        sweep_value,
        result,
        mc,
    })
}

/// Evaluates the scenario at its own parameters.
pub fn run_capacity(file: &ScenarioFile, mc: Option<McOptions>) -> Result<Row, CliError> {
    evaluate(file, None, mc)
}

/// Evaluates every point of the scenario's sweep axis, concurrently; rows
/// come back in axis order.
pub fn run_sweep(file: &ScenarioFile, mc: Option<McOptions>) -> Result<Vec<Row>, CliError> {
    let sweep = file
        .sweep
        .ok_or_else(|| CliError::Input("sweep: the scenario has no `sweep` section".into()))?;
    sweep
        .values()
        .into_par_iter()
        .map(|v| evaluate(&file.at(sweep.variable, v), Some(v), mc))
        .collect()
}

/// Writes rows as CSV. Floats use the shortest representation that parses
/// back to the same value, so output is exact and reproducible.
pub fn write_csv<W: Write>(out: W, rows: &[Row]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for row in rows {
        let r = &row.result;
        w.write_record([
            opt(row.sweep_value),
            r.total.to_string(),
            r.c1.to_string(),
            r.c2.to_string(),
            r.c12.to_string(),
            opt(row.mc.map(|m| m.mean)),
            opt(row.mc.map(|m| m.std_error)),
            r.n_used.to_string(),
            regime_name(r.regimes[0]).to_string(),
            regime_name(r.regimes[1]).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Convergence counts of the reference grid as CSV, next to the reference
/// counts. Fails with a numerical error after writing if any cell did not
/// converge.
pub fn run_table1<W: Write>(out: W) -> Result<(), CliError> {
    let counts = table::convergence_counts()?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "d_j_km",
        "w_over_n0_db",
        "n_terms",
        "reference",
        "delta",
        "within_tolerance",
    ])?;
    let mut missing = Vec::new();
    for (r, c, dj, wdb) in table::cells() {
        let reference = table::REFERENCE_COUNTS[r][c];
        let count = counts[r][c];
        let delta = match count {
            Count::Converged(n) => (n as i64 - reference as i64).to_string(),
            Count::NotConverged => {
                missing.push(format!("(d_j = {dj}, w = {wdb} dB)"));
                String::new()
            }
        };
        w.write_record([
            dj.to_string(),
            wdb.to_string(),
            count.to_string(),
            reference.to_string(),
            delta,
            count.within_tolerance(reference).to_string(),
        ])?;
    }
    w.flush()?;
    if missing.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!(
            "convergence_study did not converge for {}",
            missing.join(", ")
        )))
    }
}
