//! Oracle suite for `gkrelay`: eight acceptance criteria, each checking the
//! closed forms against an independent reference (Monte Carlo draws,
//! adaptive quadrature, finite differences or special-function identities).
//!
//! Every criterion returns a [`Report`] with a pass/fail verdict, a one-line
//! summary and indented detail lines for diagnosis.

pub mod table;

mod criteria;
mod oracle;

use std::fmt;
use std::time::Duration;

pub use criteria::{
    closed_form_vs_monte_carlo, component_monte_carlo, convergence_table, density_and_mgf_oracles, distance_threshold,
    kernel_identities, quadrature_fidelity, relay_placement,
};

/// Sample sizes and seed of the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Draws per Monte Carlo capacity estimate.
    pub mc_samples: usize,
    /// Draws per density histogram.
    pub histogram_samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            mc_samples: 10_000_000,
            histogram_samples: 10_000_000,
            seed: 2024,
        }
    }
}

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub summary: String,
    pub details: Vec<String>,
    pub elapsed: Duration,
}

impl Report {
    /// The single pass/fail line.
    pub fn headline(&self) -> String {
        format!(
            "criterion {} [{}] {}: {} ({:.1} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.summary,
            self.elapsed.as_secs_f64()
        )
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.headline())?;
        for line in &self.details {
            writeln!(f, "    {line}")?;
        }
        Ok(())
    }
}

/// Runs all criteria in order, handing each report to `on_report` as soon as
/// it is available.
pub fn run_all(cfg: &SuiteConfig, mut on_report: impl FnMut(&Report)) -> Vec<Report> {
    let runs: [fn(&SuiteConfig) -> Report; 8] = [
        convergence_table,
        distance_threshold,
        closed_form_vs_monte_carlo,
        component_monte_carlo,
        quadrature_fidelity,
        density_and_mgf_oracles,
        kernel_identities,
        relay_placement,
    ];
    runs.iter()
        .map(|run| {
            let report = run(cfg);
            on_report(&report);
            report
        })
        .collect()
}
