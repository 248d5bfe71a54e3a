//! Special functions needed by the capacity formulas.

mod bessel;
mod confluent;
mod expint;
mod gamma;
mod meijer;
mod quadrature;
mod whittaker;

use thiserror::Error;

pub use bessel::bessel_k;
pub use expint::{exp_integral_e1, exp_integral_ei};
pub use gamma::{gamma, ln_gamma, ln_gamma_sign, log_gamma_complex, rgamma, EULER_GAMMA};
pub use meijer::{meijer_g, CoincidentPoles, EvalOptions, MeijerGSpec, Strategy, REQUIRED_CLASSES};
pub use quadrature::{gc_nodes_weights, GCQuadrature};
pub use whittaker::{ln_whittaker_w, whittaker_w};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("gamma function pole at {0}")]
    GammaPole(f64),
    #[error("{function}: argument {value} outside the domain")]
    Domain { function: &'static str, value: f64 },
    #[error("{operation} did not converge after {terms} terms")]
    NonConvergence { operation: &'static str, terms: usize },
    #[error("unsupported Meijer-G class {class:?}: {reason}")]
    UnsupportedClass {
        class: (usize, usize, usize, usize),
        reason: &'static str,
    },
    #[error("{operation} is ill-conditioned (cancellation ratio {cancellation:e})")]
    IllConditioned { operation: &'static str, cancellation: f64 },
    #[error("residue expansion unavailable: {0}")]
    ResidueUnavailable(&'static str),
    #[error("invalid evaluation option: {0}")]
    InvalidOption(&'static str),
}
