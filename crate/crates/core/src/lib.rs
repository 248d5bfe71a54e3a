//! Ergodic capacity of underlay cognitive dual-hop amplify-and-forward relay
//! links over generalized-K fading.
//!
//! * [`specfun`] — special functions (Meijer-G, Whittaker-W, Bessel-K, ...).
//! * [`channel`] — link model, per-hop SNR distributions and samplers.
//! * [`capacity`] — closed-form and quadrature capacity evaluation.
//! * [`montecarlo`] — simulation estimates used to cross-check the formulas.

pub mod capacity;
pub mod channel;
mod error;
pub mod integrate;
pub mod montecarlo;
pub mod specfun;

pub use error::{Error, Result};
