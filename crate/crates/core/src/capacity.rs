//! Ergodic capacity of the two-hop link.
//!
//! `C = (C1 + C2 - C12) / 2` in bits/s/Hz, where `C_l = E[log2(1 + gamma_l)]`
//! and `C12 = E[log2(1 + gamma_1 + gamma_2)]`; the factor `1/2` accounts for
//! the two transmission phases. All components are stored before halving.
//!
//! * `C_l` has a closed Meijer-G form (`G^{4,3}_{4,4}` when the hop is
//!   interference-limited, `G^{4,1}_{2,4}` when it is `P_max`-limited).
//! * `C12` is written through the hop MGFs as
//!   `(1/ln 2) int_0^inf Ei(-s) [M1(s) M2'(s) + M2(s) M1'(s)] ds` and evaluated
//!   with the Gauss–Chebyshev rule of [`gc_nodes_weights`] (the default), or
//!   optionally by adaptive integration ([`CrossTermRule::Adaptive`]).
//!
//! The Gauss–Chebyshev sum converges only algebraically in `N`: the
//! `Ei(-s) ~ ln s` endpoint singularity and the `1/E[gamma]` scale of the MGFs
//! leave an error of order `N^-2`, which at `N = 60` reaches tenths of a bit
//! for hops with large mean SNR. The adaptive rule resolves those scales and
//! is accurate to about `1e-9` relative.

use std::f64::consts::LN_2;

use rayon::prelude::*;

use crate::channel::{
    snr_mgf, snr_mgf_derivative, snr_mgf_derivative_pmax, snr_mgf_pmax, GKLink, HopChannels, Regime, SystemParams,
};
use crate::error::{check, Error, Result};
use crate::integrate::{integrate_log_axis, Tolerance};
use crate::specfun::{exp_integral_ei, gc_nodes_weights, ln_gamma, meijer_g, EvalOptions, MeijerGSpec};

/// Default Gauss–Chebyshev order.
pub const DEFAULT_QUADRATURE_ORDER: usize = 60;
/// Default order whose result serves as the converged reference in
/// [`convergence_study`].
pub const DEFAULT_REFERENCE_ORDER: usize = 200;
/// Agreement required by [`convergence_study`] ("fourth decimal").
pub const CONVERGENCE_TOLERANCE: f64 = 1e-4;

/// Relative tolerance of [`CrossTermRule::Adaptive`].
pub const ADAPTIVE_TOLERANCE: f64 = 1e-10;
/// `ln s` range covered by [`CrossTermRule::Adaptive`]; `Ei(-s)` is below
/// `1e-170` past the upper end, and the lower end cuts off `O(60 e^-60)`.
const ADAPTIVE_LN_RANGE: (f64, f64) = (-60.0, 6.0);

/// How the cross term is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CrossTermRule {
    /// `N`-point Gauss–Chebyshev sum with `N = quadrature_order`.
    #[default]
    GaussChebyshev,
    /// Adaptive Gauss–Kronrod integration on a logarithmic axis.
    Adaptive,
}

/// Per-hop regime selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RegimeMode {
    /// `P_max`-limited iff the interference link is longer than
    /// [`pmax_distance_threshold`].
    #[default]
    Auto,
    InterferenceLimited,
    PmaxLimited,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub hop1: HopChannels,
    pub hop2: HopChannels,
    pub sys: SystemParams,
    pub quadrature_order: usize,
    pub regime: [RegimeMode; 2],
    pub cross_term: CrossTermRule,
}

impl Scenario {
    /// Scenario with the default quadrature order and automatic regimes.
    pub fn new(hop1: HopChannels, hop2: HopChannels, sys: SystemParams) -> Self {
        Self {
            hop1,
            hop2,
            sys,
            quadrature_order: DEFAULT_QUADRATURE_ORDER,
            regime: [RegimeMode::Auto; 2],
            cross_term: CrossTermRule::GaussChebyshev,
        }
    }

    pub fn with_quadrature_order(mut self, n: usize) -> Self {
        self.quadrature_order = n;
        self
    }

    pub fn with_regime(mut self, mode: RegimeMode) -> Self {
        self.regime = [mode; 2];
        self
    }

    pub fn with_cross_term(mut self, rule: CrossTermRule) -> Self {
        self.cross_term = rule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check(
            self.quadrature_order >= 1,
            "quadrature_order",
            self.quadrature_order as f64,
            "must be at least 1",
        )
    }

    /// Regime actually used by each hop.
    pub fn resolved_regimes(&self) -> [Regime; 2] {
        let resolve = |hop: &HopChannels, mode: RegimeMode| match mode {
            RegimeMode::InterferenceLimited => Regime::InterferenceLimited,
            RegimeMode::PmaxLimited => Regime::PmaxLimited,
            RegimeMode::Auto => {
                let j = &hop.interference;
                if j.d() > pmax_distance_threshold(&self.sys, j.alpha()) {
                    Regime::PmaxLimited
                } else {
                    Regime::InterferenceLimited
                }
            }
        };
        [resolve(&self.hop1, self.regime[0]), resolve(&self.hop2, self.regime[1])]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityResult {
    /// `(c1 + c2 - c12) / 2`, bits/s/Hz.
    pub total: f64,
    /// `E[log2(1 + gamma_1)]`.
    pub c1: f64,
    /// `E[log2(1 + gamma_2)]`.
    pub c2: f64,
    /// `E[log2(1 + gamma_1 + gamma_2)]`.
    pub c12: f64,
    /// Quadrature order used for `c12`; for [`CrossTermRule::Adaptive`], the
    /// number of integrand evaluations.
    pub n_used: usize,
    pub regimes: [Regime; 2],
}

/// Distance beyond which a node's power is capped by `P_max` rather than by
/// the interference constraint: `(P_max / w)^(1/alpha)` km.
pub fn pmax_distance_threshold(sys: &SystemParams, alpha: f64) -> f64 {
    (sys.pmax_over_n0() / sys.w_over_n0()).powf(1.0 / alpha)
}

/// `E[log2(1 + gamma)]` of an interference-limited hop:
/// `c^Delta / (N ln 2) G^{4,3}_{4,4}(c | 1-Delta-k_j, 1-Delta-m_j, -Delta, 1-Delta; Theta, -Theta, -Delta, -Delta)`
/// with `c = k_i m_i Omega_j / (k_j m_j Omega_i (w/N0))` and
/// `N = Gamma(k_i) Gamma(m_i) Gamma(k_j) Gamma(m_j)`.
pub fn capacity_single_hop(hop: &HopChannels, sys: &SystemParams) -> Result<f64> {
    let (i, j) = (&hop.data, &hop.interference);
    let (delta, theta) = (i.delta(), i.theta());
    let c = i.k() * i.m() * j.omega() / (j.k() * j.m() * i.omega() * sys.w_over_n0());
    let spec = MeijerGSpec::new(
        4,
        3,
        vec![1.0 - delta - j.k(), 1.0 - delta - j.m(), -delta, 1.0 - delta],
        vec![theta, -theta, -delta, -delta],
    )?;
    let g = meijer_g(&spec, c, &EvalOptions::default())?;
    let ln_norm = ln_gamma(i.k()) + ln_gamma(i.m()) + ln_gamma(j.k()) + ln_gamma(j.m());
    Ok((delta * c.ln() - ln_norm).exp() * g / LN_2)
}

/// `E[log2(1 + (P_max/N0)|h|^2)]`:
/// `b^Delta / (Gamma(k) Gamma(m) ln 2) G^{4,1}_{2,4}(b | -Delta, 1-Delta; Theta, -Theta, -Delta, -Delta)`
/// with `b = k m / (Omega P_max/N0)`.
pub fn capacity_single_hop_pmax(link: &GKLink, sys: &SystemParams) -> Result<f64> {
    let (delta, theta) = (link.delta(), link.theta());
    let b = link.k() * link.m() / (link.omega() * sys.pmax_over_n0());
    let spec = MeijerGSpec::new(4, 1, vec![-delta, 1.0 - delta], vec![theta, -theta, -delta, -delta])?;
    let g = meijer_g(&spec, b, &EvalOptions::default())?;
    Ok((delta * b.ln() - ln_gamma(link.k()) - ln_gamma(link.m())).exp() * g / LN_2)
}

fn hop_capacity(hop: &HopChannels, sys: &SystemParams, regime: Regime) -> Result<f64> {
    match regime {
        Regime::InterferenceLimited => capacity_single_hop(hop, sys),
        Regime::PmaxLimited => capacity_single_hop_pmax(&hop.data, sys),
    }
}

/// MGF of one hop's SNR in a fixed regime.
#[derive(Debug, Clone, Copy)]
struct HopTransform<'a> {
    hop: &'a HopChannels,
    sys: &'a SystemParams,
    regime: Regime,
}

impl HopTransform<'_> {
    /// `(M(s), M'(s))`.
    fn eval(&self, s: f64) -> Result<(f64, f64)> {
        match self.regime {
            Regime::InterferenceLimited => Ok((
                snr_mgf(self.hop, self.sys, s)?,
                snr_mgf_derivative(self.hop, self.sys, s)?,
            )),
            Regime::PmaxLimited => Ok((
                snr_mgf_pmax(&self.hop.data, self.sys, s)?,
                snr_mgf_derivative_pmax(&self.hop.data, self.sys, s)?,
            )),
        }
    }
}

/// Integrand of the cross term without the `Ei` weight:
/// `M1(s) M2'(s) + M2(s) M1'(s)`. Identical hops are evaluated once.
struct CrossIntegrand<'a> {
    hops: [HopTransform<'a>; 2],
    identical: bool,
}

impl<'a> CrossIntegrand<'a> {
    fn new(hop1: &'a HopChannels, hop2: &'a HopChannels, sys: &'a SystemParams, regimes: [Regime; 2]) -> Self {
        Self {
            hops: [
                HopTransform {
                    hop: hop1,
                    sys,
                    regime: regimes[0],
                },
                HopTransform {
                    hop: hop2,
                    sys,
                    regime: regimes[1],
                },
            ],
            identical: hop1 == hop2 && regimes[0] == regimes[1],
        }
    }

    fn eval(&self, s: f64) -> Result<f64> {
        let (m1, d1) = self.hops[0].eval(s)?;
        let (m2, d2) = if self.identical {
            (m1, d1)
        } else {
            self.hops[1].eval(s)?
        };
        Ok(m1 * d2 + m2 * d1)
    }

    /// `Ei(-s) (M1 M2' + M2 M1') / ln 2`, the integrand of `C12` in bits.
    fn weighted(&self, s: f64) -> Result<f64> {
        Ok(exp_integral_ei(-s)? * self.eval(s)? / LN_2)
    }
}

/// `E[log2(1 + gamma_1 + gamma_2)]` by the `N`-point Gauss–Chebyshev rule,
/// both hops interference-limited.
pub fn capacity_cross_term(hop1: &HopChannels, hop2: &HopChannels, sys: &SystemParams, n: usize) -> Result<f64> {
    cross_term_in_regimes(hop1, hop2, sys, [Regime::InterferenceLimited; 2], n)
}

/// As [`capacity_cross_term`] with explicit per-hop regimes; the hop MGFs
/// are composed regardless of how the regimes are mixed.
pub fn cross_term_in_regimes(
    hop1: &HopChannels,
    hop2: &HopChannels,
    sys: &SystemParams,
    regimes: [Regime; 2],
    n: usize,
) -> Result<f64> {
    check(n >= 1, "quadrature_order", n as f64, "must be at least 1")?;
    let integrand = CrossIntegrand::new(hop1, hop2, sys, regimes);
    let rule = gc_nodes_weights(n);
    rule.iter().map(|(s, psi)| Ok(psi * integrand.weighted(s)?)).sum()
}

/// `E[log2(1 + gamma_1 + gamma_2)]` by adaptive integration; returns the
/// value and the number of integrand evaluations.
pub fn cross_term_adaptive(
    hop1: &HopChannels,
    hop2: &HopChannels,
    sys: &SystemParams,
    regimes: [Regime; 2],
) -> Result<(f64, usize)> {
    let integrand = CrossIntegrand::new(hop1, hop2, sys, regimes);
    let mut failure = None;
    let tol = Tolerance {
        abs: 0.0,
        rel: ADAPTIVE_TOLERANCE,
        max_subdivisions: 5000,
    };
    let (lo, hi) = ADAPTIVE_LN_RANGE;
    let result = integrate_log_axis(
        |s| match integrand.weighted(s) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    match result {
        Ok(r) => Ok((r.value, r.evaluations)),
        Err(_) => Err(Error::NotConverged {
            operation: "adaptive cross term",
            limit: tol.max_subdivisions,
        }),
    }
}

/// The cross-term integrand `Ei(-s) [M1 M2' + M2 M1'] / ln 2` as a plain
/// function of `s`, for use with other quadrature rules.
pub fn cross_term_integrand(scn: &Scenario, s: f64) -> Result<f64> {
    let regimes = scn.resolved_regimes();
    CrossIntegrand::new(&scn.hop1, &scn.hop2, &scn.sys, regimes).weighted(s)
}

/// Full capacity evaluation of a scenario.
pub fn ergodic_capacity(scn: &Scenario) -> Result<CapacityResult> {
    scn.validate()?;
    let regimes = scn.resolved_regimes();
    let c1 = hop_capacity(&scn.hop1, &scn.sys, regimes[0])?;
    let c2 = if scn.hop1 == scn.hop2 && regimes[0] == regimes[1] {
        c1
    } else {
        hop_capacity(&scn.hop2, &scn.sys, regimes[1])?
    };
    let (c12, n_used) = match scn.cross_term {
        CrossTermRule::GaussChebyshev => (
            cross_term_in_regimes(&scn.hop1, &scn.hop2, &scn.sys, regimes, scn.quadrature_order)?,
            scn.quadrature_order,
        ),
        CrossTermRule::Adaptive => cross_term_adaptive(&scn.hop1, &scn.hop2, &scn.sys, regimes)?,
    };
    Ok(CapacityResult {
        total: 0.5 * (c1 + c2 - c12),
        c1,
        c2,
        c12,
        n_used,
        regimes,
    })
}

/// Evaluates many scenarios concurrently; results keep the input order.
pub fn ergodic_capacity_batch(scenarios: &[Scenario]) -> Vec<Result<CapacityResult>> {
    scenarios.par_iter().map(ergodic_capacity).collect()
}

/// Smallest quadrature order `N` whose capacity agrees with the order
/// `max_n` result to within [`CONVERGENCE_TOLERANCE`]. `max_n` defaults to
/// [`DEFAULT_REFERENCE_ORDER`] and stands in for the exact value.
pub fn convergence_study(scn: &Scenario, max_n: usize) -> Result<usize> {
    check(max_n >= 1, "max_n", max_n as f64, "must be at least 1")?;
    let regimes = scn.resolved_regimes();
    let (hop1, hop2, sys) = (&scn.hop1, &scn.hop2, &scn.sys);
    // C1 and C2 do not depend on N, so only the cross term is compared.
    let reference = cross_term_in_regimes(hop1, hop2, sys, regimes, max_n)?;
    let integrand = CrossIntegrand::new(hop1, hop2, sys, regimes);
    for n in 1..max_n {
        let c12: f64 = gc_nodes_weights(n)
            .iter()
            .map(|(s, psi)| Ok(psi * integrand.weighted(s)?))
            .sum::<Result<f64>>()?;
        if (0.5 * (c12 - reference)).abs() < CONVERGENCE_TOLERANCE {
            return Ok(n);
        }
    }
    // only the reference itself agrees with the reference
    Err(Error::NotConverged {
        operation: "convergence_study",
        limit: max_n,
    })
}
