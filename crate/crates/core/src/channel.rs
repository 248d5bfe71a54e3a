//! Generalized-K link model and the statistics of the per-hop SNRs.
//!
//! A link power `|h|^2 = Y Z` is the product of a shadowing term
//! `Y ~ Gamma(k, mean Omega)` and a multipath term `Z ~ Gamma(m, mean 1)`,
//! with `Omega = d^(-alpha)`. In the interference-limited regime the
//! per-hop SNR is `gamma = (w/N0) |h_i|^2 / |h_j|^2`, where `i` is the data
//! link and `j` the link towards the primary receiver; in the `P_max`-limited
//! regime it is `gamma = (P_max/N0) |h_i|^2`.
//!
//! All densities and transforms are evaluated through closed Meijer-G and
//! Whittaker-W forms; `Delta = (k_i + m_i)/2` and `Theta = (k_i - m_i)/2` refer
//! to the data link.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{check, Result};
use crate::specfun::{bessel_k, ln_gamma, ln_whittaker_w, meijer_g, EvalOptions, MeijerGSpec};

/// One generalized-K link. Fields are validated on construction; the mean
/// power `Omega = d^(-alpha)` is always derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GKLink {
    k: f64,
    m: f64,
    d: f64,
    alpha: f64,
}

impl GKLink {
    /// `k` shadowing shape (> 0), `m` multipath shape (>= 0.5), `d` distance
    /// in km (> 0), `alpha` path-loss exponent in `[2, 6]`.
    pub fn new(k: f64, m: f64, d: f64, alpha: f64) -> Result<Self> {
        check(k.is_finite() && k > 0.0, "k", k, "shadowing shape must be positive")?;
        check(
            m.is_finite() && m >= 0.5,
            "m",
            m,
            "multipath shape must be at least 0.5",
        )?;
        check(d.is_finite() && d > 0.0, "d", d, "distance must be positive")?;
        check(
            (2.0..=6.0).contains(&alpha),
            "alpha",
            alpha,
            "path-loss exponent must lie in [2, 6]",
        )?;
        Ok(Self { k, m, d, alpha })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Mean power `d^(-alpha)`.
    pub fn omega(&self) -> f64 {
        self.d.powf(-self.alpha)
    }

    /// `(k + m) / 2`.
    pub fn delta(&self) -> f64 {
        0.5 * (self.k + self.m)
    }

    /// `(k - m) / 2`.
    pub fn theta(&self) -> f64 {
        0.5 * (self.k - self.m)
    }

    /// Returns a copy at a different distance.
    pub fn with_distance(&self, d: f64) -> Result<Self> {
        Self::new(self.k, self.m, d, self.alpha)
    }

    fn ln_norm(&self) -> f64 {
        ln_gamma(self.k) + ln_gamma(self.m)
    }
}

/// The two links of one hop: `data` carries the secondary signal (S→R or
/// R→D), `interference` reaches the primary receiver (S→P or R→P).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopChannels {
    pub data: GKLink,
    pub interference: GKLink,
}

impl HopChannels {
    pub fn new(data: GKLink, interference: GKLink) -> Self {
        Self { data, interference }
    }
}

/// Linear power ratios, both normalised by the noise power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    w_over_n0: f64,
    pmax_over_n0: f64,
}

impl SystemParams {
    pub fn new(w_over_n0: f64, pmax_over_n0: f64) -> Result<Self> {
        check(
            w_over_n0.is_finite() && w_over_n0 > 0.0,
            "w_over_n0",
            w_over_n0,
            "interference temperature ratio must be positive",
        )?;
        check(
            pmax_over_n0.is_finite() && pmax_over_n0 > 0.0,
            "pmax_over_n0",
            pmax_over_n0,
            "maximum power ratio must be positive",
        )?;
        Ok(Self {
            w_over_n0,
            pmax_over_n0,
        })
    }

    pub fn from_db(w_db: f64, pmax_db: f64) -> Result<Self> {
        Self::new(db_to_linear(w_db), db_to_linear(pmax_db))
    }

    pub fn w_over_n0(&self) -> f64 {
        self.w_over_n0
    }

    pub fn pmax_over_n0(&self) -> f64 {
        self.pmax_over_n0
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// How a hop's transmit power is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Power `w / |h_j|^2`, limited by the interference constraint.
    InterferenceLimited,
    /// Power capped at `P_max`; the interference link drops out.
    PmaxLimited,
}

fn check_positive(name: &'static str, x: f64) -> Result<()> {
    check(x.is_finite() && x > 0.0, name, x, "must be positive and finite")
}

/// Density of the link power `|h|^2`:
/// `2 (km/Omega)^Delta x^(Delta-1) K_{2 Theta}(2 sqrt(k m x / Omega)) / (Gamma(k) Gamma(m))`.
pub fn gk_power_pdf(link: &GKLink, x: f64) -> Result<f64> {
    check_positive("x", x)?;
    let scale = link.k * link.m / link.omega();
    let kv = bessel_k(2.0 * link.theta(), 2.0 * (scale * x).sqrt())?;
    if kv == 0.0 {
        return Ok(0.0);
    }
    let delta = link.delta();
    let ln_pref = std::f64::consts::LN_2 + delta * scale.ln() + (delta - 1.0) * x.ln() - link.ln_norm();
    Ok(ln_pref.exp() * kv)
}

/// Argument scale `c` of the interference-limited hop SNR: `c * gamma` has a
/// parameter-free Meijer-G law.
fn ratio_scale(hop: &HopChannels, sys: &SystemParams) -> f64 {
    let (i, j) = (&hop.data, &hop.interference);
    i.k * i.m * j.omega() / (j.k * j.m * i.omega() * sys.w_over_n0)
}

fn ratio_ln_norm(hop: &HopChannels) -> f64 {
    hop.data.ln_norm() + hop.interference.ln_norm()
}

/// Density of the interference-limited hop SNR `gamma = (w/N0)|h_i|^2/|h_j|^2`:
/// `c^Delta x^(Delta-1) G^{2,2}_{2,2}(c x | 1-Delta-k_j, 1-Delta-m_j; Theta, -Theta) / N`
/// with `N = Gamma(k_i) Gamma(m_i) Gamma(k_j) Gamma(m_j)`.
pub fn snr_ratio_pdf(hop: &HopChannels, sys: &SystemParams, x: f64) -> Result<f64> {
    check_positive("x", x)?;
    let (delta, theta) = (hop.data.delta(), hop.data.theta());
    let (kj, mj) = (hop.interference.k, hop.interference.m);
    let c = ratio_scale(hop, sys);
    let spec = MeijerGSpec::new(2, 2, vec![1.0 - delta - kj, 1.0 - delta - mj], vec![theta, -theta])?;
    let g = meijer_g(&spec, c * x, &EvalOptions::default())?;
    Ok((delta * (c * x).ln() - x.ln() - ratio_ln_norm(hop)).exp() * g)
}

/// MGF `E[exp(-s gamma)]` of the interference-limited hop SNR:
/// `(c/s)^Delta G^{2,3}_{3,2}(c/s | 1-Delta, 1-Delta-k_j, 1-Delta-m_j; Theta, -Theta) / N`.
pub fn snr_mgf(hop: &HopChannels, sys: &SystemParams, s: f64) -> Result<f64> {
    check_positive("s", s)?;
    ratio_mgf_term(hop, sys, s, 1.0)
}

/// `d/ds` of [`snr_mgf`]:
/// `-c^Delta s^(-Delta-1) G^{2,3}_{3,2}(c/s | -Delta, 1-Delta-k_j, 1-Delta-m_j; Theta, -Theta) / N`.
pub fn snr_mgf_derivative(hop: &HopChannels, sys: &SystemParams, s: f64) -> Result<f64> {
    check_positive("s", s)?;
    ratio_mgf_term(hop, sys, s, 0.0)
}

/// Shared G^{2,3}_{3,2} evaluation; `first` is the offset of the leading upper
/// parameter (1 for the MGF, 0 for its derivative).
fn ratio_mgf_term(hop: &HopChannels, sys: &SystemParams, s: f64, first: f64) -> Result<f64> {
    let (delta, theta) = (hop.data.delta(), hop.data.theta());
    let (kj, mj) = (hop.interference.k, hop.interference.m);
    let z = ratio_scale(hop, sys) / s;
    let spec = MeijerGSpec::new(
        2,
        3,
        vec![first - delta, 1.0 - delta - kj, 1.0 - delta - mj],
        vec![theta, -theta],
    )?;
    let g = meijer_g(&spec, z, &EvalOptions::default())?;
    let ln_norm = ratio_ln_norm(hop);
    if first == 1.0 {
        Ok((delta * z.ln() - ln_norm).exp() * g)
    } else {
        Ok(-(delta * z.ln() - s.ln() - ln_norm).exp() * g)
    }
}

/// Argument scale `b = k m N0 / (Omega P_max)` of the `P_max`-limited SNR.
fn pmax_scale(link: &GKLink, sys: &SystemParams) -> f64 {
    link.k * link.m / (link.omega() * sys.pmax_over_n0)
}

/// MGF of the `P_max`-limited hop SNR `gamma = (P_max/N0)|h_i|^2`:
/// `(b/s)^(Delta-1/2) e^(b/(2s)) W_{1/2-Delta, Theta}(b/s)`.
pub fn snr_mgf_pmax(link: &GKLink, sys: &SystemParams, s: f64) -> Result<f64> {
    check_positive("s", s)?;
    let x = pmax_scale(link, sys) / s;
    let delta = link.delta();
    let (ln_w, sign) = ln_whittaker_w(0.5 - delta, link.theta(), x)?;
    Ok(sign * ((delta - 0.5) * x.ln() + 0.5 * x + ln_w).exp())
}

/// `d/ds` of [`snr_mgf_pmax`]:
/// `-k m b^(Delta-1/2) s^(-Delta-1/2) e^(b/(2s)) W_{-Delta-1/2, Theta}(b/s)`.
pub fn snr_mgf_derivative_pmax(link: &GKLink, sys: &SystemParams, s: f64) -> Result<f64> {
    check_positive("s", s)?;
    let b = pmax_scale(link, sys);
    let x = b / s;
    let delta = link.delta();
    let (ln_w, sign) = ln_whittaker_w(-0.5 - delta, link.theta(), x)?;
    let ln_mag = (link.k * link.m).ln() + (delta - 0.5) * b.ln() - (delta + 0.5) * s.ln() + 0.5 * x + ln_w;
    Ok(-sign * ln_mag.exp())
}

/// Seeded random stream. Independent lanes are derived with [`split`],
/// so results never depend on how work is scheduled.
///
/// [`split`]: RandomStream::split
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream number `lane` of the same master seed.
    pub fn split(&self, lane: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(lane.wrapping_add(1));
        Self { seed: self.seed, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Pre-built sampler of `|h|^2 = Y Z` for one link.
#[derive(Debug, Clone, Copy)]
pub struct GKSampler {
    shadowing: Gamma<f64>,
    multipath: Gamma<f64>,
}

impl GKSampler {
    pub fn new(link: &GKLink) -> Self {
        // shapes and scales are validated by GKLink, so construction cannot fail
        Self {
            shadowing: Gamma::new(link.k, link.omega() / link.k).expect("valid gamma shape"),
            multipath: Gamma::new(link.m, 1.0 / link.m).expect("valid gamma shape"),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.shadowing.sample(rng) * self.multipath.sample(rng)
    }
}

/// One draw of the link power `|h|^2`.
pub fn sample_gk_power(link: &GKLink, rng: &mut RandomStream) -> f64 {
    GKSampler::new(link).sample(rng)
}

/// Per-hop SNRs of one channel realisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrDraw {
    pub gamma1: f64,
    pub gamma2: f64,
}

impl SnrDraw {
    /// End-to-end SNR of variable-gain amplify-and-forward relaying.
    pub fn e2e(&self) -> f64 {
        e2e_snr(self.gamma1, self.gamma2)
    }
}

/// `g1 g2 / (g1 + g2 + 1)`.
pub fn e2e_snr(gamma1: f64, gamma2: f64) -> f64 {
    gamma1 * gamma2 / (gamma1 + gamma2 + 1.0)
}

/// Sampler of both hop SNRs with fixed per-hop regimes. All four link powers
/// are drawn on every call so the stream layout does not depend on the regime.
#[derive(Debug, Clone, Copy)]
pub struct E2eSampler {
    links: [GKSampler; 4],
    regimes: [Regime; 2],
    sys: SystemParams,
}

impl E2eSampler {
    pub fn new(hop1: &HopChannels, hop2: &HopChannels, sys: &SystemParams, regimes: [Regime; 2]) -> Self {
        Self {
            links: [
                GKSampler::new(&hop1.data),
                GKSampler::new(&hop1.interference),
                GKSampler::new(&hop2.data),
                GKSampler::new(&hop2.interference),
            ],
            regimes,
            sys: *sys,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SnrDraw {
        let h: [f64; 4] = std::array::from_fn(|i| self.links[i].sample(rng));
        let hop = |data: f64, interference: f64, regime: Regime| match regime {
            Regime::InterferenceLimited => self.sys.w_over_n0 * data / interference,
            Regime::PmaxLimited => self.sys.pmax_over_n0 * data,
        };
        SnrDraw {
            gamma1: hop(h[0], h[1], self.regimes[0]),
            gamma2: hop(h[2], h[3], self.regimes[1]),
        }
    }
}

/// One draw of the end-to-end SNR.
pub fn sample_e2e_snr(
    hop1: &HopChannels,
    hop2: &HopChannels,
    sys: &SystemParams,
    regimes: [Regime; 2],
    rng: &mut RandomStream,
) -> f64 {
    E2eSampler::new(hop1, hop2, sys, regimes).sample(rng).e2e()
}
