//! Meijer G-function `G^{m,n}_{p,q}(z | a; b)` for real parameters and `z > 0`.
//!
//! Two evaluation routes are provided:
//!
//! * the residue expansion (Slater's theorem): a finite sum of generalized
//!   hypergeometric series, one per pole family of the `Γ(b_h - s)` factors.
//!   `p > q` (and `p = q` with `z > 1`) goes through the argument inversion
//!   `G^{m,n}_{p,q}(z | a; b) = G^{n,m}_{q,p}(1/z | 1-b; 1-a)`. When the
//!   convergent series loses too many digits to cancellation and the function
//!   has an algebraic large-argument expansion, the left-pole residue sum is
//!   used as an optimally truncated asymptotic series. Poles that coincide
//!   (lower parameters differing by integers, the logarithmic case) are
//!   summed exactly from Laurent expansions of the gamma factors; optionally
//!   they can instead be split by `±pole_epsilon` and extrapolated.
//! * direct quadrature of the Mellin–Barnes integral along a vertical line,
//!   using the trapezoidal rule (geometric convergence for integrands that are
//!   analytic in a strip) with step halving.

use num_complex::Complex64;

use super::confluent::{cluster_sum, clusters};
use super::gamma::{ln_gamma_c_unchecked, ln_gamma_sign};
use super::SpecFunError;

/// Orders and parameters of a G-function.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    pub m: usize,
    pub n: usize,
    /// Upper parameters, `p = a.len()`. The first `n` enter as `Γ(1 - a_j + s)`.
    pub a: Vec<f64>,
    /// Lower parameters, `q = b.len()`. The first `m` enter as `Γ(b_j - s)`.
    pub b: Vec<f64>,
}

/// `(m, n, p, q)` of the classes used by the capacity formulas.
pub const REQUIRED_CLASSES: [(usize, usize, usize, usize); 5] =
    [(2, 0, 0, 2), (2, 2, 2, 2), (2, 3, 3, 2), (4, 3, 4, 4), (4, 1, 2, 4)];

/// Pole differences closer than this to an integer count as coincident.
const COLLISION_TOL: f64 = 1e-7;
/// Largest cancellation ratio (sum of magnitudes over result) accepted from
/// the residue series.
const RESIDUE_MAX_CANCELLATION: f64 = 1e7;
/// Cancellation ratio below which `Strategy::Auto` accepts the residue series
/// without consulting the contour integral.
const RESIDUE_TRUSTED_CANCELLATION: f64 = 1e3;
/// Largest truncation error, relative to the result, accepted from the
/// asymptotic left-pole sum.
const ASYMPTOTIC_MAX_REL_ERROR: f64 = 1e-11;

impl MeijerGSpec {
    pub fn new(m: usize, n: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self, SpecFunError> {
        let spec = Self { m, n, a, b };
        spec.check_orders()?;
        Ok(spec)
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    pub fn class(&self) -> (usize, usize, usize, usize) {
        (self.m, self.n, self.p(), self.q())
    }

    fn check_orders(&self) -> Result<(), SpecFunError> {
        let (m, n, p, q) = self.class();
        if m > q || n > p || m + n == 0 {
            return Err(SpecFunError::UnsupportedClass {
                class: (m, n, p, q),
                reason: "orders must satisfy m <= q, n <= p and m + n >= 1",
            });
        }
        if self.a.iter().chain(&self.b).any(|x| !x.is_finite()) {
            return Err(SpecFunError::UnsupportedClass {
                class: (m, n, p, q),
                reason: "parameters must be finite",
            });
        }
        Ok(())
    }

    /// Checks that the Mellin–Barnes integral converges absolutely on a
    /// vertical line and that the two pole sequences are separable by one.
    pub fn validate(&self) -> Result<(), SpecFunError> {
        self.check_orders()?;
        let (m, n, p, q) = self.class();
        if 2 * (m + n) <= p + q {
            return Err(SpecFunError::UnsupportedClass {
                class: (m, n, p, q),
                reason: "requires m + n > (p + q) / 2",
            });
        }
        let (lo, hi) = self.pole_gap();
        if lo >= hi {
            return Err(SpecFunError::UnsupportedClass {
                class: (m, n, p, q),
                reason: "left and right pole sequences overlap",
            });
        }
        Ok(())
    }

    /// `(L, R)`: rightmost left pole and leftmost right pole.
    fn pole_gap(&self) -> (f64, f64) {
        let lo = self.a[..self.n]
            .iter()
            .map(|a| a - 1.0)
            .fold(f64::NEG_INFINITY, f64::max);
        let hi = self.b[..self.m].iter().copied().fold(f64::INFINITY, f64::min);
        (lo, hi)
    }

    /// Parameters of `G^{n,m}_{q,p}(1/z | 1-b; 1-a)`.
    pub fn inverted(&self) -> Self {
        Self {
            m: self.n,
            n: self.m,
            a: self.b.iter().map(|b| 1.0 - b).collect(),
            b: self.a.iter().map(|a| 1.0 - a).collect(),
        }
    }

    /// Parameters of `z^alpha G(z | a; b) = G(z | a + alpha; b + alpha)`.
    pub fn shifted(&self, alpha: f64) -> Self {
        Self {
            m: self.m,
            n: self.n,
            a: self.a.iter().map(|a| a + alpha).collect(),
            b: self.b.iter().map(|b| b + alpha).collect(),
        }
    }
}

/// Evaluation route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Residue series first, contour integration when the series is
    /// ill-conditioned or does not converge.
    #[default]
    Auto,
    ResidueSeries,
    ContourIntegration,
}

/// Treatment of coincident poles in the residue series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoincidentPoles {
    /// Exact residues of the higher-order poles.
    #[default]
    Confluent,
    /// Split the colliding parameters by `±pole_epsilon` (and `±2 pole_epsilon`)
    /// and Richardson-extrapolate the averages. Accurate to roughly
    /// `1e-16 / pole_epsilon` relative.
    Perturb,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    /// Parameter split used by [`CoincidentPoles::Perturb`], rounded down to a
    /// power of two.
    pub pole_epsilon: f64,
    /// Relative size below which three consecutive series terms stop a sum.
    pub series_tol: f64,
    pub max_terms: usize,
    pub strategy: Strategy,
    pub coincident_poles: CoincidentPoles,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            pole_epsilon: 1e-5,
            series_tol: 1e-14,
            max_terms: 10_000,
            strategy: Strategy::Auto,
            coincident_poles: CoincidentPoles::Confluent,
        }
    }
}

impl EvalOptions {
    pub fn with_strategy(strategy: Strategy) -> Self {
        Self {
            strategy,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), SpecFunError> {
        if !(self.pole_epsilon > 0.0 && self.pole_epsilon <= 1e-4) {
            return Err(SpecFunError::InvalidOption("pole_epsilon must lie in (0, 1e-4]"));
        }
        if !(self.series_tol > 0.0) {
            return Err(SpecFunError::InvalidOption("series_tol must be positive"));
        }
        if self.max_terms == 0 {
            return Err(SpecFunError::InvalidOption("max_terms must be positive"));
        }
        Ok(())
    }
}

/// Evaluates `G^{m,n}_{p,q}(x | a; b)` for `x > 0`.
pub fn meijer_g(spec: &MeijerGSpec, x: f64, opts: &EvalOptions) -> Result<f64, SpecFunError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecFunError::Domain {
            function: "meijer_g",
            value: x,
        });
    }
    opts.validate()?;
    spec.validate()?;
    match opts.strategy {
        Strategy::ResidueSeries => residue_series(spec, x, opts).map(|r| r.value),
        Strategy::ContourIntegration => contour_integral(spec, x).map(|c| c.value),
        Strategy::Auto => match residue_series(spec, x, opts) {
            Ok(r) if r.cancellation <= RESIDUE_TRUSTED_CANCELLATION => Ok(r.value),
            // moderately cancelling series: keep whichever route lost fewer digits
            Ok(r) => match contour_integral(spec, x) {
                Ok(c) if c.cancellation < r.cancellation => Ok(c.value),
                _ => Ok(r.value),
            },
            Err(SpecFunError::IllConditioned { .. })
            | Err(SpecFunError::NonConvergence { .. })
            | Err(SpecFunError::ResidueUnavailable(_)) => contour_integral(spec, x).map(|c| c.value),
            Err(e) => Err(e),
        },
    }
}

// ---------------------------------------------------------------------------
// Residue series

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum SeriesMode {
    Convergent,
    Asymptotic,
}

#[derive(Debug, Clone, Copy)]
pub(super) struct SeriesSum {
    pub value: f64,
    /// Sum of the magnitudes of all terms.
    pub magnitude: f64,
    /// Truncation error bound of an asymptotic sum.
    pub truncation: f64,
}

pub(super) fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() < COLLISION_TOL
}

/// Lower-parameter differences `b_j - b_h` for `j, h < m`, with pairs that
/// collide (integer difference within [`COLLISION_TOL`]) snapped to an exact
/// integer plus a multiple of `eps`. Using one matrix for every occurrence
/// keeps the `O(1/eps)` parts of the split families exactly cancelling.
struct PoleDiffs {
    d: Vec<Vec<f64>>,
    /// Offset (in units of `eps`) applied to each `b_h`.
    offsets: Vec<f64>,
}

impl PoleDiffs {
    fn new(b: &[f64]) -> Self {
        let m = b.len();
        let mut root: Vec<usize> = (0..m).collect();
        let mut offsets = vec![0.0; m];
        let mut size = vec![0usize; m];
        for j in 0..m {
            for i in 0..j {
                if root[i] == i && near_integer(b[j] - b[i]) {
                    root[j] = i;
                    size[i] += 1;
                    offsets[j] = size[i] as f64;
                    break;
                }
            }
        }
        let d = (0..m).map(|j| (0..m).map(|h| b[j] - b[h]).collect()).collect();
        Self { d, offsets }
    }

    fn has_collisions(&self) -> bool {
        self.offsets.iter().any(|&o| o != 0.0)
    }

    /// Difference matrix with every colliding pair split by `sign * eps`.
    fn split(&self, eps: f64) -> Vec<Vec<f64>> {
        let m = self.offsets.len();
        (0..m)
            .map(|j| {
                (0..m)
                    .map(|h| {
                        let raw = self.d[j][h];
                        if j != h
                            && near_integer(raw)
                            && (self.offsets[j] != 0.0 || self.offsets[h] != 0.0 || raw.round() != raw)
                        {
                            raw.round() + (self.offsets[j] - self.offsets[h]) * eps
                        } else {
                            raw
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Residue sum over the poles of `Γ(b_h - s)`, `h < m`.
fn right_pole_sum(spec: &MeijerGSpec, z: f64, opts: &EvalOptions, mode: SeriesMode) -> Result<SeriesSum, SpecFunError> {
    let m = spec.m;
    let diffs = PoleDiffs::new(&spec.b[..m]);
    if opts.coincident_poles == CoincidentPoles::Confluent {
        let mut total = SeriesSum {
            value: 0.0,
            magnitude: 0.0,
            truncation: 0.0,
        };
        for cluster in clusters(&spec.b[..m]) {
            let part = match cluster.members[..] {
                [(h, _)] => match pole_family_sum(spec, &diffs.d, h, z, opts, mode) {
                    Err(SpecFunError::ResidueUnavailable(_)) => cluster_sum(spec, &cluster, z, opts, mode)?,
                    other => other?,
                },
                _ => cluster_sum(spec, &cluster, z, opts, mode)?,
            };
            total.value += part.value;
            total.magnitude += part.magnitude;
            total.truncation += part.truncation;
        }
        return Ok(total);
    }
    if !diffs.has_collisions() {
        return right_pole_sum_simple(spec, &diffs.d, z, opts, mode);
    }
    // Central differences at eps and 2 eps, combined by one Richardson step
    // so the splitting error is O(eps^4). A power of two keeps
    // `integer +- eps` exact.
    let eps0 = 2f64.powi(opts.pole_epsilon.log2().floor() as i32);
    let mut central = [SeriesSum {
        value: 0.0,
        magnitude: 0.0,
        truncation: 0.0,
    }; 2];
    for (slot, scale) in central.iter_mut().zip([1.0, 2.0]) {
        let mut acc = *slot;
        for sign in [1.0, -1.0] {
            let eps = sign * scale * eps0;
            let mut shifted = spec.clone();
            for (b, o) in shifted.b.iter_mut().zip(&diffs.offsets) {
                *b += o * eps;
            }
            let part = right_pole_sum_simple(&shifted, &diffs.split(eps), z, opts, mode)?;
            acc.value += 0.5 * part.value;
            acc.magnitude += 0.5 * part.magnitude;
            acc.truncation = acc.truncation.max(part.truncation);
        }
        *slot = acc;
    }
    let [fine, coarse] = central;
    Ok(SeriesSum {
        value: (4.0 * fine.value - coarse.value) / 3.0,
        magnitude: 2.0 * fine.magnitude,
        truncation: fine.truncation.max(coarse.truncation),
    })
}

fn right_pole_sum_simple(
    spec: &MeijerGSpec,
    bdiff: &[Vec<f64>],
    z: f64,
    opts: &EvalOptions,
    mode: SeriesMode,
) -> Result<SeriesSum, SpecFunError> {
    let mut total = SeriesSum {
        value: 0.0,
        magnitude: 0.0,
        truncation: 0.0,
    };
    for h in 0..spec.m {
        let part = pole_family_sum(spec, bdiff, h, z, opts, mode)?;
        total.value += part.value;
        total.magnitude += part.magnitude;
        total.truncation += part.truncation;
    }
    Ok(total)
}

/// Sum over the simple poles `s = b_h + k` of one `Γ(b_h - s)` factor.
fn pole_family_sum(
    spec: &MeijerGSpec,
    bdiff: &[Vec<f64>],
    h: usize,
    z: f64,
    opts: &EvalOptions,
    mode: SeriesMode,
) -> Result<SeriesSum, SpecFunError> {
    let (m, n, p, q) = spec.class();
    let (a, b) = (&spec.a, &spec.b);
    let lnz = z.ln();
    let zero = SeriesSum {
        value: 0.0,
        magnitude: 0.0,
        truncation: 0.0,
    };
    let mut truncation = 0.0;
    let bh = b[h];
    // leading coefficient of the h-th pole family
    let mut ln_pref = 0.0;
    let mut sign = 1.0;
    let mut vanishes = false;
    for j in 0..q {
        if j == h {
            continue;
        }
        if j < m {
            let (lg, s) = ln_gamma_sign(bdiff[j][h]);
            ln_pref += lg;
            sign *= s;
        } else {
            let arg = 1.0 + bh - b[j];
            if arg <= 0.0 && near_integer(arg) {
                return Err(SpecFunError::ResidueUnavailable(
                    "pole family starts with vanishing terms",
                ));
            }
            let (lg, s) = ln_gamma_sign(arg);
            ln_pref -= lg;
            sign *= s;
        }
    }
    for j in 0..p {
        if j < n {
            let (lg, s) = ln_gamma_sign(1.0 + bh - a[j]);
            ln_pref += lg;
            sign *= s;
        } else {
            let arg = a[j] - bh;
            if arg <= 0.0 && near_integer(arg) {
                vanishes = true;
                break;
            }
            let (lg, s) = ln_gamma_sign(arg);
            ln_pref -= lg;
            sign *= s;
        }
    }
    if vanishes {
        return Ok(zero);
    }
    if !ln_pref.is_finite() {
        return Err(SpecFunError::IllConditioned {
            operation: "meijer_g residue series",
            cancellation: f64::INFINITY,
        });
    }
    let lead = sign * (ln_pref + bh * lnz).exp();
    if !lead.is_finite() {
        return Err(SpecFunError::IllConditioned {
            operation: "meijer_g residue series",
            cancellation: f64::INFINITY,
        });
    }
    if lead == 0.0 {
        return Ok(zero);
    }

    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut abs_sum = 1.0f64;
    let mut small_run = 0;
    let mut converged = false;
    // an asymptotic series may grow before it starts to decrease; only a
    // minimum reached after a decrease marks the optimal truncation point
    let mut decreasing = false;
    for k in 0..opts.max_terms {
        let kf = k as f64;
        let mut ratio = -z / (kf + 1.0);
        for j in 0..q {
            if j == h {
                continue;
            }
            if j < m {
                ratio /= bdiff[j][h] - kf - 1.0;
            } else {
                ratio /= 1.0 - b[j] + bh + kf;
            }
        }
        for j in 0..p {
            if j < n {
                ratio *= 1.0 - a[j] + bh + kf;
            } else {
                ratio *= a[j] - bh - kf - 1.0;
            }
        }
        let next = term * ratio;
        if next.abs() < term.abs() {
            decreasing = true;
        } else if mode == SeriesMode::Asymptotic && decreasing {
            // smallest term reached: optimal truncation
            truncation += (lead * term).abs();
            converged = true;
            break;
        }
        term = next;
        if !term.is_finite() {
            return Err(SpecFunError::IllConditioned {
                operation: "meijer_g residue series",
                cancellation: f64::INFINITY,
            });
        }
        sum += term;
        abs_sum += term.abs();
        if term == 0.0 {
            converged = true;
            break;
        }
        if term.abs() < opts.series_tol * sum.abs() && (mode == SeriesMode::Asymptotic || ratio.abs() < 1.0) {
            small_run += 1;
            if small_run >= 3 {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
    }
    if !converged {
        return Err(SpecFunError::NonConvergence {
            operation: "meijer_g residue series",
            terms: opts.max_terms,
        });
    }
    Ok(SeriesSum {
        value: lead * sum,
        magnitude: lead.abs() * abs_sum,
        truncation,
    })
}

/// Residue-series value with its cancellation ratio (sum of term magnitudes
/// over the result).
struct ResidueValue {
    value: f64,
    cancellation: f64,
}

fn residue_series(spec: &MeijerGSpec, x: f64, opts: &EvalOptions) -> Result<ResidueValue, SpecFunError> {
    let (p, q) = (spec.p(), spec.q());
    let (oriented, z) = if p > q || (p == q && x > 1.0) {
        (spec.inverted(), 1.0 / x)
    } else {
        (spec.clone(), x)
    };
    let convergent = right_pole_sum(&oriented, z, opts, SeriesMode::Convergent);
    let cancellation = match convergent {
        Ok(s) => {
            let c = s.magnitude / s.value.abs();
            if c <= RESIDUE_MAX_CANCELLATION {
                return Ok(ResidueValue {
                    value: s.value,
                    cancellation: c,
                });
            }
            c
        }
        Err(SpecFunError::IllConditioned { cancellation, .. }) => cancellation,
        Err(e) if oriented.p() == oriented.q() => return Err(e),
        Err(_) => f64::INFINITY,
    };
    // Algebraic expansion at large argument: left poles of the oriented
    // function, valid with exponentially small remainder when m = q > p.
    if oriented.p() < oriented.q() && oriented.m == oriented.q() && oriented.n > 0 && z > 1.0 {
        let inv = oriented.inverted();
        if let Ok(s) = right_pole_sum(&inv, 1.0 / z, opts, SeriesMode::Asymptotic) {
            let scale = s.value.abs();
            if s.truncation <= ASYMPTOTIC_MAX_REL_ERROR * scale && s.magnitude <= RESIDUE_MAX_CANCELLATION * scale {
                return Ok(ResidueValue {
                    value: s.value,
                    cancellation: s.magnitude / scale,
                });
            }
        }
    }
    Err(SpecFunError::IllConditioned {
        operation: "meijer_g residue series",
        cancellation,
    })
}

// ---------------------------------------------------------------------------
// Mellin–Barnes contour integration

/// Result of a contour evaluation together with its conditioning.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ContourValue {
    pub value: f64,
    /// `int |integrand|` over `|integral|`.
    pub cancellation: f64,
}

struct MellinBarnes<'a> {
    spec: &'a MeijerGSpec,
    lnz: f64,
}

impl MellinBarnes<'_> {
    /// `ln` of the integrand `Φ(s) z^s`.
    fn ln_integrand(&self, s: Complex64) -> Complex64 {
        let sp = self.spec;
        let mut acc = s * self.lnz;
        for (j, &b) in sp.b.iter().enumerate() {
            if j < sp.m {
                acc += ln_gamma_c_unchecked(b - s);
            } else {
                acc -= ln_gamma_c_unchecked(1.0 - b + s);
            }
        }
        for (j, &a) in sp.a.iter().enumerate() {
            if j < sp.n {
                acc += ln_gamma_c_unchecked(1.0 - a + s);
            } else {
                acc -= ln_gamma_c_unchecked(a - s);
            }
        }
        acc
    }

    fn ln_magnitude_real(&self, c: f64) -> f64 {
        let v = self.ln_integrand(Complex64::new(c, 0.0)).re;
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    }
}

/// Chooses the abscissa of the integration line. Minimizing the integrand
/// modulus on the real axis places the line near the saddle point, which
/// keeps cancellation along the line small.
fn choose_abscissa(mb: &MellinBarnes<'_>, lo: f64, hi: f64) -> f64 {
    let candidates: Vec<f64> = if lo.is_finite() {
        let g = hi - lo;
        (1..20).map(|i| lo + g * i as f64 / 20.0).collect()
    } else {
        let mut v = Vec::new();
        let mut t = 0.05;
        while t < 200.0 {
            v.push(hi - t);
            t *= 1.25;
        }
        v
    };
    let mut best = (f64::INFINITY, candidates[candidates.len() / 2]);
    for &c in &candidates {
        let f = mb.ln_magnitude_real(c);
        if f.is_finite() && f < best.0 {
            best = (f, c);
        }
    }
    best.1
}

pub(crate) fn contour_integral(spec: &MeijerGSpec, x: f64) -> Result<ContourValue, SpecFunError> {
    let mb = MellinBarnes { spec, lnz: x.ln() };
    let (lo, hi) = spec.pole_gap();
    let c = choose_abscissa(&mb, lo, hi);
    let dist = (c - lo).min(hi - c).min(1.0);

    // log-magnitude reference to keep the quadrature in range
    let e0 = mb.ln_integrand(Complex64::new(c, 0.0)).re;
    let e0 = if e0.is_finite() { e0 } else { 0.0 };
    let eval = |y: f64| -> (f64, f64) {
        let w = mb.ln_integrand(Complex64::new(c, y)) - e0;
        if w.re.is_nan() || w.re < -745.0 {
            return (0.0, 0.0);
        }
        let mag = w.re.exp();
        (mag * w.im.cos(), mag)
    };

    // truncation point of the infinite line
    let mut h = 0.5 * dist;
    let mut ymax = 0.0;
    let mut peak: f64 = 0.0;
    let mut quiet = 0;
    let mut y = 0.0;
    loop {
        let (_, mag) = eval(y);
        peak = peak.max(mag);
        if mag <= 1e-18 * peak {
            quiet += 1;
            if quiet >= 4 {
                ymax = y;
                break;
            }
        } else {
            quiet = 0;
        }
        y += h;
        if y > 2000.0 {
            break;
        }
    }
    if ymax == 0.0 {
        return Err(SpecFunError::NonConvergence {
            operation: "meijer_g contour truncation",
            terms: (2000.0 / h) as usize,
        });
    }

    // trapezoid with step halving; y = 0 carries half weight
    let (f0, m0) = eval(0.0);
    let mut sum = 0.5 * f0;
    let mut abs_sum = 0.5 * m0;
    let mut k = 1;
    while k as f64 * h <= ymax {
        let (f, mg) = eval(k as f64 * h);
        sum += f;
        abs_sum += mg;
        k += 1;
    }
    let mut estimate = sum * h;
    let mut evaluations = k;
    for _ in 0..14 {
        let mut mid = 0.0;
        let mut mid_abs = 0.0;
        let mut yk = 0.5 * h;
        while yk <= ymax {
            let (f, mg) = eval(yk);
            mid += f;
            mid_abs += mg;
            yk += h;
            evaluations += 1;
        }
        sum += mid;
        abs_sum += mid_abs;
        h *= 0.5;
        let refined = sum * h;
        let change = (refined - estimate).abs();
        estimate = refined;
        if change <= 1e-14 * abs_sum * h {
            let scale = e0.exp() / std::f64::consts::PI;
            let value = estimate * scale;
            if !value.is_finite() {
                return Err(SpecFunError::IllConditioned {
                    operation: "meijer_g contour integral",
                    cancellation: f64::INFINITY,
                });
            }
            return Ok(ContourValue {
                value,
                cancellation: abs_sum * h / estimate.abs(),
            });
        }
    }
    Err(SpecFunError::NonConvergence {
        operation: "meijer_g contour integral",
        terms: evaluations,
    })
}
