//! Residue sums over families of coincident poles.
//!
//! When lower parameters `b_h` (`h < m`) differ by integers, the poles of
//! their `Γ(b_h - s)` factors merge into poles of higher order. At such a pole
//! `s0` every factor of the Mellin–Barnes integrand is written as a Laurent
//! series in `u = s - s0`,
//!
//! ```text
//! Γ(x0 + σu) = C u^e exp(Σ_j l_j u^j),
//! ```
//!
//! with `l_j` from polygamma values (and `ζ(2k)` for the pole factors), so the
//! residue is the coefficient of `u^-1` of the product.

use super::gamma::{factorial, ln_gamma_sign, polygamma};
use super::meijer::{near_integer, MeijerGSpec, SeriesMode, SeriesSum};
use super::{EvalOptions, SpecFunError};

/// `ζ(2), ζ(4), ..., ζ(16)`.
const ZETA_EVEN: [f64; 8] = [
    1.644_934_066_848_226_4,
    1.082_323_233_711_138_2,
    1.017_343_061_984_449,
    1.004_077_356_197_944_3,
    1.000_994_575_127_818_1,
    1.000_246_086_553_308,
    1.000_061_248_135_058_7,
    1.000_015_282_259_408_7,
];

/// Highest supported pole order minus one.
const MAX_ORDER: usize = 2 * ZETA_EVEN.len();

/// Lower parameters whose poles merge: `b_h = base + shift_h` with integer
/// `shift_h >= 0`.
#[derive(Debug, Clone)]
pub(super) struct Cluster {
    pub base: f64,
    pub members: Vec<(usize, i64)>,
}

/// Groups `b` into clusters of parameters with (near-)integer differences.
pub(super) fn clusters(b: &[f64]) -> Vec<Cluster> {
    let mut assigned = vec![false; b.len()];
    let mut out = Vec::new();
    for i in 0..b.len() {
        if assigned[i] {
            continue;
        }
        let group: Vec<usize> = (i..b.len())
            .filter(|&j| !assigned[j] && near_integer(b[j] - b[i]))
            .collect();
        let base_idx = *group
            .iter()
            .min_by(|&&x, &&y| b[x].partial_cmp(&b[y]).unwrap())
            .expect("group contains i");
        let base = b[base_idx];
        let members = group
            .iter()
            .map(|&j| {
                assigned[j] = true;
                (j, (b[j] - base).round() as i64)
            })
            .collect();
        out.push(Cluster { base, members });
    }
    out
}

/// One factor `Γ(x0 + σu)^(±1)` of the integrand.
#[derive(Clone, Copy)]
struct Factor {
    x0: f64,
    sigma: f64,
    numerator: bool,
}

impl Factor {
    /// `Some(n)` when `x0 = -n` is a pole of `Γ`.
    fn pole_index(&self) -> Option<u64> {
        (self.x0 <= 0.5 && near_integer(self.x0)).then(|| (-self.x0.round()) as u64)
    }

    /// Power of `u` contributed by this factor.
    fn power(&self) -> i32 {
        match (self.pole_index(), self.numerator) {
            (Some(_), true) => -1,
            (Some(_), false) => 1,
            (None, _) => 0,
        }
    }

    /// Adds `ln|C|`, the sign of `C` and the log-series coefficients
    /// `l_1..l_order` of this factor to the accumulators.
    fn accumulate(&self, order: usize, ln_abs: &mut f64, sign: &mut f64, coef: &mut [f64]) {
        let dir = if self.numerator { 1.0 } else { -1.0 };
        let s = self.sigma;
        match self.pole_index() {
            Some(n) => {
                // Γ(-n + σu) = (-1)^n / (σu n!) * (πσu / sin πσu) / [Γ(n+1-σu)/n!]
                let nf = n as f64;
                *ln_abs -= dir * ln_gamma_sign(nf + 1.0).0;
                if n % 2 == 1 {
                    *sign = -*sign;
                }
                *sign *= s;
                for j in 1..=order {
                    let jf = j as f64;
                    let mut l = -polygamma(j - 1, nf + 1.0) * (-s).powi(j as i32) / factorial(j);
                    if j % 2 == 0 {
                        l += ZETA_EVEN[j / 2 - 1] / (jf / 2.0);
                    }
                    coef[j] += dir * l;
                }
            }
            None => {
                let (lg, sg) = ln_gamma_sign(self.x0);
                *ln_abs += dir * lg;
                *sign *= sg;
                for j in 1..=order {
                    coef[j] += dir * polygamma(j - 1, self.x0) * s.powi(j as i32) / factorial(j);
                }
            }
        }
    }
}

/// Contribution `-Res_{s = s0}` of the integrand to the G-function.
fn pole_term(spec: &MeijerGSpec, cluster: &Cluster, k: i64, lnz: f64) -> Result<f64, SpecFunError> {
    let (m, n, p, q) = spec.class();
    let s0 = cluster.base + k as f64;
    let mut factors = Vec::with_capacity(p + q);
    for j in 0..q {
        if j < m {
            let x0 = match cluster.members.iter().find(|(h, _)| *h == j) {
                Some(&(_, shift)) => (shift - k) as f64,
                None => spec.b[j] - s0,
            };
            factors.push(Factor {
                x0,
                sigma: -1.0,
                numerator: true,
            });
        } else {
            factors.push(Factor {
                x0: 1.0 - spec.b[j] + s0,
                sigma: 1.0,
                numerator: false,
            });
        }
    }
    for j in 0..p {
        if j < n {
            factors.push(Factor {
                x0: 1.0 - spec.a[j] + s0,
                sigma: 1.0,
                numerator: true,
            });
        } else {
            factors.push(Factor {
                x0: spec.a[j] - s0,
                sigma: -1.0,
                numerator: false,
            });
        }
    }
    let power: i32 = factors.iter().map(Factor::power).sum();
    if power >= 0 {
        return Ok(0.0);
    }
    let order = (-1 - power) as usize;
    if order > MAX_ORDER {
        return Err(SpecFunError::ResidueUnavailable("pole order too high"));
    }
    let mut ln_abs = s0 * lnz;
    let mut sign = 1.0;
    let mut coef = vec![0.0; order + 1];
    if order >= 1 {
        coef[1] += lnz;
    }
    for f in &factors {
        f.accumulate(order, &mut ln_abs, &mut sign, &mut coef);
    }
    // coefficients of exp(Σ l_j u^j): e_i = (1/i) Σ_{j=1}^{i} j l_j e_{i-j}
    let mut e = vec![0.0; order + 1];
    e[0] = 1.0;
    for i in 1..=order {
        e[i] = (1..=i).map(|j| j as f64 * coef[j] * e[i - j]).sum::<f64>() / i as f64;
    }
    let term = -sign * ln_abs.exp() * e[order];
    if !term.is_finite() {
        return Err(SpecFunError::IllConditioned {
            operation: "meijer_g confluent residues",
            cancellation: f64::INFINITY,
        });
    }
    Ok(term)
}

/// Sum over the merged pole family of one cluster.
pub(super) fn cluster_sum(
    spec: &MeijerGSpec,
    cluster: &Cluster,
    z: f64,
    opts: &EvalOptions,
    mode: SeriesMode,
) -> Result<SeriesSum, SpecFunError> {
    let lnz = z.ln();
    let last_join = cluster.members.iter().map(|&(_, s)| s).max().unwrap_or(0);
    let mut sum = 0.0;
    let mut magnitude = 0.0;
    let mut truncation = 0.0;
    let mut prev = f64::INFINITY;
    let mut small_run = 0;
    // see `pole_family_sum`: stop only at a minimum reached after a decrease
    let mut decreasing = false;
    for k in 0..opts.max_terms as i64 {
        let t = pole_term(spec, cluster, k, lnz)?;
        let settled = k > last_join;
        if settled && prev.is_finite() && t.abs() < prev {
            decreasing = true;
        }
        if mode == SeriesMode::Asymptotic && settled && decreasing && t.abs() >= prev && prev > 0.0 {
            // smallest term reached: optimal truncation
            truncation = prev;
            return Ok(SeriesSum {
                value: sum,
                magnitude,
                truncation,
            });
        }
        sum += t;
        magnitude += t.abs();
        if settled && t.abs() <= opts.series_tol * sum.abs() && t.abs() <= prev {
            small_run += 1;
            if small_run >= 3 {
                return Ok(SeriesSum {
                    value: sum,
                    magnitude,
                    truncation,
                });
            }
        } else {
            small_run = 0;
        }
        if settled {
            prev = t.abs();
        }
    }
    Err(SpecFunError::NonConvergence {
        operation: "meijer_g confluent residues",
        terms: opts.max_terms,
    })
}
