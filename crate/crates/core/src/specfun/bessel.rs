//! Modified Bessel function of the second kind for real order.
//!
//! Temme's series for `x < 2` and Steed's continued fraction otherwise, both
//! on the reduced order `|mu| <= 1/2`, followed by forward recurrence in the
//! order (stable for `K`).

use std::f64::consts::PI;

use super::gamma::{rgamma, EULER_GAMMA};
use super::SpecFunError;

const EPS: f64 = 1e-16;

/// Returns `(gam1, gam2)` where
/// `gam1 = (1/Γ(1-mu) - 1/Γ(1+mu)) / (2 mu)` and
/// `gam2 = (1/Γ(1-mu) + 1/Γ(1+mu)) / 2`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let gampl = rgamma(1.0 + mu);
    let gammi = rgamma(1.0 - mu);
    let gam2 = 0.5 * (gammi + gampl);
    let gam1 = if mu.abs() < 1e-2 {
        // Taylor coefficients of 1/Γ(z) about 0, even powers
        const A2: f64 = EULER_GAMMA;
        const A4: f64 = -0.042_002_635_034_095_24;
        const A6: f64 = -0.042_197_734_555_544_34;
        const A8: f64 = 0.007_218_943_246_663_1;
        let m2 = mu * mu;
        -(A2 + m2 * (A4 + m2 * (A6 + m2 * A8)))
    } else {
        (gammi - gampl) / (2.0 * mu)
    };
    (gam1, gam2, gampl, gammi)
}

/// `K_mu(x)` and `K_{mu+1}(x)` for `|mu| <= 1/2`.
fn bessel_k_reduced(mu: f64, x: f64) -> Result<(f64, f64), SpecFunError> {
    let mu2 = mu * mu;
    if x < 2.0 {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        for i in 1..500 {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * ff;
            sum += del;
            let del1 = c * (p - fi * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * EPS {
                return Ok((sum, sum1 * 2.0 / x));
            }
        }
        Err(SpecFunError::NonConvergence {
            operation: "bessel_k",
            terms: 500,
        })
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - mu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        for i in 2..10_000 {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                let h = a1 * h;
                let kmu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
                let k1 = kmu * (mu + x + 0.5 - h) / x;
                return Ok((kmu, k1));
            }
        }
        Err(SpecFunError::NonConvergence {
            operation: "bessel_k",
            terms: 10_000,
        })
    }
}

/// Modified Bessel function `K_nu(x)` for real `nu` and `x > 0`.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0) || !nu.is_finite() {
        return Err(SpecFunError::Domain {
            function: "bessel_k",
            value: x,
        });
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let nu = nu.abs();
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (mut kmu, mut k1) = bessel_k_reduced(mu, x)?;
    for i in 1..=(nl as u64) {
        let next = (mu + i as f64) * 2.0 / x * k1 + kmu;
        kmu = k1;
        k1 = next;
    }
    Ok(kmu)
}
