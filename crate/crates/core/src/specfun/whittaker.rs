//! Whittaker function `W_{kappa,mu}(x)` for real parameters and `x > 0`.
//!
//! With `a = 1/2 + mu - kappa` and `a' = 1/2 - mu - kappa` (the same pair with
//! `mu -> -mu`):
//!
//! * `a` or `a'` a non-positive integer: terminating Laguerre-type sum;
//! * `a > 0` or `a' > 0`: Laplace integral
//!   `W = e^{-x/2} x^kappa / Γ(a) * int_0^inf e^{-t} t^{a-1} (1 + t/x)^{-a'} dt`,
//!   integrated in `t = e^v`;
//! * otherwise the Meijer-G representation
//!   `W = e^{x/2} G^{2,0}_{1,2}(x | 1 - kappa; 1/2 + mu, 1/2 - mu)`.

use super::gamma::ln_gamma;
use super::meijer::{meijer_g, EvalOptions, MeijerGSpec};
use super::SpecFunError;
use crate::integrate::{integrate, Tolerance};

const INT_TOL: f64 = 1e-12;

pub fn whittaker_w(kappa: f64, mu: f64, x: f64) -> Result<f64, SpecFunError> {
    let (ln_abs, sign) = ln_whittaker_w(kappa, mu, x)?;
    Ok(sign * ln_abs.exp())
}

/// `(ln |W_{kappa,mu}(x)|, sign W)`, usable where `W` itself over- or
/// underflows.
pub fn ln_whittaker_w(kappa: f64, mu: f64, x: f64) -> Result<(f64, f64), SpecFunError> {
    if !(x > 0.0) || !x.is_finite() || !kappa.is_finite() || !mu.is_finite() {
        return Err(SpecFunError::Domain {
            function: "whittaker_w",
            value: x,
        });
    }
    let a = 0.5 + mu - kappa;
    let a_alt = 0.5 - mu - kappa;
    for (first, mu_eff) in [(a, mu), (a_alt, -mu)] {
        if first <= 0.0 && (first - first.round()).abs() < INT_TOL {
            let (ln_u, sign) = terminating(first.round() as i64, mu_eff, x);
            return Ok((-0.5 * x + (mu_eff + 0.5) * x.ln() + ln_u, sign));
        }
    }
    if a > 0.0 || a_alt > 0.0 {
        let (first, second) = if a >= a_alt { (a, a_alt) } else { (a_alt, a) };
        return Ok((ln_laplace_integral(kappa, first, second, x)?, 1.0));
    }
    let spec = MeijerGSpec::new(2, 0, vec![1.0 - kappa], vec![0.5 + mu, 0.5 - mu])?;
    let g = meijer_g(&spec, x, &EvalOptions::default())?;
    Ok((0.5 * x + g.abs().ln(), g.signum()))
}

/// `a = -n`: `U(-n, b, x) = (-1)^n sum_k (-n)_k / k! (b + k)_{n-k} x^k`.
fn terminating(a: i64, mu: f64, x: f64) -> (f64, f64) {
    let n = (-a) as usize;
    let b = 1.0 + 2.0 * mu;
    let mut u = 0.0;
    let mut coef = 1.0; // (-n)_k / k!
    let mut xk = 1.0;
    for k in 0..=n {
        let tail: f64 = (k..n).map(|i| b + i as f64).product();
        u += coef * tail * xk;
        coef *= (k as f64 - n as f64) / (k as f64 + 1.0);
        xk *= x;
    }
    if n % 2 == 1 {
        u = -u;
    }
    (u.abs().ln(), u.signum())
}

fn ln_laplace_integral(kappa: f64, a: f64, a_alt: f64, x: f64) -> Result<f64, SpecFunError> {
    // integrand in v = ln t, scaled by its value at the peak of e^{-t} t^a
    let ln_x = x.ln();
    let ln_f = |v: f64| -> f64 {
        let t = v.exp();
        // ln(1 + t/x), accurate for either ratio size
        let r = v - ln_x;
        let l1p = if r < 0.0 {
            r.exp().ln_1p()
        } else {
            r + (-r).exp().ln_1p()
        };
        -t + a * v - a_alt * l1p
    };
    let peak = a.max(1e-3).ln();
    let ref_level = ln_f(peak);
    let hi = 6.7f64.max(peak + 2.0);
    let lo = peak - (45.0 + ref_level.abs().min(700.0)) / a;
    let r = integrate(
        |v| (ln_f(v) - ref_level).exp(),
        lo,
        hi,
        Tolerance {
            abs: 0.0,
            rel: 1e-14,
            max_subdivisions: 2000,
        },
    )
    .map_err(|_| SpecFunError::NonConvergence {
        operation: "whittaker_w integral",
        terms: 2000,
    })?;
    Ok(-0.5 * x + kappa * ln_x + ref_level - ln_gamma(a) + r.value.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_k;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn elementary_identity() {
        // W_{mu+1/2, mu}(z) = z^{mu+1/2} e^{-z/2}
        let v = whittaker_w(1.0, 0.5, 2.0).unwrap();
        assert!(rel(v, 2.0 * (-1f64).exp()) < 1e-14);
        for &(mu, z) in &[(0.2, 0.3), (1.7, 4.0), (-0.3, 12.0), (3.1, 50.0)] {
            let want = (mu + 0.5) * f64::ln(z) - 0.5 * z;
            let v = whittaker_w(mu + 0.5, mu, z).unwrap();
            assert!(rel(v, want.exp()) < 1e-12, "mu={mu} z={z}");
        }
    }

    #[test]
    fn bessel_identity() {
        // W_{0,mu}(z) = sqrt(z/pi) K_mu(z/2)
        let v = whittaker_w(0.0, 0.5, 2.0).unwrap();
        assert!(rel(v, (2.0 / PI).sqrt() * bessel_k(0.5, 1.0).unwrap()) < 1e-12);
        assert!((v - 0.367_879_441_171_442_3).abs() < 1e-12);
        for &(mu, z) in &[(0.0, 0.01), (0.3, 1.0), (1.25, 7.0), (2.0, 40.0)] {
            let want = (z / PI).sqrt() * bessel_k(mu, z / 2.0).unwrap();
            assert!(rel(whittaker_w(0.0, mu, z).unwrap(), want) < 1e-11, "mu={mu} z={z}");
        }
    }

    #[test]
    fn reference_values() {
        // mpmath.whitw
        assert!(rel(whittaker_w(0.3, 0.25, 1.7).unwrap(), 0.506_251_649_957_509_5) < 1e-12);
        assert!(rel(whittaker_w(2.2, 0.3, 0.5).unwrap(), -0.400_011_421_634_981_5) < 1e-9);
        assert!(rel(whittaker_w(-1.5, 0.7, 30.0).unwrap(), 1.670_300_715_199_887e-9) < 1e-11);
        assert!(rel(whittaker_w(3.0, 0.5, 2.0).unwrap(), -1.471_517_764_685_769_3) < 1e-13);
        assert!(rel(whittaker_w(-2.0, 1.3, 0.05).unwrap(), 3.148_967_380_511_366_7) < 1e-11);
    }

    #[test]
    fn symmetric_in_mu() {
        let a = whittaker_w(0.3, 0.25, 1.7).unwrap();
        let b = whittaker_w(0.3, -0.25, 1.7).unwrap();
        assert!(rel(a, b) < 1e-13);
    }

    #[test]
    fn log_form_beyond_overflow() {
        // W_{mu+1/2,mu}(z) = z^{mu+1/2} e^{-z/2} at z where e^{-z/2} underflows
        let (ln_w, sign) = ln_whittaker_w(0.8, 0.3, 3000.0).unwrap();
        assert_eq!(sign, 1.0);
        assert!(rel(ln_w, 0.8 * f64::ln(3000.0) - 1500.0) < 1e-13);
        // mpmath.log(mpmath.whitw(-1, 0.5, 5000))
        let (ln_w, _) = ln_whittaker_w(-1.0, 0.5, 5000.0).unwrap();
        assert!(rel(ln_w, -2_508.517_593_031_533_5) < 1e-13);
    }

    #[test]
    fn domain() {
        assert!(whittaker_w(0.0, 0.5, 0.0).is_err());
        assert!(whittaker_w(0.0, 0.5, -1.0).is_err());
    }
}
