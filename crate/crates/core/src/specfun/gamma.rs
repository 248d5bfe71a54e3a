//! Gamma function family on the real line and in the complex plane.
//!
//! The complex logarithm uses the Lanczos approximation (g = 607/128, 15
//! coefficients) on the right half-plane and the reflection formula on the
//! left. Relative accuracy is near machine precision for moderate |z|.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::SpecFunError;

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Lanczos sum for `Re z >= 0.5`, returns `ln Γ(z)`.
fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    let zm1 = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (zm1 + k as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (zm1 + 0.5) * t.ln() - t + acc.ln()
}

/// `ln sin(pi z)` without overflow for large imaginary parts.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im.abs() < 20.0 {
        return (z * PI).sin().ln();
    }
    // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i; keep the dominant exponential
    // in log form.
    if z.im > 0.0 {
        let small = (2.0 * i * PI * z).exp();
        -i * PI * z + (small - 1.0).ln() - (2.0 * i).ln()
    } else {
        let small = (-2.0 * i * PI * z).exp();
        i * PI * z + (1.0 - small).ln() - (2.0 * i).ln()
    }
}

/// Complex `ln Γ(z)`, continuous on the right half-plane and real on the
/// positive real axis.
pub fn log_gamma_complex(z: Complex64) -> Result<Complex64, SpecFunError> {
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(SpecFunError::GammaPole(z.re));
    }
    Ok(ln_gamma_c_unchecked(z))
}

/// Same as [`log_gamma_complex`] for callers that already exclude poles.
pub(crate) fn ln_gamma_c_unchecked(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        lanczos_ln_gamma(z)
    } else {
        Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - lanczos_ln_gamma(1.0 - z)
    }
}

fn lanczos_real(x: f64) -> f64 {
    let xm1 = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (xm1 + k as f64);
    }
    let t = xm1 + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (xm1 + 0.5) * t.ln() - t + acc.ln()
}

/// `ln |Γ(x)|` together with the sign of `Γ(x)`. Poles return `+inf`.
pub fn ln_gamma_sign(x: f64) -> (f64, f64) {
    if is_nonpositive_integer(x) {
        return (f64::INFINITY, 1.0);
    }
    if x >= 0.5 {
        return (lanczos_real(x), 1.0);
    }
    // Γ(x) Γ(1-x) = pi / sin(pi x)
    let s = sin_pi(x);
    let (lg, _) = ln_gamma_sign(1.0 - x);
    (PI.ln() - s.abs().ln() - lg, s.signum())
}

/// `ln |Γ(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_sign(x).0
}

/// Real gamma function. Poles return `NaN`.
pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::NAN;
    }
    if x > 0.0 && x < 20.0 && x == x.round() {
        return (1..x as u64).map(|k| k as f64).product();
    }
    let (lg, sign) = ln_gamma_sign(x);
    sign * lg.exp()
}

/// Reciprocal gamma, zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    let (lg, sign) = ln_gamma_sign(x);
    sign * (-lg).exp()
}

/// Even Bernoulli numbers `B_2, B_4, ..., B_20`.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Polygamma function `psi^(n)(x)` (`n = 0` is the digamma function) for
/// real `x` away from the poles. The argument is shifted above 16 by the
/// recurrence `psi^(n)(x) = psi^(n)(x+1) - (-1)^n n! / x^(n+1)` and the
/// asymptotic expansion is applied there.
pub(crate) fn polygamma(n: usize, x: f64) -> f64 {
    const SHIFT_TO: f64 = 16.0;
    let nf = n as f64;
    let n_fact = factorial(n);
    let sign_n = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut x = x;
    let mut acc = 0.0;
    while x < SHIFT_TO {
        acc -= sign_n * n_fact / x.powi(n as i32 + 1);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let tail = if n == 0 {
        let mut t = x.ln() - 0.5 * inv;
        let mut p = inv2;
        for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
            t -= b / (2.0 * (k + 1) as f64) * p;
            p *= inv2;
        }
        t
    } else {
        // (-1)^(n+1) [ (n-1)!/x^n + n!/(2 x^(n+1)) + sum B_2k (2k+n-1)!/((2k)! x^(2k+n)) ]
        let mut t = factorial(n - 1) * inv.powi(n as i32) + 0.5 * n_fact * inv.powi(n as i32 + 1);
        let mut p = inv.powi(n as i32 + 2);
        // (2k+n-1)!/(2k)! built incrementally
        let mut ratio = (1..n).map(|i| (2 + i) as f64).product::<f64>() / 1.0;
        for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
            let two_k = 2.0 * (k + 1) as f64;
            t += b * ratio * p;
            // advance (2k+n-1)!/(2k)! to k+1
            ratio *= (two_k + nf) * (two_k + nf + 1.0) / ((two_k + 1.0) * (two_k + 2.0));
            p *= inv2;
        }
        -sign_n * t
    };
    acc + tail
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `sin(pi x)` with exact zeros at the integers and full relative accuracy
/// next to them.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let f = x - n;
    if f == 0.0 {
        return 0.0;
    }
    let s = (PI * f).sin();
    if n.rem_euclid(2.0) == 0.0 {
        s
    } else {
        -s
    }
}
