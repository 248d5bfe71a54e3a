//! Independent numerical references shared by the criteria.

use gkrelay::integrate::{integrate, integrate_log_axis, Tolerance};
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// `int_0^inf f` on a logarithmic axis spanning `e^-60 .. e^60`.
pub fn half_line<F: FnMut(f64) -> f64>(f: F, rel_tol: f64) -> Option<f64> {
    integrate_log_axis(
        f,
        -60.0,
        60.0,
        Tolerance {
            abs: 0.0,
            rel: rel_tol,
            max_subdivisions: 20_000,
        },
    )
    .ok()
    .map(|r| r.value)
}

/// `int_a^b f` for `0 <= a < b`.
fn segment<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    let tol = Tolerance {
        abs: 0.0,
        rel: 1e-10,
        max_subdivisions: 20_000,
    };
    let r = if a <= 0.0 {
        integrate_log_axis(f, -60.0, b.ln(), tol)
    } else {
        integrate(&mut f, a, b, tol)
    };
    r.map(|r| r.value).unwrap_or(f64::NAN)
}

/// Central difference with step `1e-6 s`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, s: f64) -> f64 {
    let h = 1e-6 * s;
    (f(s + h) - f(s - h)) / (2.0 * h)
}

pub struct ChiSquare {
    pub statistic: f64,
    pub critical: f64,
}

/// Pearson test of `samples` against `pdf` at the 5% level, with `bins` bins
/// at empirical quantiles.
pub fn chi_square<F: FnMut(f64) -> f64>(samples: &mut [f64], mut pdf: F, bins: usize) -> ChiSquare {
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    let mut edges = vec![0.0];
    edges.extend((1..bins).map(|b| samples[b * n / bins]));
    edges.push(f64::INFINITY);
    let mut statistic = 0.0;
    let mut lo_count = 0;
    let mut prob_before = 0.0;
    for b in 0..bins {
        let (lo, hi) = (edges[b], edges[b + 1]);
        let hi_count = if hi.is_finite() {
            samples.partition_point(|&x| x < hi)
        } else {
            n
        };
        let observed = (hi_count - lo_count) as f64;
        let p = if hi.is_finite() {
            segment(&mut pdf, lo, hi)
        } else {
            1.0 - prob_before
        };
        prob_before += p;
        let expected = p * n as f64;
        statistic += (observed - expected).powi(2) / expected;
        lo_count = hi_count;
    }
    let critical = ChiSquared::new((bins - 1) as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(0.95);
    ChiSquare { statistic, critical }
}
