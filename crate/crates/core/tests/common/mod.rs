#![allow(dead_code)]

use gkrelay::channel::{GKLink, HopChannels, SystemParams};
use gkrelay::integrate::{integrate, integrate_log_axis, Tolerance};
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub const ALPHA: f64 = 4.0;

/// Hop of the reference convergence grid: data link (k = m = 1, d = 0.5) and an
/// interference link (k = 4, m = 3) at distance `dj`.
pub fn table1_hop(dj: f64) -> HopChannels {
    HopChannels::new(
        GKLink::new(1.0, 1.0, 0.5, ALPHA).unwrap(),
        GKLink::new(4.0, 3.0, dj, ALPHA).unwrap(),
    )
}

pub fn hop(ki: f64, mi: f64, di: f64, kj: f64, mj: f64, dj: f64) -> HopChannels {
    HopChannels::new(
        GKLink::new(ki, mi, di, ALPHA).unwrap(),
        GKLink::new(kj, mj, dj, ALPHA).unwrap(),
    )
}

pub fn sys_db(w_db: f64, pmax_db: f64) -> SystemParams {
    SystemParams::from_db(w_db, pmax_db).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// `int_0^inf f` on a logarithmic axis spanning `e^-60 .. e^60`.
pub fn half_line<F: FnMut(f64) -> f64>(f: F, rel_tol: f64) -> f64 {
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
    .unwrap()
    .value
}

/// `int_a^b f` for `0 <= a < b` (log axis when `a > 0`).
pub fn segment<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    let tol = Tolerance {
        abs: 0.0,
        rel: 1e-10,
        max_subdivisions: 20_000,
    };
    if a <= 0.0 {
        integrate_log_axis(f, -60.0, b.ln(), tol).unwrap().value
    } else {
        integrate(&mut f, a, b, tol).unwrap().value
    }
}

pub struct ChiSquare {
    pub statistic: f64,
    pub critical: f64,
    pub bins: usize,
}

impl ChiSquare {
    pub fn passes(&self) -> bool {
        self.statistic < self.critical
    }
}

/// Pearson test of `samples` against `pdf` at the 5% level, with bins at
/// empirical quantiles (edges are fixed before the counts are compared).
pub fn chi_square<F: FnMut(f64) -> f64>(samples: &mut [f64], mut pdf: F, bins: usize) -> ChiSquare {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len();
    let mut edges = vec![0.0];
    for b in 1..bins {
        edges.push(samples[b * n / bins]);
    }
    edges.push(f64::INFINITY);
    let mut statistic = 0.0;
    let mut lo_count = 0usize;
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
    let critical = ChiSquared::new((bins - 1) as f64).unwrap().inverse_cdf(0.95);
    ChiSquare {
        statistic,
        critical,
        bins,
    }
}

/// Kolmogorov–Smirnov distance between `samples` and the distribution with
/// density `pdf`; the CDF is accumulated with 5-point Gauss–Legendre panels
/// between consecutive order statistics.
pub fn ks_statistic<F: FnMut(f64) -> f64>(samples: &mut [f64], mut pdf: F) -> f64 {
    const X: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.236_926_885_056_189,
        0.478_628_670_499_366,
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
    ];
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    let mut cdf = segment(&mut pdf, 0.0, samples[0]);
    let mut d: f64 = 0.0;
    for (i, pair) in samples.windows(2).enumerate() {
        d = d.max((cdf - i as f64 / n).abs()).max((cdf - (i + 1) as f64 / n).abs());
        let (a, b) = (pair[0], pair[1]);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        if half > 0.0 {
            cdf += half * X.iter().zip(W).map(|(x, w)| w * pdf(mid + half * x)).sum::<f64>();
        }
    }
    let last = samples.len() - 1;
    d.max((cdf - last as f64 / n).abs()).max((cdf - 1.0).abs())
}
