mod common;

use common::*;
use gkrelay::channel::*;
use gkrelay::specfun::{meijer_g, EvalOptions, MeijerGSpec};
use gkrelay::Error;

fn links() -> Vec<GKLink> {
    [
        (1.0, 1.0, 0.5),
        (2.0, 1.0, 1.0),
        (4.0, 3.0, 0.05),
        (0.7, 2.5, 0.8),
        (5.5, 0.5, 0.3),
        (2.5, 1.5, 1.3),
    ]
    .iter()
    .map(|&(k, m, d)| GKLink::new(k, m, d, ALPHA).unwrap())
    .collect()
}

fn asymmetric_hops() -> Vec<HopChannels> {
    vec![
        table1_hop(0.05),
        hop(2.0, 1.0, 0.5, 4.0, 3.0, 0.3),
        hop(0.8, 2.2, 0.7, 1.5, 0.6, 0.9),
        hop(3.3, 1.7, 0.4, 2.0, 2.0, 1.2),
        hop(1.5, 4.5, 0.9, 6.0, 1.0, 0.5),
    ]
}

#[test]
fn link_validation_names_the_field() {
    let err = |r: Result<GKLink, Error>| match r {
        Err(Error::InvalidParameter { name, .. }) => name,
        other => panic!("expected an invalid-parameter error, got {other:?}"),
    };
    assert_eq!(err(GKLink::new(0.0, 1.0, 1.0, 4.0)), "k");
    assert_eq!(err(GKLink::new(1.0, 0.4, 1.0, 4.0)), "m");
    assert_eq!(err(GKLink::new(1.0, 1.0, 0.0, 4.0)), "d");
    assert_eq!(err(GKLink::new(1.0, 1.0, 1.0, 7.0)), "alpha");
    assert!(matches!(
        SystemParams::new(0.0, 1.0),
        Err(Error::InvalidParameter { name: "w_over_n0", .. })
    ));
    let l = GKLink::new(2.0, 1.0, 0.5, 4.0).unwrap();
    assert_eq!(l.omega(), 16.0);
    assert_eq!(l.with_distance(2.0).unwrap().omega(), 1.0 / 16.0);
}

#[test]
fn gk_pdf_is_normalised() {
    for l in links() {
        let total = half_line(|x| gk_power_pdf(&l, x).unwrap(), 1e-12);
        assert!((total - 1.0).abs() < 1e-8, "{l:?}: {total}");
    }
}

#[test]
fn gk_pdf_mean_and_limits() {
    let l = GKLink::new(2.0, 1.0, 1.0, ALPHA).unwrap();
    let mean = half_line(|x| x * gk_power_pdf(&l, x).unwrap(), 1e-12);
    assert!((mean - 1.0).abs() < 1e-6);
    // large k removes shadowing: Rayleigh power, density e^{-x}
    let l = GKLink::new(100.0, 1.0, 1.0, ALPHA).unwrap();
    assert!(rel(gk_power_pdf(&l, 1.0).unwrap(), (-1f64).exp()) < 0.02);
}

#[test]
fn gk_pdf_matches_meijer_form() {
    // f(x) = (km/Omega) G^{2,0}_{0,2}(km x/Omega | k-1, m-1) / (Gamma(k) Gamma(m))
    for l in links() {
        let s = l.k() * l.m() / l.omega();
        let norm = gkrelay::specfun::gamma(l.k()) * gkrelay::specfun::gamma(l.m());
        let spec = MeijerGSpec::new(2, 0, vec![], vec![l.k() - 1.0, l.m() - 1.0]).unwrap();
        for x in [0.01, 0.3, 2.0] {
            let x = x / s;
            let g = s * meijer_g(&spec, s * x, &EvalOptions::default()).unwrap() / norm;
            assert!(rel(gk_power_pdf(&l, x).unwrap(), g) < 1e-8, "{l:?} x={x}");
        }
    }
}

#[test]
fn ratio_pdf_is_normalised() {
    for h in asymmetric_hops() {
        for w_db in [0.0, 10.0] {
            let sys = sys_db(w_db, 20.0);
            let total = half_line(|x| snr_ratio_pdf(&h, &sys, x).unwrap(), 1e-10);
            assert!((total - 1.0).abs() < 1e-6, "{h:?} w={w_db}: {total}");
        }
    }
}

#[test]
fn ratio_of_iid_links() {
    let l = GKLink::new(2.5, 1.5, 0.7, ALPHA).unwrap();
    let h = HopChannels::new(l, l);
    let sys = SystemParams::new(1.0, 100.0).unwrap();
    let cdf1 = segment(|x| snr_ratio_pdf(&h, &sys, x).unwrap(), 0.0, 1.0);
    assert!((cdf1 - 0.5).abs() < 1e-6, "{cdf1}");
    // X/Y and Y/X share a law: f(1/x) = x^2 f(x)
    for x in [0.05, 0.4, 3.0, 17.0] {
        let lhs = snr_ratio_pdf(&h, &sys, 1.0 / x).unwrap();
        let rhs = x * x * snr_ratio_pdf(&h, &sys, x).unwrap();
        assert!(rel(lhs, rhs) < 1e-8, "x={x}");
    }
}

#[test]
fn ratio_pdf_scale_covariance() {
    let h = hop(0.8, 2.2, 0.7, 1.5, 0.6, 0.9);
    let s1 = SystemParams::new(3.0, 100.0).unwrap();
    let s2 = SystemParams::new(6.0, 100.0).unwrap();
    for x in [0.02, 0.5, 4.0, 60.0] {
        let a = snr_ratio_pdf(&h, &s2, x).unwrap();
        let b = snr_ratio_pdf(&h, &s1, x / 2.0).unwrap() / 2.0;
        assert!(rel(a, b) < 1e-9, "x={x}");
    }
}

#[test]
fn ratio_pdf_matches_histogram() {
    let h = table1_hop(0.05);
    let sys = SystemParams::new(1.0, 100.0).unwrap();
    let sampler = E2eSampler::new(&h, &h, &sys, [Regime::InterferenceLimited; 2]);
    let mut rng = RandomStream::new(11);
    let mut xs: Vec<f64> = (0..10_000_000).map(|_| sampler.sample(&mut rng).gamma1).collect();
    let t = chi_square(&mut xs, |x| snr_ratio_pdf(&h, &sys, x).unwrap(), 50);
    assert!(t.passes(), "chi2 = {} (critical {})", t.statistic, t.critical);
}

#[test]
fn mgf_limits_and_monotonicity() {
    // M(0+) = 1 with 0 <= 1 - M(s) <= s E[gamma]; for the Table-1 hops
    // E[gamma] = w (Omega_i/Omega_j) k_j m_j / ((k_j - 1)(m_j - 1))
    for dj in [0.05, 0.1, 0.3, 0.8] {
        let sys = sys_db(0.0, 20.0);
        let h = table1_hop(dj);
        let mean = h.data.omega() / h.interference.omega() * 12.0 / 6.0;
        let gap = 1.0 - snr_mgf(&h, &sys, 1e-6).unwrap();
        assert!((0.0..1e-4).contains(&gap) && gap <= 1e-6 * mean, "dj={dj}: {gap}");
    }
    for h in asymmetric_hops() {
        let sys = sys_db(5.0, 20.0);
        let mut prev = 1.0;
        for s in [1e-3, 0.01, 0.1, 0.5, 1.0, 5.0, 50.0, 1e3] {
            let m = snr_mgf(&h, &sys, s).unwrap();
            assert!(m > 0.0 && m < prev, "{h:?} s={s}");
            prev = m;
        }
    }
}

#[test]
fn mgf_matches_pdf_quadrature() {
    for h in asymmetric_hops() {
        let sys = SystemParams::new(1.0, 100.0).unwrap();
        for s in [0.3, 1.0, 4.0] {
            let quad = half_line(|x| (-s * x).exp() * snr_ratio_pdf(&h, &sys, x).unwrap(), 1e-12);
            let closed = snr_mgf(&h, &sys, s).unwrap();
            assert!(rel(closed, quad) < 1e-7, "{h:?} s={s}: {closed} vs {quad}");
        }
    }
}

fn central_difference<F: Fn(f64) -> f64>(f: F, s: f64) -> f64 {
    let h = 1e-6 * s;
    (f(s + h) - f(s - h)) / (2.0 * h)
}

#[test]
fn mgf_derivative_matches_finite_difference() {
    for h in asymmetric_hops() {
        let sys = SystemParams::new(1.0, 100.0).unwrap();
        for s in [0.5, 1.0, 5.0] {
            let fd = central_difference(|s| snr_mgf(&h, &sys, s).unwrap(), s);
            let d = snr_mgf_derivative(&h, &sys, s).unwrap();
            assert!(d < 0.0);
            assert!(rel(d, fd) < 1e-5, "{h:?} s={s}: {d} vs {fd}");
        }
        let far = snr_mgf_derivative(&h, &sys, 1e8).unwrap();
        assert!(far < 0.0 && far > -1e-6);
    }
}

#[test]
fn pmax_mgf_matches_quadrature() {
    let l = GKLink::new(1.0, 1.0, 1.0, ALPHA).unwrap();
    let sys = SystemParams::new(1.0, 100.0).unwrap();
    let p = sys.pmax_over_n0();
    let quad = half_line(|x| (-x).exp() * gk_power_pdf(&l, x / p).unwrap() / p, 1e-12);
    assert!(rel(snr_mgf_pmax(&l, &sys, 1.0).unwrap(), quad) < 1e-7);
    for l in links() {
        // 0 <= 1 - M(s) <= s E[gamma], E[gamma] = (P_max/N0) Omega
        let gap = 1.0 - snr_mgf_pmax(&l, &sys, 1e-6).unwrap();
        assert!(gap >= 0.0 && gap <= 1e-6 * p * l.omega(), "{l:?}: {gap}");
        if p * l.omega() <= 100.0 {
            assert!(gap < 1e-4);
        }
        let mut prev = 1.0;
        for s in [1e-4, 0.01, 0.2, 1.0, 10.0, 1e3, 1e6] {
            let m = snr_mgf_pmax(&l, &sys, s).unwrap();
            assert!(m > 0.0 && m < prev, "{l:?} s={s}");
            prev = m;
            let quad = half_line(|x| (-s * x).exp() * gk_power_pdf(&l, x / p).unwrap() / p, 1e-12);
            assert!(rel(m, quad) < 1e-7, "{l:?} s={s}: {m} vs {quad}");
        }
    }
}

#[test]
fn pmax_mgf_derivative() {
    let sys = SystemParams::new(1.0, 100.0).unwrap();
    for l in links() {
        for s in [0.2, 1.0, 10.0] {
            let fd = central_difference(|s| snr_mgf_pmax(&l, &sys, s).unwrap(), s);
            let d = snr_mgf_derivative_pmax(&l, &sys, s).unwrap();
            assert!(d < 0.0);
            assert!(rel(d, fd) < 1e-5, "{l:?} s={s}: {d} vs {fd}");
        }
    }
    // -M'(0+) = E[gamma] = (P_max/N0) Omega
    let l = GKLink::new(2.5, 1.5, 1.3, ALPHA).unwrap();
    let sys = SystemParams::new(1.0, 10.0).unwrap();
    let d = snr_mgf_derivative_pmax(&l, &sys, 1e-4).unwrap();
    assert!(rel(-d, 10.0 * l.omega()) < 0.01);
}

#[test]
fn pmax_reference_values() {
    // arbitrary-precision evaluation of the defining expectation
    let l = GKLink::new(2.5, 1.5, 1.3f64.powf(-0.25), ALPHA).unwrap();
    let sys = SystemParams::new(1.0, 100.0).unwrap();
    assert!(rel(snr_mgf_pmax(&l, &sys, 0.7).unwrap(), 0.005_315_243_664_992_8) < 1e-9);
    assert!(
        rel(
            snr_mgf_derivative_pmax(&l, &sys, 0.7).unwrap(),
            -0.010_474_373_030_652_5
        ) < 1e-9
    );
}

#[test]
fn sampler_mean_and_determinism() {
    let l = GKLink::new(2.0, 1.5, 0.8, ALPHA).unwrap();
    let s = GKSampler::new(&l);
    let mut rng = RandomStream::new(3);
    let n = 10_000_000;
    let mean = (0..n).map(|_| s.sample(&mut rng)).sum::<f64>() / n as f64;
    assert!(rel(mean, l.omega()) < 0.005, "{mean}");

    let draws = |seed| {
        let mut r = RandomStream::new(seed);
        (0..10).map(|_| sample_gk_power(&l, &mut r)).collect::<Vec<_>>()
    };
    assert_eq!(draws(42), draws(42));
    assert_ne!(draws(42), draws(43));
    let base = RandomStream::new(42);
    let mut a = base.split(0);
    let mut b = base.split(1);
    assert_ne!(sample_gk_power(&l, &mut a), sample_gk_power(&l, &mut b));
}

#[test]
fn sampler_matches_pdf() {
    let l = GKLink::new(2.0, 1.5, 0.8, ALPHA).unwrap();
    let s = GKSampler::new(&l);
    let mut rng = RandomStream::new(5);
    let mut xs: Vec<f64> = (0..1_000_000).map(|_| s.sample(&mut rng)).collect();
    let d = ks_statistic(&mut xs, |x| gk_power_pdf(&l, x).unwrap());
    assert!(d < 1e-3, "KS = {d}");
}

#[test]
fn e2e_snr_properties() {
    assert!((e2e_snr(1.0, 1.0) - 1.0 / 3.0).abs() < 1e-15);
    let h1 = table1_hop(0.3);
    let h2 = hop(2.0, 1.0, 0.5, 4.0, 3.0, 0.8);
    let sys = sys_db(10.0, 20.0);
    for regimes in [
        [Regime::InterferenceLimited; 2],
        [Regime::PmaxLimited, Regime::InterferenceLimited],
    ] {
        let sampler = E2eSampler::new(&h1, &h2, &sys, regimes);
        let mut rng = RandomStream::new(9);
        for _ in 0..10_000 {
            let d = sampler.sample(&mut rng);
            assert!(d.e2e() < d.gamma1.min(d.gamma2));
        }
    }
    let mut a = RandomStream::new(1);
    let mut b = RandomStream::new(1);
    let regimes = [Regime::InterferenceLimited; 2];
    assert_eq!(
        sample_e2e_snr(&h1, &h2, &sys, regimes, &mut a),
        sample_e2e_snr(&h1, &h2, &sys, regimes, &mut b)
    );
}
