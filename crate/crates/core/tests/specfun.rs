mod common;

use common::{rel, sys_db, table1_hop};
use gkrelay::channel::{snr_mgf, snr_mgf_derivative};
use gkrelay::specfun::{
    bessel_k, exp_integral_ei, gc_nodes_weights, meijer_g, whittaker_w, CoincidentPoles, EvalOptions, MeijerGSpec,
    Strategy,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// One of the parameter patterns the capacity formulas generate, built from
/// random link shapes.
fn formula_spec(class: usize, ki: f64, mi: f64, kj: f64, mj: f64) -> MeijerGSpec {
    let (delta, theta) = (0.5 * (ki + mi), 0.5 * (ki - mi));
    let (a, m, n, b) = match class {
        0 => (vec![1.0 - delta - kj, 1.0 - delta - mj], 2, 2, vec![theta, -theta]),
        1 => (
            vec![1.0 - delta, 1.0 - delta - kj, 1.0 - delta - mj],
            2,
            3,
            vec![theta, -theta],
        ),
        2 => (
            vec![1.0 - delta - kj, 1.0 - delta - mj, -delta, 1.0 - delta],
            4,
            3,
            vec![theta, -theta, -delta, -delta],
        ),
        3 => (vec![-delta, 1.0 - delta], 4, 1, vec![theta, -theta, -delta, -delta]),
        _ => (vec![], 2, 0, vec![theta, -theta]),
    };
    MeijerGSpec::new(m, n, a, b).unwrap()
}

#[test]
fn bessel_identity_on_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let b = rng.random_range(-3.0..3.0);
        let z = log_uniform(&mut rng, 1e-3, 1e2);
        let spec = MeijerGSpec::new(2, 0, vec![], vec![b, -b]).unwrap();
        let g = meijer_g(&spec, z, &EvalOptions::default()).unwrap();
        let k = 2.0 * bessel_k(2.0 * b, 2.0 * z.sqrt()).unwrap();
        assert!(rel(g, k) < 1e-10, "b={b} z={z}: {g} vs {k}");
    }
}

/// Where the residue series answers, it agrees with contour integration;
/// where cancellation makes it untrustworthy it refuses instead of returning
/// a wrong value, and the automatic strategy still agrees everywhere.
#[test]
fn residue_series_agrees_or_refuses_and_auto_always_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let residue = EvalOptions::with_strategy(Strategy::ResidueSeries);
    let contour = EvalOptions::with_strategy(Strategy::ContourIntegration);
    let auto = EvalOptions::default();
    let mut refused = 0;
    for draw in 0..100 {
        let [ki, mi, kj, mj] = std::array::from_fn(|_| rng.random_range(0.6..6.0));
        let z = log_uniform(&mut rng, 1e-3, 1e3);
        let spec = formula_spec(draw % 5, ki, mi, kj, mj);
        let c = meijer_g(&spec, z, &contour).unwrap_or_else(|e| panic!("{spec:?} z={z}: {e}"));
        let a = meijer_g(&spec, z, &auto).unwrap_or_else(|e| panic!("{spec:?} z={z}: {e}"));
        assert!(rel(a, c) < 1e-8, "auto {spec:?} z={z}: {a} vs {c}");
        match meijer_g(&spec, z, &residue) {
            Ok(r) => assert!(rel(r, c) < 1e-8, "residue {spec:?} z={z}: {r} vs {c}"),
            Err(e) => {
                assert!(e.to_string().contains("ill-conditioned"), "{spec:?} z={z}: {e}");
                refused += 1;
            }
        }
    }
    println!("residue series refused {refused} of 100 draws");
}

#[test]
fn argument_inversion_on_the_mgf_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let [ki, mi, kj, mj] = std::array::from_fn(|_| rng.random_range(0.6..6.0));
        let z = log_uniform(&mut rng, 1e-2, 1e2);
        let spec = formula_spec(1, ki, mi, kj, mj);
        let direct = meijer_g(&spec, z, &EvalOptions::default()).unwrap();
        let inverted = meijer_g(&spec.inverted(), 1.0 / z, &EvalOptions::default()).unwrap();
        assert!(rel(direct, inverted) < 1e-9, "{spec:?} z={z}: {direct} vs {inverted}");
    }
}

#[test]
fn whittaker_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let mu = rng.random_range(-2.5..2.5);
        let z = log_uniform(&mut rng, 1e-2, 50.0);
        let w = whittaker_w(mu + 0.5, mu, z).unwrap();
        let exact = z.powf(mu + 0.5) * (-0.5 * z).exp();
        assert!(rel(w, exact) < 1e-9, "mu={mu} z={z}: {w} vs {exact}");
        let w0 = whittaker_w(0.0, mu, z).unwrap();
        let bessel = (z / std::f64::consts::PI).sqrt() * bessel_k(mu, 0.5 * z).unwrap();
        assert!(rel(w0, bessel) < 1e-9, "mu={mu} z={z}: {w0} vs {bessel}");
    }
}

#[test]
fn gauss_chebyshev_order_one() {
    let q = gc_nodes_weights(1);
    assert_eq!(q.nodes().len(), 1);
    assert!((q.nodes()[0] - 1.0).abs() < 1e-15);
    assert!((q.weights()[0] - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-14);
}

#[test]
fn gauss_chebyshev_converges_on_the_mgf_product() {
    let (hop, sys) = (table1_hop(0.05), sys_db(0.0, 20.0));
    let sum = |n: usize| -> f64 {
        gc_nodes_weights(n)
            .iter()
            .map(|(s, psi)| {
                let (m, dm) = (
                    snr_mgf(&hop, &sys, s).unwrap(),
                    snr_mgf_derivative(&hop, &sys, s).unwrap(),
                );
                psi * exp_integral_ei(-s).unwrap() * 2.0 * m * dm
            })
            .sum()
    };
    let (a, b) = (sum(60), sum(120));
    assert!((a - b).abs() < 1e-6, "{a} vs {b}");
}

#[test]
fn gauss_chebyshev_rate_on_the_logarithmic_endpoint() {
    // int_0^inf Ei(-s) ds = -1; the ln s endpoint singularity limits the rule
    // to algebraic convergence.
    let sum = |n: usize| -> f64 {
        gc_nodes_weights(n)
            .iter()
            .map(|(s, psi)| psi * exp_integral_ei(-s).unwrap())
            .sum()
    };
    let err = |n: usize| (sum(n) + 1.0).abs();
    assert!(err(60) < 1e-3);
    assert!(err(400) < 3e-5);
    let order = (err(50) / err(200)).log2() / 2.0;
    assert!((1.5..2.5).contains(&order), "observed order {order}");
}

#[test]
fn perturbation_is_stable_near_coincident_poles() {
    // 2 Theta within 1e-8 of an integer: the perturbation path must not
    // depend on the size of the shift beyond 1e-6.
    let perturb = |eps: f64| EvalOptions {
        pole_epsilon: eps,
        coincident_poles: CoincidentPoles::Perturb,
        ..EvalOptions::default()
    };
    let confluent = EvalOptions::default();
    for (ki, mi, kj, mj) in [
        (2.0 + 1e-8, 1.0, 4.0, 3.0),
        (1.5, 1.5, 4.0, 3.0),
        (3.0, 1.0 + 2e-8, 2.0, 2.5),
    ] {
        for class in 0..4 {
            let spec = formula_spec(class, ki, mi, kj, mj);
            for z in [0.05, 0.7, 6.0] {
                let a = meijer_g(&spec, z, &perturb(1e-5)).unwrap();
                let b = meijer_g(&spec, z, &perturb(5e-6)).unwrap();
                assert!(rel(a, b) < 1e-6, "{spec:?} z={z}: {a} vs {b}");
                let exact = meijer_g(&spec, z, &confluent).unwrap();
                assert!(rel(a, exact) < 1e-4, "{spec:?} z={z}: {a} vs {exact}");
            }
        }
    }
}
