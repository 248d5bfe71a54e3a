mod common;

use common::{hop, sys_db, table1_hop};
use gkrelay::capacity::{capacity_single_hop, ergodic_capacity, CrossTermRule, Scenario};
use gkrelay::channel::{E2eSampler, RandomStream};
use gkrelay::montecarlo::{
    capacity_sample, estimate_all, estimate_capacity, estimate_component, Component, MCConfig, SHARD_LEN,
};

fn asymmetric() -> Scenario {
    Scenario::new(
        hop(2.0, 1.0, 0.5, 4.0, 3.0, 0.3),
        hop(0.8, 2.2, 0.7, 1.5, 0.6, 0.9),
        sys_db(5.0, 20.0),
    )
}

fn table_scenario(dj: f64, w_db: f64) -> Scenario {
    Scenario::new(table1_hop(dj), table1_hop(dj), sys_db(w_db, 20.0))
}

#[test]
fn same_seed_gives_identical_estimates() {
    let cfg = MCConfig::new(200_000, 42).unwrap();
    let a = estimate_all(&asymmetric(), &cfg).unwrap();
    let b = estimate_all(&asymmetric(), &cfg).unwrap();
    assert_eq!(a, b);
    let other = estimate_all(&asymmetric(), &MCConfig::new(200_000, 43).unwrap()).unwrap();
    assert_ne!(a.capacity.mean, other.capacity.mean);
}

#[test]
fn batch_size_does_not_change_the_result() {
    let scn = asymmetric();
    let base = MCConfig::new(300_000, 3).unwrap();
    let reference = estimate_capacity(&scn, &base).unwrap();
    for batch in [SHARD_LEN, 3 * SHARD_LEN, 1 << 22] {
        let cfg = base.with_batch_size(batch).unwrap();
        assert_eq!(estimate_capacity(&scn, &cfg).unwrap(), reference, "batch {batch}");
    }
}

#[test]
fn standard_error_halves_when_samples_quadruple() {
    let scn = asymmetric();
    let small = estimate_capacity(&scn, &MCConfig::new(1_000_000, 8).unwrap()).unwrap();
    let large = estimate_capacity(&scn, &MCConfig::new(4_000_000, 8).unwrap()).unwrap();
    let ratio = large.std_error / small.std_error;
    assert!((ratio - 0.5).abs() < 0.05, "ratio {ratio}");
    assert_eq!(large.n, 4_000_000);
}

/// The streaming accumulator matches a two-pass mean and variance computed
/// from the same draws.
#[test]
fn streaming_statistics_match_two_pass() {
    let scn = asymmetric();
    let n = 1_000_000;
    let cfg = MCConfig::new(n, 17).unwrap();
    let sampler = E2eSampler::new(&scn.hop1, &scn.hop2, &scn.sys, scn.resolved_regimes());
    let master = RandomStream::new(17);
    let mut xs = Vec::with_capacity(n);
    for shard in 0..n.div_ceil(SHARD_LEN) {
        let mut rng = master.split(shard as u64);
        for _ in 0..SHARD_LEN.min(n - shard * SHARD_LEN) {
            xs.push(capacity_sample(&sampler.sample(&mut rng)));
        }
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let est = estimate_capacity(&scn, &cfg).unwrap();
    assert!(((est.mean - mean) / mean).abs() < 1e-10, "{} vs {mean}", est.mean);
    let se = (var / n as f64).sqrt();
    assert!(((est.std_error - se) / se).abs() < 1e-10, "{} vs {se}", est.std_error);
}

#[test]
fn first_hop_component_matches_the_closed_form() {
    for scn in [asymmetric(), table_scenario(0.3, 10.0)] {
        let closed = capacity_single_hop(&scn.hop1, &scn.sys).unwrap();
        let est = estimate_component(&scn, Component::C1, &MCConfig::new(2_000_000, 5).unwrap()).unwrap();
        assert!(est.z_score(closed) < 4.0, "closed {closed} vs {est:?}");
    }
}

#[test]
fn capacity_matches_the_adaptive_closed_form() {
    for (dj, w) in [(0.5, 10.0), (0.1, 15.0), (0.8, 0.0)] {
        let scn = table_scenario(dj, w).with_cross_term(CrossTermRule::Adaptive);
        let closed = ergodic_capacity(&scn).unwrap().total;
        let est = estimate_capacity(&scn, &MCConfig::new(2_000_000, 21).unwrap()).unwrap();
        assert!(
            est.z_score(closed) < 4.0,
            "d_j = {dj} w = {w}: closed {closed} vs {est:?}"
        );
    }
}

#[test]
fn component_estimates_respect_the_ordering_of_the_components() {
    let cfg = MCConfig::new(500_000, 9).unwrap();
    for scn in [asymmetric(), table_scenario(0.05, 0.0), table_scenario(0.8, 15.0)] {
        let s = estimate_all(&scn, &cfg).unwrap();
        // per draw: max(C1, C2) <= C12 <= C1 + C2, so the sample means obey it too
        assert!(s.c12.mean >= s.c1.mean.max(s.c2.mean));
        assert!(s.c12.mean <= s.c1.mean + s.c2.mean);
        // and the e2e capacity lies between zero and min(C1, C2) / 2
        assert!(s.capacity.mean >= 0.0);
        assert!(s.capacity.mean <= 0.5 * s.c1.mean.min(s.c2.mean) + 1e-12);
    }
}

#[test]
fn identical_hops_give_matching_component_estimates() {
    let scn = table_scenario(0.3, 10.0);
    let s = estimate_all(&scn, &MCConfig::new(1_000_000, 4).unwrap()).unwrap();
    let diff = (s.c1.mean - s.c2.mean).abs();
    let se = (s.c1.std_error.powi(2) + s.c2.std_error.powi(2)).sqrt();
    assert!(diff < 4.0 * se, "{diff} vs {se}");
}

#[test]
fn invalid_configurations_are_rejected() {
    assert!(MCConfig::new(10, 1).is_err());
    assert!(MCConfig::new(10_000, 1).unwrap().with_batch_size(0).is_err());
    let bad = table_scenario(0.3, 10.0).with_quadrature_order(0);
    assert!(estimate_capacity(&bad, &MCConfig::new(10_000, 1).unwrap()).is_err());
}
