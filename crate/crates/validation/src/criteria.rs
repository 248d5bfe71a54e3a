use std::time::Instant;

use gkrelay::capacity::{
    cross_term_integrand, ergodic_capacity, pmax_distance_threshold, CapacityResult, CrossTermRule, Scenario,
};
use gkrelay::channel::{
    snr_mgf, snr_mgf_derivative, snr_mgf_derivative_pmax, snr_mgf_pmax, snr_ratio_pdf, E2eSampler, GKLink, HopChannels,
    RandomStream, Regime, SystemParams,
};
use gkrelay::integrate::{integrate_log_axis, Tolerance};
use gkrelay::montecarlo::{estimate_all, estimate_capacity, MCConfig, MCEstimate};
use gkrelay::specfun::{bessel_k, gc_nodes_weights, meijer_g, whittaker_w, EvalOptions, MeijerGSpec, Strategy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::{central_difference, chi_square, half_line, rel};
use crate::table::{self, Count};
use crate::{Report, SuiteConfig};

/// Collects sub-check outcomes and detail lines of one criterion.
struct Check {
    start: Instant,
    passed: bool,
    details: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self {
            start: Instant::now(),
            passed: true,
            details: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, line: String) {
        self.passed &= ok;
        self.details
            .push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, line: String) {
        self.details.push(format!("info {line}"));
    }

    fn finish(self, id: u8, title: &'static str, summary: String) -> Report {
        Report {
            id,
            title,
            passed: self.passed,
            summary,
            details: self.details,
            elapsed: self.start.elapsed(),
        }
    }
}

/// Monte Carlo settings of grid cell `cell`; each cell draws from its own
/// seed so that estimates of different cells are independent.
fn mc_config(cfg: &SuiteConfig, cell: u64) -> MCConfig {
    MCConfig::new(cfg.mc_samples, cfg.seed.wrapping_add(cell)).expect("suite sample count is at least 1000")
}

fn tight_cross_term(scn: &Scenario) -> Option<f64> {
    integrate_log_axis(
        |s| cross_term_integrand(scn, s).unwrap_or(f64::NAN),
        -60.0,
        6.0,
        Tolerance {
            abs: 0.0,
            rel: 1e-12,
            max_subdivisions: 20_000,
        },
    )
    .ok()
    .map(|r| r.value)
}

/// Criterion 1: Convergence counts of the reference grid.
pub fn convergence_table(_cfg: &SuiteConfig) -> Report {
    const RUNTIME_LIMIT_S: f64 = 60.0;
    let mut check = Check::new();
    let counts = match table::convergence_counts() {
        Ok(c) => c,
        Err(e) => {
            check.require(false, format!("convergence study failed: {e}"));
            return check.finish(1, "convergence table", "evaluation error".into());
        }
    };
    let elapsed = check.start.elapsed().as_secs_f64();
    let mut matched = 0;
    for (r, c, dj, w) in table::cells() {
        let reference = table::REFERENCE_COUNTS[r][c];
        let count = counts[r][c];
        let ok = count.within_tolerance(reference);
        matched += ok as usize;
        let delta = match count {
            Count::Converged(n) => format!("{:+}", n as i64 - reference as i64),
            Count::NotConverged => "n/a".into(),
        };
        check.require(
            ok,
            format!("d_j = {dj:<4} w = {w:>4} dB: N = {count:>4}  reference {reference}  delta {delta}"),
        );
    }
    let monotone = table::is_monotone(&counts);
    check.require(monotone, "counts non-decreasing along rows and columns".into());
    check.require(
        elapsed < RUNTIME_LIMIT_S,
        format!("runtime {elapsed:.1} s (target < {RUNTIME_LIMIT_S} s)"),
    );
    check.finish(
        1,
        "convergence table",
        format!(
            "{matched}/12 cells within +-{} terms, monotone: {monotone}",
            table::COUNT_TOLERANCE
        ),
    )
}

/// Criterion 2: Distance threshold at `w/N0 = -3 dB`, `P_max/N0 = 0 dB`.
pub fn distance_threshold(_cfg: &SuiteConfig) -> Report {
    let mut check = Check::new();
    let sys = SystemParams::from_db(-3.0, 0.0).expect("valid system parameters");
    let t = pmax_distance_threshold(&sys, 4.0);
    check.require(
        (t - 1.19).abs() <= 0.005,
        format!("threshold {t:.6} km vs 1.19 +- 0.005"),
    );
    check.finish(2, "distance threshold", format!("{t:.4} km"))
}

/// Criterion 3: Capacity vs Monte Carlo on the `w/N0` x `d_j` grid.
pub fn closed_form_vs_monte_carlo(cfg: &SuiteConfig) -> Report {
    let mut check = Check::new();
    let w_grid = [0.0, 5.0, 10.0, 15.0];
    let d_grid = [0.05, 0.5];
    let mut totals = [[f64::NAN; 4]; 2];
    let mut agree = 0;
    let mut worst: f64 = 0.0;
    for (r, &dj) in d_grid.iter().enumerate() {
        for (c, &w) in w_grid.iter().enumerate() {
            let scn = table::scenario(dj, w);
            let mc = mc_config(cfg, (4 * r + c) as u64);
            let (closed, estimate) = match (ergodic_capacity(&scn), estimate_capacity(&scn, &mc)) {
                (Ok(a), Ok(b)) => (a, b),
                (a, b) => {
                    check.require(false, format!("d_j = {dj} w = {w} dB: evaluation error {a:?} {b:?}"));
                    continue;
                }
            };
            totals[r][c] = closed.total;
            let tol = (0.01 * estimate.mean.abs()).max(3.0 * estimate.std_error);
            let diff = (closed.total - estimate.mean).abs();
            worst = worst.max(diff / tol);
            agree += (diff <= tol) as usize;
            check.require(
                diff <= tol,
                format!(
                    "d_j = {dj:<4} w = {w:>4} dB: closed {:.6e}  MC {:.6e} +- {:.1e}  |diff| / tol = {:.2}",
                    closed.total,
                    estimate.mean,
                    estimate.std_error,
                    diff / tol
                ),
            );
            if let Ok(adaptive) = ergodic_capacity(&scn.with_cross_term(CrossTermRule::Adaptive)) {
                check.note(format!(
                    "d_j = {dj:<4} w = {w:>4} dB: with the adaptive cross term {:.6e}  |diff| / tol = {:.2}",
                    adaptive.total,
                    (adaptive.total - estimate.mean).abs() / tol
                ));
            }
        }
    }
    let increasing_w = totals.iter().all(|row| row.windows(2).all(|p| p[1] > p[0]));
    let increasing_d = (0..4).all(|c| totals[1][c] > totals[0][c]);
    check.require(increasing_w, "capacity increases with w/N0 for each d_j".into());
    check.require(increasing_d, "capacity increases with d_j for each w/N0".into());
    check.finish(
        3,
        "closed form vs Monte Carlo",
        format!("{agree}/8 cells agree (worst |diff|/tol {worst:.2}), trends w: {increasing_w}, d_j: {increasing_d}"),
    )
}

fn component_line(name: &str, closed: f64, est: &MCEstimate) -> (bool, String) {
    let z = est.z_score(closed);
    (
        z <= 3.0,
        format!(
            "{name}: closed {closed:.6e}  MC {:.6e} +- {:.1e}  z = {z:.2}",
            est.mean, est.std_error
        ),
    )
}

/// Criterion 4: Each capacity component vs its Monte Carlo estimate on the grid.
pub fn component_monte_carlo(cfg: &SuiteConfig) -> Report {
    let mut check = Check::new();
    let mut agree = [0usize; 3];
    for (r, c, dj, w) in table::cells() {
        let scn = table::scenario(dj, w);
        let mc = mc_config(cfg, (3 * r + c) as u64);
        let (closed, summary) = match (ergodic_capacity(&scn), estimate_all(&scn, &mc)) {
            (Ok(a), Ok(b)) => (a, b),
            (a, b) => {
                check.require(false, format!("d_j = {dj} w = {w} dB: evaluation error {a:?} {b:?}"));
                continue;
            }
        };
        let lines = [
            component_line("C1", closed.c1, &summary.c1),
            component_line("C2", closed.c2, &summary.c2),
            component_line("C12", closed.c12, &summary.c12),
        ];
        for (i, (ok, line)) in lines.into_iter().enumerate() {
            agree[i] += ok as usize;
            check.require(ok, format!("d_j = {dj:<4} w = {w:>4} dB {line}"));
        }
    }
    check.finish(
        4,
        "component-wise Monte Carlo",
        format!(
            "within 3 std errors: C1 {}/12, C2 {}/12, C12 {}/12",
            agree[0], agree[1], agree[2]
        ),
    )
}

/// Criterion 5: Gauss–Chebyshev cross term vs adaptive integration on the grid.
pub fn quadrature_fidelity(_cfg: &SuiteConfig) -> Report {
    const TOLERANCE: f64 = 1e-4;
    let mut check = Check::new();
    let mut agree = 0;
    let mut worst: f64 = 0.0;
    for (_, _, dj, w) in table::cells() {
        let scn = table::scenario(dj, w);
        let (gc, direct) = match (ergodic_capacity(&scn), tight_cross_term(&scn)) {
            (Ok(r), Some(d)) => (r.c12, d),
            (r, d) => {
                check.require(false, format!("d_j = {dj} w = {w} dB: evaluation error {r:?} {d:?}"));
                continue;
            }
        };
        let diff = (gc - direct).abs();
        worst = worst.max(diff);
        agree += (diff < TOLERANCE) as usize;
        check.require(
            diff < TOLERANCE,
            format!("d_j = {dj:<4} w = {w:>4} dB: N = 60 {gc:.8e}  adaptive {direct:.8e}  |diff| {diff:.2e}"),
        );
    }
    check.finish(
        5,
        "quadrature fidelity",
        format!("{agree}/12 cells within {TOLERANCE:e} bits/s/Hz (worst {worst:.2e})"),
    )
}

fn asymmetric_hops() -> Vec<HopChannels> {
    let hop = |ki, mi, di, kj, mj, dj| {
        HopChannels::new(
            GKLink::new(ki, mi, di, table::ALPHA).expect("valid link"),
            GKLink::new(kj, mj, dj, table::ALPHA).expect("valid link"),
        )
    };
    vec![
        table::hop(0.05),
        hop(2.0, 1.0, 0.5, 4.0, 3.0, 0.3),
        hop(0.8, 2.2, 0.7, 1.5, 0.6, 0.9),
        hop(3.3, 1.7, 0.4, 2.0, 2.0, 1.2),
        hop(1.5, 4.5, 0.9, 6.0, 1.0, 0.5),
    ]
}

/// Criterion 6: Ratio density, MGF and MGF derivatives vs independent oracles.
pub fn density_and_mgf_oracles(cfg: &SuiteConfig) -> Report {
    let mut check = Check::new();
    let sys = SystemParams::new(1.0, 100.0).expect("valid system parameters");
    let (mut worst_norm, mut worst_mgf, mut worst_fd): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut chi_ok = 0;
    for (idx, hop) in asymmetric_hops().iter().enumerate() {
        let pdf = |x: f64| snr_ratio_pdf(hop, &sys, x).unwrap_or(f64::NAN);
        // (a) normalization and histogram
        let norm = half_line(pdf, 1e-12).map_or(f64::INFINITY, |v| (v - 1.0).abs());
        worst_norm = worst_norm.max(norm);
        check.require(norm < 1e-6, format!("(a) set {idx}: |int f - 1| = {norm:.2e}"));
        let sampler = E2eSampler::new(hop, hop, &sys, [Regime::InterferenceLimited; 2]);
        let mut rng = RandomStream::new(cfg.seed).split(idx as u64);
        let mut xs: Vec<f64> = (0..cfg.histogram_samples)
            .map(|_| sampler.sample(&mut rng).gamma1)
            .collect();
        let t = chi_square(&mut xs, pdf, 50);
        let ok = t.statistic < t.critical;
        chi_ok += ok as usize;
        check.require(
            ok,
            format!(
                "(a) set {idx}: chi2 = {:.1} (5% critical {:.1}, {} draws)",
                t.statistic,
                t.critical,
                xs.len()
            ),
        );
        // (b) MGF vs quadrature of the density
        for s in [0.3, 1.0, 4.0] {
            let quad = half_line(|x| (-s * x).exp() * pdf(x), 1e-12).unwrap_or(f64::NAN);
            let err = snr_mgf(hop, &sys, s).map_or(f64::INFINITY, |m| rel(m, quad));
            worst_mgf = worst_mgf.max(err);
            check.require(err < 1e-7, format!("(b) set {idx} s = {s}: relative error {err:.2e}"));
        }
        // (c) derivative vs central difference
        for s in [0.5, 1.0, 5.0] {
            let fd = central_difference(|s| snr_mgf(hop, &sys, s).unwrap_or(f64::NAN), s);
            let err = snr_mgf_derivative(hop, &sys, s).map_or(f64::INFINITY, |d| rel(d, fd));
            worst_fd = worst_fd.max(err);
            check.require(err < 1e-5, format!("(c) set {idx} s = {s}: relative error {err:.2e}"));
        }
    }
    let links = [(1.0, 1.0, 1.0), (2.5, 1.5, 0.7), (0.8, 3.0, 1.3), (4.0, 2.0, 0.5)];
    for (k, m, d) in links {
        let link = GKLink::new(k, m, d, table::ALPHA).expect("valid link");
        for s in [0.2, 1.0, 10.0] {
            let fd = central_difference(|s| snr_mgf_pmax(&link, &sys, s).unwrap_or(f64::NAN), s);
            let err = snr_mgf_derivative_pmax(&link, &sys, s).map_or(f64::INFINITY, |v| rel(v, fd));
            worst_fd = worst_fd.max(err);
            check.require(
                err < 1e-5,
                format!("(c) P_max link k={k} m={m} d={d} s = {s}: relative error {err:.2e}"),
            );
        }
    }
    check.note("(c) the P_max derivative uses the prefactor k m of the differentiated link".into());
    check.finish(
        6,
        "density and MGF oracles",
        format!("normalization {worst_norm:.1e}, chi2 {chi_ok}/5, MGF {worst_mgf:.1e}, derivatives {worst_fd:.1e}"),
    )
}

/// Parameter patterns produced by the capacity formulas.
fn formula_spec(class: usize, ki: f64, mi: f64, kj: f64, mj: f64) -> MeijerGSpec {
    let (delta, theta) = (0.5 * (ki + mi), 0.5 * (ki - mi));
    let (m, n, a, b) = match class {
        0 => (2, 2, vec![1.0 - delta - kj, 1.0 - delta - mj], vec![theta, -theta]),
        1 => (
            2,
            3,
            vec![1.0 - delta, 1.0 - delta - kj, 1.0 - delta - mj],
            vec![theta, -theta],
        ),
        2 => (
            4,
            3,
            vec![1.0 - delta - kj, 1.0 - delta - mj, -delta, 1.0 - delta],
            vec![theta, -theta, -delta, -delta],
        ),
        3 => (4, 1, vec![-delta, 1.0 - delta], vec![theta, -theta, -delta, -delta]),
        _ => (2, 0, vec![], vec![theta, -theta]),
    };
    MeijerGSpec::new(m, n, a, b).expect("supported class")
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

/// Criterion 7: Special-function identities and strategy agreement.
pub fn kernel_identities(cfg: &SuiteConfig) -> Report {
    let mut check = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let b = rng.random_range(-3.0..3.0);
        let z = log_uniform(&mut rng, 1e-3, 1e2);
        let spec = MeijerGSpec::new(2, 0, vec![], vec![b, -b]).expect("supported class");
        let err = match (
            meijer_g(&spec, z, &EvalOptions::default()),
            bessel_k(2.0 * b, 2.0 * z.sqrt()),
        ) {
            (Ok(g), Ok(k)) => rel(g, 2.0 * k),
            _ => f64::INFINITY,
        };
        worst = worst.max(err);
    }
    check.require(
        worst < 1e-10,
        format!("Meijer-G vs Bessel K, 50 draws: worst relative error {worst:.2e}"),
    );

    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let mu = rng.random_range(-2.5..2.5);
        let z = log_uniform(&mut rng, 1e-2, 50.0);
        let elementary =
            whittaker_w(mu + 0.5, mu, z).map_or(f64::INFINITY, |w| rel(w, z.powf(mu + 0.5) * (-0.5 * z).exp()));
        let bessel = match (whittaker_w(0.0, mu, z), bessel_k(mu, 0.5 * z)) {
            (Ok(w), Ok(k)) => rel(w, (z / std::f64::consts::PI).sqrt() * k),
            _ => f64::INFINITY,
        };
        worst = worst.max(elementary).max(bessel);
    }
    check.require(
        worst < 1e-9,
        format!("Whittaker W identities, 50 draws: worst relative error {worst:.2e}"),
    );

    let residue = EvalOptions::with_strategy(Strategy::ResidueSeries);
    let contour = EvalOptions::with_strategy(Strategy::ContourIntegration);
    let (mut agree, mut refused, mut worst): (usize, usize, f64) = (0, 0, 0.0);
    for draw in 0..100 {
        let [ki, mi, kj, mj] = std::array::from_fn(|_| rng.random_range(0.6..6.0));
        let z = log_uniform(&mut rng, 1e-3, 1e3);
        let spec = formula_spec(draw % 5, ki, mi, kj, mj);
        match (meijer_g(&spec, z, &residue), meijer_g(&spec, z, &contour)) {
            (Ok(r), Ok(c)) => {
                let err = rel(r, c);
                worst = worst.max(err);
                if err < 1e-8 {
                    agree += 1;
                } else {
                    check.note(format!("disagreement {err:.2e} for {:?} at z = {z:.4e}", spec.class()));
                }
            }
            (r, c) => {
                refused += 1;
                let reason = r.err().or(c.err()).map(|e| e.to_string()).unwrap_or_default();
                check.note(format!("no value for {:?} at z = {z:.4e}: {reason}", spec.class()));
            }
        }
    }
    check.require(
        agree == 100,
        format!(
            "residue series vs contour integration, 100 draws: {agree} agree, {refused} refused, worst {worst:.2e}"
        ),
    );

    let q = gc_nodes_weights(1);
    let exact =
        (q.nodes()[0] - 1.0).abs() < 1e-15 && (q.weights()[0] - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-14;
    check.require(
        exact,
        format!("order-1 rule: s = {}, psi = {}", q.nodes()[0], q.weights()[0]),
    );
    let summary = format!("residue/contour {agree}/100 agree");
    check.finish(7, "kernel identities", summary)
}

fn placement_curve(dj1: f64, dj2: f64, rule: CrossTermRule) -> Option<Vec<f64>> {
    let link = |d: f64| GKLink::new(2.0, 1.0, d, table::ALPHA).ok();
    let sys = SystemParams::from_db(10.0, 20.0).ok()?;
    (1..=19)
        .map(|i| {
            let d = 0.05 * i as f64;
            let scn = Scenario::new(
                HopChannels::new(link(d)?, link(dj1)?),
                HopChannels::new(link(1.0 - d)?, link(dj2)?),
                sys,
            )
            .with_cross_term(rule);
            ergodic_capacity(&scn).ok().map(|r: CapacityResult| r.total)
        })
        .collect()
}

fn argmax(curve: &[f64]) -> f64 {
    let i = (0..curve.len())
        .max_by(|&a, &b| curve[a].total_cmp(&curve[b]))
        .unwrap_or(0);
    0.05 * (i + 1) as f64
}

/// Criterion 8: Relay placement: asymmetric primary placement moves the optimum away
/// from the midpoint; symmetric placement gives a symmetric curve.
pub fn relay_placement(_cfg: &SuiteConfig) -> Report {
    let mut check = Check::new();
    let (Some(asym), Some(sym)) = (
        placement_curve(0.3, 0.7, CrossTermRule::GaussChebyshev),
        placement_curve(0.5, 0.5, CrossTermRule::GaussChebyshev),
    ) else {
        check.require(false, "evaluation error".into());
        return check.finish(8, "relay placement", "evaluation error".into());
    };
    let best = argmax(&asym);
    check.require(
        (best - 0.5).abs() > 1e-9,
        format!("primary near the source: argmax d = {best:.2}"),
    );
    let asymmetry = (0..19).map(|i| (sym[i] - sym[18 - i]).abs()).fold(0.0, f64::max);
    check.require(
        asymmetry < 1e-6,
        format!("symmetric placement: max |C(d) - C(1-d)| = {asymmetry:.2e}"),
    );
    let fmt = |c: &[f64]| c.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(" ");
    check.note(format!("curve, primary near the source: {}", fmt(&asym)));
    if let Some(adaptive) = placement_curve(0.3, 0.7, CrossTermRule::Adaptive) {
        check.note(format!(
            "adaptive cross term: argmax d = {:.2}; {}",
            argmax(&adaptive),
            fmt(&adaptive)
        ));
    }
    check.finish(
        8,
        "relay placement",
        format!("argmax {best:.2}, symmetry error {asymmetry:.1e}"),
    )
}
