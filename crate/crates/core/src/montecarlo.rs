//! Monte Carlo estimates of the capacity and its components from channel
//! draws.
//!
//! Draws are organised in shards of [`SHARD_LEN`] samples; shard `i` uses
//! lane `i` of the master [`RandomStream`]. Shards are accumulated
//! independently (in parallel) and merged in shard order, so an estimate
//! depends only on the seed and the sample count, never on the thread count
//! or on `batch_size`.

use rayon::prelude::*;

use crate::capacity::Scenario;
use crate::channel::{E2eSampler, RandomStream, SnrDraw};
use crate::error::{check, Result};

/// Samples per random-stream shard.
pub const SHARD_LEN: usize = 1 << 16;
/// Default sample count: keeps the standard error below 0.2% of the
/// capacity on typical scenarios.
pub const DEFAULT_SAMPLES: usize = 10_000_000;
/// Smallest accepted sample count.
pub const MIN_SAMPLES: usize = 1_000;
/// Default number of samples handed to one worker at a time.
pub const DEFAULT_BATCH_SIZE: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MCConfig {
    pub n_samples: usize,
    pub seed: u64,
    /// Work granularity; rounded up to whole shards. Does not affect results.
    pub batch_size: usize,
}

impl MCConfig {
    pub fn new(n_samples: usize, seed: u64) -> Result<Self> {
        let cfg = Self {
            n_samples,
            seed,
            batch_size: DEFAULT_BATCH_SIZE,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_batch_size(mut self, batch_size: usize) -> Result<Self> {
        self.batch_size = batch_size;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check(
            self.n_samples >= MIN_SAMPLES,
            "n_samples",
            self.n_samples as f64,
            "must be at least 1000",
        )?;
        check(
            self.batch_size >= 1,
            "batch_size",
            self.batch_size as f64,
            "must be at least 1",
        )
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n)`.
    pub std_error: f64,
    pub n: usize,
}

impl MCEstimate {
    /// `|mean - value|` in units of the standard error.
    pub fn z_score(&self, value: f64) -> f64 {
        (self.mean - value).abs() / self.std_error
    }
}

/// Streaming mean and variance (Welford), mergeable across shards.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    n: usize,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Combines two disjoint sample sets (Chan et al.).
    pub fn merge(&mut self, other: &Self) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.n as f64, other.n as f64);
        self.mean += delta * nb / n as f64;
        self.m2 += other.m2 + delta * delta * na * nb / n as f64;
        self.n = n;
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn estimate(&self) -> MCEstimate {
        MCEstimate {
            mean: self.mean,
            std_error: (self.variance() / self.n as f64).sqrt(),
            n: self.n,
        }
    }
}

/// Capacity component estimated by [`estimate_component`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    /// `E[log2(1 + gamma_1)]`.
    C1,
    /// `E[log2(1 + gamma_2)]`.
    C2,
    /// `E[log2(1 + gamma_1 + gamma_2)]`.
    C12,
}

impl Component {
    pub fn value(self, draw: &SnrDraw) -> f64 {
        let x = match self {
            Component::C1 => draw.gamma1,
            Component::C2 => draw.gamma2,
            Component::C12 => draw.gamma1 + draw.gamma2,
        };
        x.ln_1p() / std::f64::consts::LN_2
    }
}

/// `log2(1 + gamma_e2e) / 2` of one draw.
pub fn capacity_sample(draw: &SnrDraw) -> f64 {
    0.5 * draw.e2e().ln_1p() / std::f64::consts::LN_2
}

/// Estimates `E[f(draw)]` for each of the `K` functionals from one shared set
/// of draws.
pub fn estimate_with<const K: usize, F>(scn: &Scenario, cfg: &MCConfig, f: F) -> Result<[MCEstimate; K]>
where
    F: Fn(&SnrDraw) -> [f64; K] + Sync,
{
    cfg.validate()?;
    scn.validate()?;
    let sampler = E2eSampler::new(&scn.hop1, &scn.hop2, &scn.sys, scn.resolved_regimes());
    let master = RandomStream::new(cfg.seed);
    let shards = cfg.n_samples.div_ceil(SHARD_LEN);
    let per_task = cfg.batch_size.div_ceil(SHARD_LEN).max(1);
    let partial: Vec<[RunningStats; K]> = (0..shards)
        .into_par_iter()
        .with_min_len(per_task)
        .map(|shard| {
            let mut rng = master.split(shard as u64);
            let len = SHARD_LEN.min(cfg.n_samples - shard * SHARD_LEN);
            let mut stats = [RunningStats::default(); K];
            for _ in 0..len {
                let values = f(&sampler.sample(&mut rng));
                for (s, v) in stats.iter_mut().zip(values) {
                    s.push(v);
                }
            }
            stats
        })
        .collect();
    let mut total = [RunningStats::default(); K];
    for stats in &partial {
        for (t, s) in total.iter_mut().zip(stats) {
            t.merge(s);
        }
    }
    Ok(total.map(|s| s.estimate()))
}

/// Estimate of the capacity `E[log2(1 + gamma_e2e)] / 2`.
pub fn estimate_capacity(scn: &Scenario, cfg: &MCConfig) -> Result<MCEstimate> {
    let [c] = estimate_with(scn, cfg, |d| [capacity_sample(d)])?;
    Ok(c)
}

/// Estimate of one pre-halving capacity component.
pub fn estimate_component(scn: &Scenario, which: Component, cfg: &MCConfig) -> Result<MCEstimate> {
    let [c] = estimate_with(scn, cfg, |d| [which.value(d)])?;
    Ok(c)
}

/// Capacity and all three components from one shared set of draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCSummary {
    pub capacity: MCEstimate,
    pub c1: MCEstimate,
    pub c2: MCEstimate,
    pub c12: MCEstimate,
}

pub fn estimate_all(scn: &Scenario, cfg: &MCConfig) -> Result<MCSummary> {
    let [capacity, c1, c2, c12] = estimate_with(scn, cfg, |d| {
        [
            capacity_sample(d),
            Component::C1.value(d),
            Component::C2.value(d),
            Component::C12.value(d),
        ]
    })?;
    Ok(MCSummary { capacity, c1, c2, c12 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_sequential_push() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1 + 1e6).collect();
        let mut seq = RunningStats::default();
        xs.iter().for_each(|&x| seq.push(x));
        let mut a = RunningStats::default();
        let mut b = RunningStats::default();
        xs[..313].iter().for_each(|&x| a.push(x));
        xs[313..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert_eq!(a.count(), 1000);
        assert!((a.mean() - seq.mean()).abs() < 1e-9);
        assert!((a.variance() - seq.variance()).abs() < 1e-9 * seq.variance());
    }

    #[test]
    fn config_rejects_small_sample_counts() {
        assert!(MCConfig::new(999, 1).is_err());
        assert!(MCConfig::new(1000, 1).unwrap().with_batch_size(0).is_err());
    }
}
