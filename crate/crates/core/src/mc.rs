//! Seeded, stream-split uniform Monte Carlo integration.
//!
//! Sampling is partitioned into independent streams, one RNG per stream
//! derived from the master seed by a fixed splitting rule, and stream
//! results are merged in index order. For a given (seed, worker count) the
//! result is bit-identical no matter how the streams are scheduled.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Clone, Copy, Debug)]
pub struct McConfig {
    pub samples: u64,
    pub workers: u32,
    pub seed: u64,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self { samples, workers: 1, seed }
    }

    pub fn with_workers(mut self, workers: u32) -> Self {
        self.workers = workers.max(1);
        self
    }
}

/// SplitMix64 step, the fixed seed-splitting rule.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// RNG for one stream of a master seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ stream.wrapping_mul(0x2545_f491_4f6c_dd1d)))
}

#[derive(Clone, Copy, Debug, Default)]
struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Order-fixed parallel merge.
    fn merge(self, other: Welford) -> Welford {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2
            + other.m2
            + delta * delta * self.count as f64 * other.count as f64 / count as f64;
        Welford { count, mean, m2 }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Sample mean of `f` over uniform draws from the product of `bounds`.
/// The estimate of the integral is `mean * volume`.
pub fn sample_mean<F>(bounds: &[(f64, f64)], cfg: McConfig, f: F) -> McEstimate
where
    F: Fn(&[f64], &mut ChaCha8Rng) -> f64 + Sync,
{
    let workers = cfg.workers.max(1) as u64;
    let per_stream = cfg.samples.div_ceil(workers);
    let stats: Vec<Welford> = (0..workers)
        .into_par_iter()
        .map(|stream| {
            let mut rng = stream_rng(cfg.seed, stream);
            let mut acc = Welford::default();
            let mut point = vec![0.0f64; bounds.len()];
            for _ in 0..per_stream {
                for (k, &(lo, hi)) in bounds.iter().enumerate() {
                    point[k] = rng.random_range(lo..hi);
                }
                acc.push(f(&point, &mut rng));
            }
            acc
        })
        .collect();
    let total = stats.into_iter().fold(Welford::default(), Welford::merge);
    let stderr = if total.count > 1 {
        (total.m2 / (total.count as f64 - 1.0) / total.count as f64).sqrt()
    } else {
        f64::INFINITY
    };
    McEstimate { mean: total.mean, stderr, samples: total.count }
}

/// Integral of `f` over the box given by `bounds`, with the statistical
/// error scaled by the volume.
pub fn integrate_uniform<F>(bounds: &[(f64, f64)], cfg: McConfig, f: F) -> McEstimate
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let volume: f64 = bounds.iter().map(|&(lo, hi)| hi - lo).product();
    let est = sample_mean(bounds, cfg, |x, _| f(x));
    McEstimate { mean: est.mean * volume, stderr: est.stderr * volume, samples: est.samples }
}
