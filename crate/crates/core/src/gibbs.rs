//! Metropolis sampling of the canonical Gibbs measure and histogram
//! estimators for one- and two-point correlation functions.
//!
//! The chain proposes single-particle displacements uniform in a cube,
//! wraps or rejects at the boundary according to the box, and emits
//! decorrelated snapshots every fixed number of sweeps. Multiple chains run
//! on split seeds and merge deterministically.

use rand::Rng;
use serde::Serialize;

use crate::mc;
use crate::potential::{BoundaryCondition, BoxSpec, PairPotential};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct ChainConfig<'a> {
    pub n: usize,
    pub bx: BoxSpec,
    pub potential: &'a PairPotential,
    pub beta: f64,
    /// Total sweeps (one sweep = N single-particle proposals).
    pub sweeps: usize,
    pub burn_in_sweeps: usize,
    /// Sweeps between emitted snapshots; defaults to 10 N.
    pub stride_sweeps: usize,
    pub move_width: f64,
    pub seed: u64,
}

impl<'a> ChainConfig<'a> {
    pub fn new(
        n: usize,
        bx: BoxSpec,
        potential: &'a PairPotential,
        beta: f64,
        sweeps: usize,
        seed: u64,
    ) -> Self {
        let width = if potential.range() > 0.0 { potential.range() } else { bx.ell / 10.0 };
        Self {
            n,
            bx,
            potential,
            beta,
            sweeps,
            burn_in_sweeps: (sweeps / 10).max(10),
            stride_sweeps: 10 * n,
            seed,
            move_width: width,
        }
    }

    pub fn with_stride(mut self, stride_sweeps: usize) -> Self {
        self.stride_sweeps = stride_sweeps.max(1);
        self
    }

    pub fn with_burn_in(mut self, burn_in_sweeps: usize) -> Self {
        self.burn_in_sweeps = burn_in_sweeps;
        self
    }

    pub fn with_move_width(mut self, width: f64) -> Self {
        self.move_width = width;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainOutput {
    /// Flat configurations, `dim` coordinates per particle.
    pub snapshots: Vec<Vec<f64>>,
    pub acceptance: f64,
    pub seed: u64,
}

impl ChainOutput {
    /// CSV rows `chain,step,q_1..q_N` (step counts emitted snapshots).
    pub fn snapshots_csv(&self, chain: usize) -> String {
        let mut out = String::from("chain,step,");
        let coords = self.snapshots.first().map_or(0, |s| s.len());
        out.push_str(
            &(1..=coords).map(|i| format!("q_{i}")).collect::<Vec<_>>().join(","),
        );
        out.push('\n');
        for (step, snap) in self.snapshots.iter().enumerate() {
            out.push_str(&format!("{chain},{step}"));
            for q in snap {
                out.push_str(&format!(",{q:.10e}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Evenly spaced starting configuration; errors when the lattice cannot
/// satisfy the hard core.
fn lattice_start(cfg: &ChainConfig) -> Result<Vec<f64>> {
    let d = cfg.bx.dim;
    let n = cfg.n;
    let per_side = (n as f64).powf(1.0 / d as f64).ceil() as usize;
    let spacing = cfg.bx.ell / per_side as f64;
    let mut config = Vec::with_capacity(n * d);
    let mut placed = 0;
    let mut idx = vec![0usize; d];
    while placed < n {
        for &i in idx.iter() {
            config.push(-cfg.bx.ell / 2.0 + (i as f64 + 0.5) * spacing);
        }
        placed += 1;
        let mut k = 0;
        while k < d {
            idx[k] += 1;
            if idx[k] < per_side {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
    let energy = crate::potential::total_energy(cfg.potential, &cfg.bx, &config);
    if !energy.is_finite() {
        return Err(Error::InvalidInput(
            "cannot place the starting lattice without overlaps".into(),
        ));
    }
    Ok(config)
}

fn particle_energy(pot: &PairPotential, bx: &BoxSpec, config: &[f64], i: usize) -> f64 {
    let d = bx.dim;
    let n = config.len() / d;
    let mut e = 0.0;
    for j in 0..n {
        if j == i {
            continue;
        }
        e += pot.eval_radial(bx.distance(&config[i * d..(i + 1) * d], &config[j * d..(j + 1) * d]));
        if e.is_infinite() {
            return f64::INFINITY;
        }
    }
    e
}

/// Runs one Metropolis chain and collects snapshots.
pub fn run_chain(cfg: &ChainConfig) -> Result<ChainOutput> {
    run_chain_stream(cfg, |_| {})
}

/// Like [`run_chain`] but also hands every per-sweep state to the observer;
/// used by the balance diagnostics.
pub fn run_chain_stream(cfg: &ChainConfig, mut observe: impl FnMut(&[f64])) -> Result<ChainOutput> {
    if cfg.n == 0 {
        return Err(Error::InvalidInput("need at least one particle".into()));
    }
    if cfg.sweeps <= cfg.burn_in_sweeps {
        return Err(Error::InvalidInput("sweeps must exceed burn-in".into()));
    }
    let d = cfg.bx.dim;
    let mut config = lattice_start(cfg)?;
    let mut rng = mc::stream_rng(cfg.seed, 0);
    let mut accepted = 0usize;
    let mut proposed = 0usize;
    let mut snapshots = Vec::new();
    let half_width = cfg.move_width / 2.0;
    let half_box = cfg.bx.ell / 2.0;
    for sweep in 0..cfg.sweeps {
        for _ in 0..cfg.n {
            let i = rng.random_range(0..cfg.n);
            let old_energy = particle_energy(cfg.potential, &cfg.bx, &config, i);
            let mut proposal = [0.0f64; 3];
            let mut inside = true;
            for k in 0..d {
                let mut x = config[i * d + k] + rng.random_range(-half_width..half_width);
                match cfg.bx.bc {
                    BoundaryCondition::Periodic => {
                        x -= cfg.bx.ell * (x / cfg.bx.ell).round();
                        if x <= -half_box {
                            x += cfg.bx.ell;
                        }
                    }
                    BoundaryCondition::Zero => {
                        if x <= -half_box || x > half_box {
                            inside = false;
                        }
                    }
                }
                proposal[k] = x;
            }
            proposed += 1;
            if !inside {
                continue;
            }
            let mut old = [0.0f64; 3];
            old[..d].copy_from_slice(&config[i * d..(i + 1) * d]);
            config[i * d..(i + 1) * d].copy_from_slice(&proposal[..d]);
            let new_energy = particle_energy(cfg.potential, &cfg.bx, &config, i);
            let delta = new_energy - old_energy;
            let accept = if new_energy.is_infinite() {
                false
            } else if delta <= 0.0 {
                true
            } else {
                rng.random_range(0.0..1.0) < (-cfg.beta * delta).exp()
            };
            if accept {
                accepted += 1;
            } else {
                config[i * d..(i + 1) * d].copy_from_slice(&old[..d]);
            }
        }
        observe(&config);
        if sweep >= cfg.burn_in_sweeps && (sweep - cfg.burn_in_sweeps) % cfg.stride_sweeps == 0 {
            snapshots.push(config.clone());
        }
    }
    Ok(ChainOutput {
        snapshots,
        acceptance: accepted as f64 / proposed.max(1) as f64,
        seed: cfg.seed,
    })
}

/// Runs `chains` independent chains on split seeds and concatenates their
/// snapshots in chain order.
pub fn run_chains(cfg: &ChainConfig, chains: usize) -> Result<ChainOutput> {
    use rayon::prelude::*;
    let outputs: Vec<Result<ChainOutput>> = (0..chains.max(1) as u64)
        .into_par_iter()
        .map(|c| {
            let mut sub = cfg.clone();
            sub.seed = mc::splitmix64(cfg.seed ^ c.wrapping_mul(0x9e37_79b9));
            run_chain(&sub)
        })
        .collect();
    let mut snapshots = Vec::new();
    let mut acceptance = 0.0;
    let mut count = 0;
    for out in outputs {
        let out = out?;
        snapshots.extend(out.snapshots);
        acceptance += out.acceptance;
        count += 1;
    }
    Ok(ChainOutput { snapshots, acceptance: acceptance / count as f64, seed: cfg.seed })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorrelationKind {
    /// Unlabelled one-point density (integrates to N).
    OnePoint,
    /// Labelled one-point function |Lambda| rho1 / N.
    OnePointLabelled,
    /// Unlabelled pair density binned over torus distance.
    TwoPoint,
    /// Labelled truncated pair function rho2_lab(r) - 1 (periodic boxes).
    TruncatedLabelled,
}

/// Histogram estimate with jackknife errors over snapshot blocks.
#[derive(Clone, Debug, Serialize)]
pub struct BinnedEstimate {
    pub edges: Vec<f64>,
    pub value: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Bins with too few samples for a stable jackknife are flagged.
    pub flagged: Vec<bool>,
    pub kind: CorrelationKind,
    pub seed: u64,
}

impl BinnedEstimate {
    pub fn bin_centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// CSV rows `r_lo,r_hi,value,stderr`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r_lo,r_hi,value,stderr\n");
        for (w, (v, s)) in self.edges.windows(2).zip(self.value.iter().zip(&self.stderr)) {
            out.push_str(&format!("{:.6},{:.6},{v:.10e},{s:.10e}\n", w[0], w[1]));
        }
        out
    }

    /// Sum of value * bin width, the histogram's integral.
    pub fn integral(&self) -> f64 {
        self.edges
            .windows(2)
            .zip(&self.value)
            .map(|(w, v)| (w[1] - w[0]) * v)
            .sum()
    }

    /// Value and error of the bin containing `x`.
    pub fn at(&self, x: f64) -> Option<(f64, f64)> {
        let bins = self.value.len();
        let lo = self.edges[0];
        let hi = self.edges[bins];
        if !(lo..hi).contains(&x) {
            return None;
        }
        let b = (((x - lo) / (hi - lo) * bins as f64) as usize).min(bins - 1);
        Some((self.value[b], self.stderr[b]))
    }
}

const JACKKNIFE_BLOCKS: usize = 20;

fn jackknife(per_block: &[Vec<f64>], bins: usize) -> (Vec<f64>, Vec<f64>) {
    let blocks = per_block.len();
    let mut total = vec![0.0f64; bins];
    for block in per_block {
        for (t, v) in total.iter_mut().zip(block) {
            *t += v;
        }
    }
    let mean: Vec<f64> = total.iter().map(|t| t / blocks as f64).collect();
    if blocks < 2 {
        return (mean, vec![f64::INFINITY; bins]);
    }
    let mut var = vec![0.0f64; bins];
    for block in per_block {
        for b in 0..bins {
            // leave-one-out estimate
            let loo = (total[b] - block[b]) / (blocks as f64 - 1.0);
            let d = loo - mean[b];
            var[b] += d * d;
        }
    }
    let stderr: Vec<f64> = var
        .iter()
        .map(|v| ((blocks as f64 - 1.0) / blocks as f64 * v).sqrt())
        .collect();
    (mean, stderr)
}

/// Histogram estimators over chain snapshots.
///
/// Distance-binned kinds use the torus distance and require a periodic box;
/// bins span [0, ell/2]. The one-point kinds bin the first coordinate over
/// (-ell/2, ell/2].
pub fn estimate_correlation(
    snapshots: &[Vec<f64>],
    bx: &BoxSpec,
    kind: CorrelationKind,
    bins: usize,
    seed: u64,
) -> Result<BinnedEstimate> {
    if snapshots.is_empty() {
        return Err(Error::InvalidInput("no snapshots".into()));
    }
    if bins == 0 {
        return Err(Error::InvalidInput("need at least one bin".into()));
    }
    let d = bx.dim;
    let n = snapshots[0].len() / d;
    let distance_binned =
        matches!(kind, CorrelationKind::TwoPoint | CorrelationKind::TruncatedLabelled);
    if distance_binned && (bx.bc != BoundaryCondition::Periodic || bx.dim != 1) {
        return Err(Error::Unsupported(
            "distance-binned estimators assume a 1D periodic box".into(),
        ));
    }
    let (lo, hi) = if distance_binned {
        (0.0, bx.ell / 2.0)
    } else {
        (-bx.ell / 2.0, bx.ell / 2.0)
    };
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
    let blocks = JACKKNIFE_BLOCKS.min(snapshots.len());
    let block_len = snapshots.len().div_ceil(blocks);
    let mut per_block: Vec<Vec<f64>> = Vec::new();
    let mut total_counts = vec![0.0f64; bins];
    for chunk in snapshots.chunks(block_len) {
        let mut hist = vec![0.0f64; bins];
        for snap in chunk {
            match kind {
                CorrelationKind::OnePoint | CorrelationKind::OnePointLabelled => {
                    for i in 0..n {
                        let x = snap[i * d];
                        let b = (((x - lo) / width) as usize).min(bins - 1);
                        hist[b] += 1.0;
                    }
                }
                CorrelationKind::TwoPoint | CorrelationKind::TruncatedLabelled => {
                    for i in 0..n {
                        for j in 0..n {
                            if i == j {
                                continue;
                            }
                            let dist =
                                bx.distance(&snap[i * d..(i + 1) * d], &snap[j * d..(j + 1) * d]);
                            if dist < hi {
                                let b = (((dist - lo) / width) as usize).min(bins - 1);
                                hist[b] += 1.0;
                            }
                        }
                    }
                }
            }
        }
        for (t, v) in total_counts.iter_mut().zip(&hist) {
            *t += v;
        }
        let snaps = chunk.len() as f64;
        let scale = match kind {
            // counts / (snapshots * bin volume): integrates to N
            CorrelationKind::OnePoint => 1.0 / (snaps * width),
            // |Lambda| / N times the one-point density
            CorrelationKind::OnePointLabelled => bx.volume() / (n as f64 * snaps * width),
            // expected ordered-pair count in a distance bin is
            // snaps * ell * 2 width * rho2(r) on the 1D torus
            CorrelationKind::TwoPoint => 1.0 / (2.0 * width * snaps * bx.ell),
            CorrelationKind::TruncatedLabelled => {
                bx.ell / (2.0 * width * snaps * (n as f64 * (n as f64 - 1.0)))
            }
        };
        for h in hist.iter_mut() {
            *h *= scale;
        }
        if kind == CorrelationKind::TruncatedLabelled {
            for h in hist.iter_mut() {
                *h -= 1.0; // rho1_lab = 1 on the torus
            }
        }
        per_block.push(hist);
    }
    let (value, stderr) = jackknife(&per_block, bins);
    let flagged: Vec<bool> = total_counts.iter().map(|&c| c < 25.0).collect();
    Ok(BinnedEstimate { edges, value, stderr, flagged, kind, seed })
}

/// One-sample Kolmogorov-Smirnov statistic against the uniform law on
/// [lo, hi], with the asymptotic 1% critical value.
pub fn ks_uniform(samples: &mut [f64], lo: f64, hi: f64) -> (f64, bool) {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d_stat = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let cdf = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
        let lo_step = i as f64 / n;
        let hi_step = (i as f64 + 1.0) / n;
        d_stat = d_stat.max((cdf - lo_step).abs()).max((hi_step - cdf).abs());
    }
    let critical = 1.628 / (n.sqrt() + 0.12 + 0.11 / n.sqrt());
    (d_stat, d_stat < critical)
}

/// Detailed-balance smoke test for the two-rod chain: discretize each
/// coordinate into `cells` cells, count transitions between visited states,
/// and check the symmetry of the counts within k sigma.
pub fn transition_balance_check(
    cfg: &ChainConfig,
    cells: usize,
    k_sigma: f64,
) -> Result<(f64, bool)> {
    if cfg.bx.dim != 1 || cfg.n != 2 {
        return Err(Error::Unsupported("balance check is wired for N = 2 in 1D".into()));
    }
    let ell = cfg.bx.ell;
    let state_of = move |config: &[f64]| -> usize {
        let c0 = (((config[0] + ell / 2.0) / ell * cells as f64) as usize).min(cells - 1);
        let c1 = (((config[1] + ell / 2.0) / ell * cells as f64) as usize).min(cells - 1);
        c0 * cells + c1
    };
    let mut totals = std::collections::HashMap::<(usize, usize), (f64, f64)>::new();
    let mut prev: Option<usize> = None;
    run_chain_stream(cfg, |config| {
        let s = state_of(config);
        if let Some(p) = prev {
            if p != s {
                let e = totals.entry((p.min(s), p.max(s))).or_insert((0.0, 0.0));
                if p < s {
                    e.0 += 1.0;
                } else {
                    e.1 += 1.0;
                }
            }
        }
        prev = Some(s);
    })?;
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for (_, (fwd, bwd)) in totals {
        let total = fwd + bwd;
        if total < 25.0 {
            continue;
        }
        let z = (fwd - bwd).abs() / total.sqrt();
        worst = worst.max(z);
        if z > k_sigma {
            pass = false;
        }
    }
    Ok((worst, pass))
}
