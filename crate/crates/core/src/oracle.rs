//! Ground-truth engines: closed-form hard-rod partition functions, the
//! deterministic ordering-sector cross-check that certifies them, brute-force
//! configuration integrals in d <= 3, and the exact canonical pair
//! correlation of the hard-rod gas.

use serde::Serialize;

use crate::exact1d::{self, rat_from_f64, rat_to_f64};
use crate::mc::{self, McConfig};
use crate::measure::Method;
use crate::potential::{total_energy, BoundaryCondition, BoxSpec, PairPotential};
use crate::{Error, Result};

/// log Z split into the ideal part log(|Lambda|^N / N!) and the interaction
/// part log Z_int.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PartitionResult {
    pub log_z: f64,
    pub log_z_ideal: f64,
    pub z_int: f64,
    pub stderr_z_int: f64,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl PartitionResult {
    fn assemble(n: usize, volume: f64, z_int: f64, stderr: f64, method: Method, seed: Option<u64>) -> Self {
        let log_ideal = log_ideal_partition(n, volume);
        Self {
            log_z: log_ideal + z_int.ln(),
            log_z_ideal: log_ideal,
            z_int,
            stderr_z_int: stderr,
            method,
            seed,
        }
    }
}

/// log(|Lambda|^N / N!) by exact log-factorial summation.
pub fn log_ideal_partition(n: usize, volume: f64) -> f64 {
    n as f64 * volume.ln() - ln_factorial(n)
}

pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Closed-form hard-rod partition function in one dimension.
///
/// Zero boundary conditions: Z = (ell - (N-1) R)^N / N!; periodic:
/// Z = ell (ell - N R)^(N-1) / N!. Jammed boxes give Z = 0, log Z = -inf.
/// The formulas are certified against the ordering-sector volumes by
/// [`hard_rod_cross_validate`].
pub fn hard_rod_log_z(n: usize, ell: f64, r: f64, bc: BoundaryCondition) -> Result<PartitionResult> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one particle".into()));
    }
    if !(ell > 0.0) || !(r > 0.0) {
        return Err(Error::InvalidInput("need positive box and rod length".into()));
    }
    let free = match bc {
        BoundaryCondition::Zero => ell - (n as f64 - 1.0) * r,
        BoundaryCondition::Periodic => ell - n as f64 * r,
    };
    let log_ideal = log_ideal_partition(n, ell);
    if free <= 0.0 && n > 1 {
        return Ok(PartitionResult {
            log_z: f64::NEG_INFINITY,
            log_z_ideal: log_ideal,
            z_int: 0.0,
            stderr_z_int: 0.0,
            method: Method::Exact,
            seed: None,
        });
    }
    let log_z = match bc {
        BoundaryCondition::Zero => n as f64 * free.ln() - ln_factorial(n),
        BoundaryCondition::Periodic => {
            ell.ln() + (n as f64 - 1.0) * free.ln() - ln_factorial(n)
        }
    };
    Ok(PartitionResult {
        log_z,
        log_z_ideal: log_ideal,
        z_int: (log_z - log_ideal).exp(),
        stderr_z_int: 0.0,
        method: Method::Exact,
        seed: None,
    })
}

/// Deterministic cross-validation of the closed forms: the ordering-sector
/// integrator recomputes Z from scratch (no free-volume insight) for small N.
/// Returns the largest relative deviation seen.
pub fn hard_rod_cross_validate(ell: f64, r: f64, n_max: usize) -> Result<f64> {
    let r_rat = rat_from_f64(r)?;
    let ell_rat = rat_from_f64(ell)?;
    let mut worst: f64 = 0.0;
    for n in 1..=n_max.min(4) {
        for bc in [BoundaryCondition::Zero, BoundaryCondition::Periodic] {
            let closed = hard_rod_log_z(n, ell, r, bc)?;
            let sector = match bc {
                BoundaryCondition::Zero => exact1d::hard_rod_box_partition(n, &r_rat, &ell_rat),
                BoundaryCondition::Periodic => exact1d::hard_rod_ring_partition(n, &r_rat, &ell_rat),
            };
            let z_sector = rat_to_f64(&sector);
            if closed.log_z.is_infinite() {
                if z_sector != 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "jammed formula disagrees with sector volume at n = {n}"
                    )));
                }
                continue;
            }
            let rel = (z_sector.ln() - closed.log_z).abs();
            worst = worst.max(rel);
        }
    }
    Ok(worst)
}

/// Z_int by tensor-grid midpoint quadrature for smooth Boltzmann factors,
/// N <= 4 and at most 60 points per coordinate.
///
/// Hard-core integrands are indicators; midpoint quadrature on them stalls
/// at O(h) accuracy, so hard-core 1D requests are routed through the exact
/// ordering-sector volumes instead and reported as quadrature with zero
/// error.
pub fn partition_bruteforce_quadrature(
    n: usize,
    bx: &BoxSpec,
    pot: &PairPotential,
    beta: f64,
    pts_per_dim: usize,
) -> Result<PartitionResult> {
    if n > 4 {
        return Err(Error::CapExceeded { what: "quadrature partition function", n, cap: 4 });
    }
    if pot.is_hard_core() && bx.dim == 1 {
        let r_rat = rat_from_f64(pot.range())?;
        let ell_rat = rat_from_f64(bx.ell)?;
        let z = match bx.bc {
            BoundaryCondition::Zero => exact1d::hard_rod_box_partition(n, &r_rat, &ell_rat),
            BoundaryCondition::Periodic => exact1d::hard_rod_ring_partition(n, &r_rat, &ell_rat),
        };
        let z_int = rat_to_f64(&z) * (ln_factorial(n) - n as f64 * bx.ell.ln()).exp();
        return Ok(PartitionResult::assemble(n, bx.volume(), z_int, 0.0, Method::Quadrature, None));
    }
    let pts = pts_per_dim.clamp(2, 60);
    let dims = n * bx.dim;
    let h = bx.ell / pts as f64;
    let mut total = 0.0f64;
    let mut idx = vec![0usize; dims];
    let mut config = vec![0.0f64; dims];
    loop {
        for (k, &i) in idx.iter().enumerate() {
            config[k] = -bx.ell / 2.0 + (i as f64 + 0.5) * h;
        }
        let e = total_energy(pot, bx, &config);
        if e.is_finite() {
            total += (-beta * e).exp();
        }
        // odometer
        let mut k = 0;
        loop {
            if k == dims {
                let z_int = total * h.powi(dims as i32) / bx.volume().powi(n as i32);
                return Ok(PartitionResult::assemble(
                    n,
                    bx.volume(),
                    z_int,
                    0.0,
                    Method::Quadrature,
                    None,
                ));
            }
            idx[k] += 1;
            if idx[k] < pts {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Z_int by uniform Monte Carlo, N <= 10.
pub fn partition_bruteforce_mc(
    n: usize,
    bx: &BoxSpec,
    pot: &PairPotential,
    beta: f64,
    cfg: McConfig,
) -> Result<PartitionResult> {
    if n > 10 {
        return Err(Error::CapExceeded { what: "Monte Carlo partition function", n, cap: 10 });
    }
    if cfg.samples == 0 {
        return Err(Error::InvalidInput("Monte Carlo budget must be positive".into()));
    }
    let half = bx.ell / 2.0;
    let bounds = vec![(-half, half); n * bx.dim];
    let est = mc::sample_mean(&bounds, cfg, |x, _| {
        let e = total_energy(pot, bx, x);
        if e.is_finite() {
            (-beta * e).exp()
        } else {
            0.0
        }
    });
    Ok(PartitionResult::assemble(
        n,
        bx.volume(),
        est.mean,
        est.stderr,
        Method::MonteCarlo,
        Some(cfg.seed),
    ))
}

/// Exact labelled pair density of N hard rods on a ring of length ell at
/// torus distance `dist`: the two marked rods split the ring into two arcs,
/// and the remaining N-2 rods distribute between them with free-volume
/// weights. Evaluated in log space.
pub fn tonks_labelled_pair_density(n: usize, ell: f64, r: f64, dist: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidInput("pair density needs N >= 2".into()));
    }
    if !(ell > n as f64 * r) {
        return Err(Error::InvalidInput("jammed ring".into()));
    }
    if !(0.0..=ell / 2.0).contains(&dist) {
        return Err(Error::InvalidInput(format!(
            "torus distance must lie in [0, ell/2], got {dist}"
        )));
    }
    let m = n - 2;
    let arc1 = dist;
    let arc2 = ell - dist;
    let mut terms: Vec<f64> = Vec::new();
    for k in 0..=m {
        // k unmarked rods in the short arc, m - k in the long arc
        let free1 = arc1 - (k as f64 + 1.0) * r;
        let free2 = arc2 - ((m - k) as f64 + 1.0) * r;
        if free1 < 0.0 || free2 < 0.0 {
            continue;
        }
        let mut log_term = ln_factorial(m) - ln_factorial(k) - ln_factorial(m - k);
        if k > 0 {
            log_term += k as f64 * free1.ln();
        }
        if m - k > 0 {
            log_term += (m - k) as f64 * free2.ln();
        }
        terms.push(log_term);
    }
    if terms.is_empty() {
        return Ok(0.0);
    }
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    // normalization: rho2_lab = sum * ell / (ell - N R)^(N-1)
    let log_norm = ell.ln() - (n as f64 - 1.0) * (ell - n as f64 * r).ln();
    Ok((max + sum.ln() + log_norm).exp())
}

/// Truncated labelled pair correlation of the periodic hard-rod gas:
/// rho2_lab(dist) - 1 (the labelled one-point function is identically 1 on
/// the torus).
pub fn tonks_truncated_pair(n: usize, ell: f64, r: f64, dist: f64) -> Result<f64> {
    Ok(tonks_labelled_pair_density(n, ell, r, dist)? - 1.0)
}
