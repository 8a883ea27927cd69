//! Assembly of the cluster-expansion series: the Kotecky-Preiss convergence
//! check, the free-energy density series, finite-volume term structure, the
//! ideal-gas Stirling correction and the boundary/interior splitting bounds.

use serde::Serialize;

use crate::polymer::{cluster_coefficient, MultiIndex, PolymerSupport};
use crate::potential::{BoxSpec, PairPotential};
use crate::weights::{irreducible_coefficient, polymer_weight, WeightRequest};
use crate::{Error, Result};

/// Convergence diagnostics for the polymer activities at density rho.
///
/// `delta_prime = rho e^(2 beta B + a) C(beta, R)` controls the geometric
/// series of activity bounds; the expansion machinery needs
/// `delta_prime * e < 1`. `series_bound` is the explicit
/// incompatible-polymer sum 2 e^(2 beta B + a) / sqrt(pi) * x / (1 - x) with
/// x = delta_prime * e, and the full condition additionally demands
/// `series_bound <= a`.
#[derive(Clone, Debug, Serialize)]
pub struct KpReport {
    pub a: f64,
    pub c: f64,
    pub c_beta: f64,
    pub rho: f64,
    /// sup-activity bound rho C e^(2 (2 beta B + a + c)).
    pub delta: f64,
    pub delta_prime: f64,
    /// delta_prime * e < 1: the geometric series of cluster bounds converges.
    pub geometric_converges: bool,
    /// Bound on the sum of weighted activities incompatible with one
    /// polymer, per unit cardinality.
    pub series_bound: f64,
    /// geometric_converges and series_bound <= a.
    pub condition_met: bool,
    pub margin: f64,
}

/// Evaluates the convergence condition. `a` is the per-cardinality weight in
/// the activity bounds; `c` is a second non-negative weight used by the
/// correlation decay estimates and set to zero by default upstream.
pub fn kp_check(
    potential: &PairPotential,
    beta: f64,
    rho: f64,
    d: usize,
    a: f64,
    c: f64,
) -> Result<KpReport> {
    if !(a > 0.0) || c < 0.0 {
        return Err(Error::InvalidInput("weights must satisfy a > 0, c >= 0".into()));
    }
    let c_beta = potential.c_beta(beta, d)?.value;
    let b = potential.stability_constant();
    let exponent = 2.0 * beta * b + a + c;
    let delta_prime = rho * exponent.exp() * c_beta;
    let delta = rho * c_beta * (2.0 * exponent).exp();
    let x = delta_prime * std::f64::consts::E;
    let geometric_converges = x < 1.0;
    let series_bound = if geometric_converges {
        2.0 * exponent.exp() / std::f64::consts::PI.sqrt() * x / (1.0 - x)
    } else {
        f64::INFINITY
    };
    Ok(KpReport {
        a,
        c,
        c_beta,
        rho,
        delta,
        delta_prime,
        geometric_converges,
        series_bound,
        condition_met: geometric_converges && series_bound <= a,
        margin: a - series_bound,
    })
}

/// One order of the free-energy density series.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SeriesOrder {
    pub n: usize,
    pub coefficient: f64,
    pub stderr: f64,
    /// -beta_n rho^(n+1) / (n+1), the contribution to beta f.
    pub term: f64,
}

/// The free-energy density beta f(rho) truncated at n_max, with a fitted
/// exponential tail estimate.
#[derive(Clone, Debug, Serialize)]
pub struct FreeEnergySeries {
    pub rho: f64,
    pub ideal_term: f64,
    pub orders: Vec<SeriesOrder>,
    /// beta f = rho (log rho - 1) + sum of the order terms.
    pub beta_f: f64,
    /// Fitted |term_n| <= C e^(-c n) extrapolation of the dropped tail;
    /// absent with fewer than two usable orders or when diverging.
    pub tail_bound: Option<f64>,
    pub tail_rate: Option<f64>,
    /// Set when the computed terms grow instead of decaying.
    pub diverging: bool,
    /// Set when the convergence check did not pass at these parameters.
    pub kp_warning: bool,
}

impl FreeEnergySeries {
    /// The large-volume limit of (1/|Lambda|) log Z predicted by the series.
    pub fn log_z_per_volume(&self) -> f64 {
        -self.beta_f
    }
}

/// Computes beta f(rho) = rho (log rho - 1) - sum_{n <= n_max}
/// beta_n rho^(n+1) / (n+1) and fits the dropped tail.
pub fn free_energy_series(
    rho: f64,
    beta: f64,
    potential: &PairPotential,
    n_max: usize,
    d: usize,
    kp_a: f64,
) -> Result<FreeEnergySeries> {
    if !(rho > 0.0) {
        return Err(Error::InvalidInput("density must be positive".into()));
    }
    let kp = kp_check(potential, beta, rho, d, kp_a, 0.0)?;
    let ideal_term = rho * (rho.ln() - 1.0);
    let mut orders = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let m = irreducible_coefficient(n, potential, beta, d)?;
        let term = -m.value * rho.powi(n as i32 + 1) / (n as f64 + 1.0);
        orders.push(SeriesOrder { n, coefficient: m.value, stderr: m.stderr, term });
    }
    let beta_f = ideal_term + orders.iter().map(|o| o.term).sum::<f64>();
    // least-squares fit of log |term_n| = log C - c n over nonzero terms
    let points: Vec<(f64, f64)> = orders
        .iter()
        .filter(|o| o.term.abs() > 0.0)
        .map(|o| (o.n as f64, o.term.abs().ln()))
        .collect();
    let mut tail_bound = None;
    let mut tail_rate = None;
    let mut diverging = false;
    if points.len() >= 2 {
        let (slope, intercept) = least_squares(&points);
        let rate = -slope;
        if rate > 0.0 {
            // sum_{n > n_max} C e^(-rate n)
            let c0 = intercept.exp();
            let tail =
                c0 * (-rate * (n_max as f64 + 1.0)).exp() / (1.0 - (-rate).exp());
            tail_bound = Some(tail);
            tail_rate = Some(rate);
        } else {
            diverging = true;
            tail_rate = Some(rate);
        }
    }
    Ok(FreeEnergySeries {
        rho,
        ideal_term,
        orders,
        beta_f,
        tail_bound,
        tail_rate,
        diverging,
        kp_warning: !kp.geometric_converges,
    })
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}

/// One finite-volume order: the falling-factorial density factor
/// P(n) = (N-1)...(N-n) / |Lambda|^n, the order coefficient B(n) (identified
/// with the irreducible coefficient under periodic boundary conditions), and
/// the resulting term F(n) = P(n) B(n) / (n+1).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FiniteVolumeOrder {
    pub n: usize,
    pub p_factor: f64,
    pub b_term: f64,
    pub f_term: f64,
    pub tail_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesReport {
    pub n_particles: usize,
    pub volume: f64,
    pub orders: Vec<FiniteVolumeOrder>,
    /// (N/|Lambda|) sum of the F terms: the partial (1/|Lambda|) log Z_int.
    pub log_z_int_per_volume: f64,
}

impl SeriesReport {
    /// CSV rows `n,P,Bterm,F,tail_bound`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,P,Bterm,F,tail_bound\n");
        for o in &self.orders {
            out.push_str(&format!(
                "{},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                o.n, o.p_factor, o.b_term, o.f_term, o.tail_bound
            ));
        }
        out
    }
}

/// Exact falling-factorial factor (N-1)...(N-n) / |Lambda|^n.
pub fn p_factor(n_particles: usize, volume: f64, n: usize) -> f64 {
    let mut out = 1.0;
    for i in 1..=n {
        out *= (n_particles as f64 - i as f64) / volume;
    }
    out
}

/// Finite-volume series structure for N particles in the box, through order
/// n_max. The order coefficients are the irreducible coefficients (their
/// periodic identification); the fitted exponential tail of the F terms is
/// attached per order.
pub fn finite_volume_terms(
    n_particles: usize,
    bx: &BoxSpec,
    beta: f64,
    potential: &PairPotential,
    n_max: usize,
) -> Result<SeriesReport> {
    if n_particles < 2 {
        return Err(Error::InvalidInput("need N >= 2".into()));
    }
    let volume = bx.volume();
    let mut orders = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let p = p_factor(n_particles, volume, n);
        let b = irreducible_coefficient(n, potential, beta, bx.dim)?.value;
        orders.push(FiniteVolumeOrder {
            n,
            p_factor: p,
            b_term: b,
            f_term: p * b / (n as f64 + 1.0),
            tail_bound: 0.0,
        });
    }
    // fit |F| ~ C e^(-c n) and attach the per-order tail estimate
    let points: Vec<(f64, f64)> = orders
        .iter()
        .filter(|o| o.f_term.abs() > 0.0)
        .map(|o| (o.n as f64, o.f_term.abs().ln()))
        .collect();
    if points.len() >= 2 {
        let (slope, intercept) = least_squares(&points);
        let rate = -slope;
        if rate > 0.0 {
            let c0 = intercept.exp();
            for o in orders.iter_mut() {
                o.tail_bound = c0 * (-rate * (o.n as f64 + 1.0)).exp() / (1.0 - (-rate).exp());
            }
        }
    }
    let rho = n_particles as f64 / volume;
    let total: f64 = orders.iter().map(|o| o.f_term).sum();
    Ok(SeriesReport {
        n_particles,
        volume,
        orders,
        log_z_int_per_volume: rho * total,
    })
}

/// Direct multi-index evaluation of the order coefficient restricted to
/// multi-indices with all multiplicities one and sum of (|V| - 1) equal to n:
/// B*(n) = (|Lambda|^n / n!) sum over such I with label union {1..n+1} of
/// c_I times the product of weights. Implemented for n <= 2 as a cross-check
/// of the periodic identification.
pub fn b_term_star_direct(
    n: usize,
    bx: &BoxSpec,
    beta: f64,
    potential: &PairPotential,
) -> Result<f64> {
    let volume = bx.volume();
    let weight_of = |size: usize| -> Result<f64> {
        Ok(polymer_weight(&WeightRequest::new(size, potential, beta, *bx))?.value)
    };
    let sup = |labels: &[u32]| PolymerSupport::new(labels.to_vec()).expect("valid support");
    // multi-indices over the label union {1..n+1} with all multiplicities
    // one and sum of (|V| - 1) equal to n
    let index_families: Vec<Vec<PolymerSupport>> = match n {
        1 => vec![vec![sup(&[1, 2])]],
        2 => vec![
            vec![sup(&[1, 2, 3])],
            vec![sup(&[1, 2]), sup(&[1, 3])],
            vec![sup(&[1, 2]), sup(&[2, 3])],
            vec![sup(&[1, 3]), sup(&[2, 3])],
        ],
        _ => {
            return Err(Error::CapExceeded { what: "direct order-coefficient sum", n, cap: 2 })
        }
    };
    let mut total = 0.0;
    for family in index_families {
        let idx = MultiIndex::new(family.iter().cloned().map(|s| (s, 1)).collect())?;
        let c = crate::exact1d::rat_to_f64(&cluster_coefficient(&idx)?);
        let mut term = c;
        for s in &family {
            term *= weight_of(s.len())?;
        }
        total += term;
    }
    // (|Lambda|^n / n!) prefactor
    let factorial = if n == 2 { 2.0 } else { 1.0 };
    Ok(volume.powi(n as i32) / factorial * total)
}

/// Full multi-index sum for the first order, truncated at the given
/// multiplicity: B(1) = |Lambda| sum_k c_k w({1,2})^k = |Lambda| log(1 + w).
pub fn b_term_full_direct(
    n: usize,
    bx: &BoxSpec,
    beta: f64,
    potential: &PairPotential,
    multiplicity_cutoff: u32,
) -> Result<f64> {
    if n != 1 {
        return Err(Error::CapExceeded { what: "full order-coefficient sum", n, cap: 1 });
    }
    let w = polymer_weight(&WeightRequest::new(2, potential, beta, *bx))?.value;
    let support = PolymerSupport::new(vec![1, 2])?;
    let mut total = 0.0;
    for k in 1..=multiplicity_cutoff {
        let idx = MultiIndex::new(vec![(support.clone(), k)])?;
        let c = cluster_coefficient(&idx)?;
        let c = crate::exact1d::rat_to_f64(&c);
        total += c * w.powi(k as i32);
    }
    Ok(bx.volume() * total)
}

/// Ideal-gas finite-volume error (1/|Lambda|)(log sqrt(2 pi N) + 1/(12 N)).
pub fn stirling_correction(n_particles: usize, volume: f64) -> f64 {
    let n = n_particles as f64;
    ((2.0 * std::f64::consts::PI * n).sqrt().ln() + 1.0 / (12.0 * n)) / volume
}

/// Bounds for the boundary/interior splitting of the finite-volume
/// expansion.
#[derive(Clone, Debug, Serialize)]
pub struct BoundarySplitReport {
    /// The explicit constant of the boundary-cluster bound.
    pub c_of_rho: f64,
    /// |boundary cluster sum| / |Lambda| <= c_of_rho / ell.
    pub s0_bound: f64,
    pub s0_converged: bool,
    /// Interior irreducible partial sum (N/|Lambda|) sum F_n.
    pub s1_star: f64,
    /// Bound on the remainder class, of order 1/|Lambda|. The extra e^|V|
    /// branch factor narrows its convergence region below the boundary
    /// series' one; infinite when divergent.
    pub s1_starstar_bound: f64,
    pub remainder_converged: bool,
    /// Both bound series converged.
    pub converged: bool,
}

/// Evaluates the explicit boundary-cluster constant
/// C(rho) = sum_{n >= 2} rho^(n-1) e^((2 beta B + a) n) n^(n-2)
/// C(beta,R)^(n-1) / (n-1)!  (truncated when terms drop below 1e-12) and the
/// order-1/|Lambda| remainder bound assembled from the |V| e^|V| factors of
/// the shared-label estimates.
pub fn boundary_split_bound(
    n_particles: usize,
    bx: &BoxSpec,
    beta: f64,
    potential: &PairPotential,
    a: f64,
    n_max: usize,
) -> Result<BoundarySplitReport> {
    let rho = n_particles as f64 / bx.volume();
    let c_beta = potential.c_beta(beta, bx.dim)?.value;
    let b = potential.stability_constant();
    let exponent = 2.0 * beta * b + a;
    let mut c_of_rho = 0.0;
    let mut converged = true;
    let mut prev = f64::INFINITY;
    for n in 2..200 {
        let nf = n as f64;
        let mut log_term = (nf - 1.0) * (rho * c_beta).max(f64::MIN_POSITIVE).ln()
            + exponent * nf
            + (nf - 2.0) * nf.ln();
        log_term -= crate::oracle::ln_factorial(n - 1);
        let term = log_term.exp();
        if !term.is_finite() || (n > 8 && term > prev) {
            converged = false;
            break;
        }
        c_of_rho += term;
        if term < 1e-12 {
            break;
        }
        prev = term;
    }
    // remainder class: two polymers sharing at least two labels, each
    // carrying the |V| e^|V| branch factor; the shared labels eat one volume
    // power, leaving an explicit 1/|Lambda| prefactor
    let mut branch_sum = 0.0;
    let mut branch_converged = true;
    let mut prev = f64::INFINITY;
    for n in 2..200 {
        let nf = n as f64;
        let mut log_term = (nf - 1.0) * (rho * c_beta).max(f64::MIN_POSITIVE).ln()
            + (exponent + 1.0) * nf
            + (nf - 2.0) * nf.ln()
            + nf.ln();
        log_term -= crate::oracle::ln_factorial(n - 1);
        let term = log_term.exp();
        if !term.is_finite() || (n > 8 && term > prev) {
            branch_converged = false;
            break;
        }
        branch_sum += term;
        if term < 1e-12 {
            break;
        }
        prev = term;
    }
    let ideal = potential.is_ideal() || c_beta == 0.0;
    let s1_star = if ideal {
        0.0
    } else {
        finite_volume_terms(n_particles.max(2), bx, beta, potential, n_max)?.log_z_int_per_volume
    };
    if ideal {
        return Ok(BoundarySplitReport {
            c_of_rho: 0.0,
            s0_bound: 0.0,
            s0_converged: true,
            s1_star,
            s1_starstar_bound: 0.0,
            remainder_converged: true,
            converged: true,
        });
    }
    let (c_of_rho, s0_bound) = if converged {
        (c_of_rho, c_of_rho / bx.ell)
    } else {
        (f64::INFINITY, f64::INFINITY)
    };
    let starstar = if branch_converged {
        branch_sum * branch_sum / (2.0 * bx.volume())
    } else {
        f64::INFINITY
    };
    Ok(BoundarySplitReport {
        c_of_rho,
        s0_bound,
        s0_converged: converged,
        s1_star,
        s1_starstar_bound: starstar,
        remainder_converged: branch_converged,
        converged: converged && branch_converged,
    })
}

/// Pointwise check of the root/color partition of unity: for every sampled
/// configuration, support size and root, the boundary and interior
/// indicators of the root position split 1/|V| shares that sum back to one.
pub fn rooted_partition_identity(
    bx: &BoxSpec,
    range: f64,
    sizes: &[usize],
    configs: usize,
    seed: u64,
) -> Result<bool> {
    use rand::Rng;
    let mut rng = crate::mc::stream_rng(seed, 0);
    let d = bx.dim;
    let half = bx.ell / 2.0;
    for &size in sizes {
        if size == 0 {
            return Err(Error::InvalidInput("support size must be positive".into()));
        }
        for _ in 0..configs {
            let config: Vec<f64> =
                (0..size * d).map(|_| rng.random_range(-half..half)).collect();
            let mut total = 0.0;
            for root in 0..size {
                let dist = bx.distance_to_boundary(&config[root * d..(root + 1) * d]);
                let near = dist < range * size as f64;
                // color 0 contributes iff near, color 1 iff far
                let share = (if near { 1.0 } else { 0.0 }) + (if near { 0.0 } else { 1.0 });
                total += share / size as f64;
            }
            if (total - 1.0).abs() > 1e-12 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::potential::BoundaryCondition::{Periodic, Zero};

    fn hard_rod() -> PairPotential {
        PairPotential::hard_core(1.0).unwrap()
    }

    #[test]
    fn kp_report_examples() {
        let pot = hard_rod();
        let rep = kp_check(&pot, 1.0, 0.05, 1, 1.0, 0.0).unwrap();
        assert!((rep.delta_prime - 0.05 * std::f64::consts::E * 2.0).abs() < 1e-12);
        assert!(rep.geometric_converges);
        // the crude series bound exceeds a = 1 at this density even though
        // the geometric gate passes
        assert!(rep.series_bound > rep.a);
        assert!(!rep.condition_met);

        // small enough density passes the full condition
        let rep = kp_check(&pot, 1.0, 0.01, 1, 1.0, 0.0).unwrap();
        assert!(rep.condition_met, "series bound {}", rep.series_bound);
        assert!(rep.margin > 0.0);

        let ideal = PairPotential::ideal();
        let rep = kp_check(&ideal, 1.0, 0.5, 1, 1.0, 0.0).unwrap();
        assert_eq!(rep.delta_prime, 0.0);
        assert!(rep.condition_met);

        let rep = kp_check(&pot, 1.0, 10.0, 1, 1.0, 0.0).unwrap();
        assert!(!rep.geometric_converges);
        assert!(!rep.condition_met);
    }

    #[test]
    fn ideal_gas_free_energy_is_the_ideal_term() {
        let pot = PairPotential::ideal();
        let s = free_energy_series(0.1, 1.0, &pot, 3, 1, 1.0).unwrap();
        assert_eq!(s.beta_f, 0.1 * (0.1f64.ln() - 1.0));
        assert!(!s.diverging);
    }

    #[test]
    fn hard_rod_series_approaches_exact_free_energy() {
        let pot = hard_rod();
        let rho = 0.1;
        let s = free_energy_series(rho, 1.0, &pot, 3, 1, 1.0).unwrap();
        // exact: rho log(rho / (1 - rho R)) - rho
        let exact = rho * (rho / (1.0 - rho)).ln() - rho;
        let diff = (s.beta_f - exact).abs();
        assert!(diff < 1e-5, "diff {diff}");
        // the dropped tail is sum_{n > 3} rho^(n+1) / n ~ 2.7e-6
        assert!(diff < 3e-6, "diff {diff}");
        if let Some(tail) = s.tail_bound {
            assert!(diff <= 3.0 * tail, "diff {diff} vs fitted tail {tail}");
        }
        // interaction part shrinks like rho^2 at small density
        let small = free_energy_series(1e-4, 1.0, &pot, 2, 1, 1.0).unwrap();
        assert!((small.beta_f - small.ideal_term).abs() < 3e-8);
    }

    #[test]
    fn growing_terms_raise_the_divergence_flag() {
        let pot = hard_rod();
        // far above the radius of convergence the term sizes grow
        let s = free_energy_series(3.0, 1.0, &pot, 3, 1, 1.0).unwrap();
        assert!(s.diverging);
        assert!(s.kp_warning);
        assert!(s.tail_bound.is_none());
    }

    #[test]
    fn p_factor_examples() {
        assert!((p_factor(100, 1000.0, 1) - 0.099).abs() < 1e-15);
        let p3 = p_factor(100, 1000.0, 3);
        let want = 99.0 * 98.0 * 97.0 / 1e9;
        assert!((p3 - want).abs() < 1e-18);
        // P(n)/rho^n telescopes into prod (1 - i/N)
        let rho: f64 = 0.1;
        let ratio = p3 / rho.powi(3);
        assert!((ratio - 0.99 * 0.98 * 0.97).abs() < 1e-12);
    }

    #[test]
    fn falling_factorial_bound_holds() {
        for n_particles in [16usize, 100] {
            let nn = n_particles as f64;
            let max_n = (nn.sqrt()) as usize;
            for n in 1..=max_n {
                let mut prod = 1.0;
                for i in 1..=n {
                    prod *= 1.0 - i as f64 / nn;
                }
                let c = 2f64.sqrt() / (1.0 - n as f64 / nn);
                let bound = c * n as f64 * (n as f64 + 1.0) / (2.0 * nn);
                assert!((prod - 1.0).abs() <= bound, "N={n_particles} n={n}");
            }
        }
    }

    #[test]
    fn finite_volume_orders_vanish_for_ideal_gas() {
        let pot = PairPotential::ideal();
        let bx = BoxSpec::new(100.0, 1, Periodic).unwrap();
        let rep = finite_volume_terms(10, &bx, 1.0, &pot, 3).unwrap();
        assert!(rep.orders.iter().all(|o| o.f_term == 0.0));
        assert_eq!(rep.log_z_int_per_volume, 0.0);
    }

    #[test]
    fn direct_order_sums_match_irreducible_coefficients() {
        // under periodic boundary conditions the restricted multi-index sum
        // equals the irreducible coefficient for every box
        let pot = hard_rod();
        for ell in [12.0, 20.0] {
            let bx = BoxSpec::new(ell, 1, Periodic).unwrap();
            let b1 = b_term_star_direct(1, &bx, 1.0, &pot).unwrap();
            assert!((b1 - (-2.0)).abs() < 1e-12, "ell {ell}: {b1}");
            let b2 = b_term_star_direct(2, &bx, 1.0, &pot).unwrap();
            assert!((b2 - (-1.5)).abs() < 1e-10, "ell {ell}: {b2}");
        }
        // the unrestricted first-order sum differs by O(1/ell)
        let bx = BoxSpec::new(50.0, 1, Periodic).unwrap();
        let full = b_term_full_direct(1, &bx, 1.0, &pot, 10).unwrap();
        assert!((full - (-2.0)).abs() < 0.1);
        assert!((full - 50.0 * (1.0f64 - 2.0 / 50.0).ln()).abs() < 1e-9);
    }

    #[test]
    fn finite_volume_sum_reproduces_log_z_within_bound() {
        // interaction pressure through the F terms vs the exact hard-rod
        // value; the gap is the remainder class, bounded by the report
        let pot = PairPotential::hard_core(0.1).unwrap();
        let n_particles = 4;
        let bx = BoxSpec::new(20.0, 1, Periodic).unwrap();
        let rep = finite_volume_terms(n_particles, &bx, 1.0, &pot, 3).unwrap();
        let exact = oracle::hard_rod_log_z(n_particles, 20.0, 0.1, Periodic).unwrap();
        let got = rep.log_z_int_per_volume;
        let want = exact.z_int.ln() / 20.0;
        let gap = (got - want).abs();
        let split = boundary_split_bound(n_particles, &bx, 1.0, &pot, 1.0, 3).unwrap();
        assert!(split.converged);
        assert!(gap <= split.s1_starstar_bound / 20.0 + 1e-12, "gap {gap}");
        // full log Z: add the exact ideal part
        let assembled = oracle::log_ideal_partition(n_particles, 20.0) / 20.0 + got;
        let full_gap = (assembled - exact.log_z / 20.0).abs();
        assert!(full_gap <= split.s1_starstar_bound / 20.0 + 1e-12, "{full_gap}");
    }

    #[test]
    fn stirling_correction_examples() {
        let c = stirling_correction(1, 1.0);
        assert!((c - 1.0022719).abs() < 1e-6, "{c}");
        let c = stirling_correction(100, 1000.0);
        assert!((c - 3.2223570e-3).abs() < 1e-9, "{c}");
        // exact ideal-gas finite-volume error matches the correction:
        // (1/V) log(V^N/N!) = -rho(log rho - 1) - correction + O(N^-3)/V
        for n in [50usize, 200] {
            let volume = 10.0 * n as f64;
            let rho = n as f64 / volume;
            let exact_err =
                oracle::log_ideal_partition(n, volume) / volume + rho * (rho.ln() - 1.0);
            let corr = stirling_correction(n, volume);
            assert!((exact_err + corr).abs() < 1e-6 / volume, "N = {n}");
        }
    }

    #[test]
    fn boundary_split_scales_inversely_with_ell() {
        let pot = hard_rod();
        let mut scaled = Vec::new();
        // rho = 0.06 keeps N integral at every ell, so C(rho) is identical
        // across the boxes
        for ell in [50.0, 100.0, 200.0] {
            let bx = BoxSpec::new(ell, 1, Zero).unwrap();
            let n = (0.06 * ell).round() as usize;
            let rep = boundary_split_bound(n, &bx, 1.0, &pot, 1.0, 2).unwrap();
            assert!(rep.s0_converged);
            scaled.push(ell * rep.s0_bound);
        }
        assert!((scaled[0] - scaled[1]).abs() < 1e-12);
        assert!((scaled[1] - scaled[2]).abs() < 1e-12);

        let ideal = PairPotential::ideal();
        let bx = BoxSpec::new(100.0, 1, Zero).unwrap();
        let rep = boundary_split_bound(5, &bx, 1.0, &ideal, 1.0, 2).unwrap();
        assert_eq!(rep.s0_bound, 0.0);
        assert_eq!(rep.s1_starstar_bound, 0.0);
    }

    #[test]
    fn boundary_split_reports_divergence() {
        let pot = hard_rod();
        let bx = BoxSpec::new(10.0, 1, Zero).unwrap();
        // rho C e^(a+1) far above 1
        let rep = boundary_split_bound(8, &bx, 1.0, &pot, 1.0, 2).unwrap();
        assert!(!rep.s0_converged);
        assert!(!rep.converged);
        assert_eq!(rep.s0_bound, f64::INFINITY);
    }

    #[test]
    fn rooted_partition_identity_holds() {
        let bx = BoxSpec::new(10.0, 1, Zero).unwrap();
        assert!(rooted_partition_identity(&bx, 1.0, &[2, 3, 5], 200, 7).unwrap());
        let per = BoxSpec::new(10.0, 1, Periodic).unwrap();
        assert!(rooted_partition_identity(&per, 1.0, &[2, 4], 100, 7).unwrap());
    }

    #[test]
    fn series_report_csv_shape() {
        let pot = hard_rod();
        let bx = BoxSpec::new(100.0, 1, Periodic).unwrap();
        let rep = finite_volume_terms(10, &bx, 1.0, &pot, 2).unwrap();
        let csv = rep.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("n,P,Bterm,F,tail_bound"));
        assert_eq!(lines.count(), 2);
    }
}
