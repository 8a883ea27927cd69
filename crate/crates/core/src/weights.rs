//! Integral weights of the expansion: polymer activities, irreducible
//! coefficients and the tree-graph bound.
//!
//! Weights depend on the polymer only through its cardinality, so requests
//! carry a cardinality rather than a label set. For 1D hard cores the
//! integrals have an exact ordering-sector path ([`crate::exact1d`]); every
//! potential and dimension has a seeded Monte Carlo path.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact1d::{self, rat_from_f64, rat_to_f64, Rat};
use crate::graphs::{enumerate_biconnected, enumerate_connected, enumerate_trees};
use crate::mc::{self, McConfig};
use crate::measure::Measurement;
use crate::polymer::connected_edge_sum;
use crate::potential::{BoundaryCondition, BoxSpec, PairPotential};
use crate::{Error, Result};

/// Cap on the polymer cardinality (graph enumeration is the binding limit).
pub const WEIGHT_CAP: usize = crate::graphs::ENUMERATION_CAP;

/// Root color of a rooted polymer: either the root is within R|V| of the box
/// boundary or it is not.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootColor {
    Boundary,
    Interior,
}

/// A polymer-weight request: the weight of any polymer of this cardinality.
#[derive(Clone, Debug)]
pub struct WeightRequest<'a> {
    pub cardinality: usize,
    pub potential: &'a PairPotential,
    pub beta: f64,
    pub bx: BoxSpec,
    /// `None` for the plain weight, `Some(color)` for the rooted weight
    /// (which carries the extra 1/|V| and the boundary/interior indicator).
    pub rooted: Option<RootColor>,
}

impl<'a> WeightRequest<'a> {
    pub fn new(cardinality: usize, potential: &'a PairPotential, beta: f64, bx: BoxSpec) -> Self {
        Self { cardinality, potential, beta, bx, rooted: None }
    }

    pub fn rooted(mut self, color: RootColor) -> Self {
        self.rooted = Some(color);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.cardinality < 2 {
            return Err(Error::InvalidInput("polymer weights need |V| >= 2".into()));
        }
        if self.cardinality > WEIGHT_CAP {
            return Err(Error::CapExceeded {
                what: "polymer weight",
                n: self.cardinality,
                cap: WEIGHT_CAP,
            });
        }
        Ok(())
    }
}

fn has_exact_path(req: &WeightRequest) -> bool {
    if req.potential.is_ideal() {
        return true;
    }
    req.bx.dim == 1
        && req.potential.is_hard_core()
        && req.cardinality <= 4
        && match req.bx.bc {
            // the pinned-line reduction needs clusters that cannot wrap
            BoundaryCondition::Periodic => {
                req.bx.ell > 2.0 * req.cardinality as f64 * req.potential.range()
            }
            BoundaryCondition::Zero => true,
        }
}

/// Polymer activity: the connected-graph sum of normalized Mayer integrals
/// over the box. Exact for 1D hard cores up to cardinality 4, otherwise
/// Monte Carlo with a default budget.
pub fn polymer_weight(req: &WeightRequest) -> Result<Measurement> {
    req.validate()?;
    if req.potential.is_ideal() {
        // every Mayer factor vanishes
        return Ok(Measurement::exact(0.0));
    }
    if has_exact_path(req) {
        return polymer_weight_exact(req);
    }
    polymer_weight_mc(req, McConfig::new(1_000_000, 0))
}

fn polymer_weight_exact(req: &WeightRequest) -> Result<Measurement> {
    let n = req.cardinality;
    let r = rat_from_f64(req.potential.range())?;
    let ell = rat_from_f64(req.bx.ell)?;
    let n_rat = Rat::from_integer(BigInt::from(n));
    let value = match (req.bx.bc, req.rooted) {
        (BoundaryCondition::Periodic, rooted) => {
            // translation invariance pins one particle; ell^(n-1) normalizes
            let integral = exact1d::connected_cluster_integral_line(n, &r)?;
            let mut vol = Rat::one();
            for _ in 0..n - 1 {
                vol *= &ell;
            }
            let plain = integral / vol;
            match rooted {
                None => plain,
                // no boundary on the torus: interior keeps 1/|V|, boundary
                // color has empty support
                Some(RootColor::Interior) => plain / n_rat,
                Some(RootColor::Boundary) => Rat::zero(),
            }
        }
        (BoundaryCondition::Zero, rooted) => {
            let mut vol = Rat::one();
            for _ in 0..n {
                vol *= &ell;
            }
            match rooted {
                None => exact1d::connected_cluster_integral_box(n, &r, &ell)? / vol,
                Some(color) => {
                    let width = &n_rat * &r;
                    let lo = width.clone();
                    let hi = &ell - &width;
                    let interior = if lo < hi {
                        exact1d::rooted_cluster_integral_box(n, &r, &ell, 0, &lo, &hi)?
                    } else {
                        Rat::zero()
                    };
                    let picked = match color {
                        RootColor::Interior => interior,
                        RootColor::Boundary => {
                            exact1d::connected_cluster_integral_box(n, &r, &ell)? - interior
                        }
                    };
                    picked / (vol * n_rat)
                }
            }
        }
    };
    Ok(Measurement::exact(rat_to_f64(&value)))
}

/// Monte Carlo polymer activity with an explicit sampling budget.
pub fn polymer_weight_mc(req: &WeightRequest, cfg: McConfig) -> Result<Measurement> {
    req.validate()?;
    if cfg.samples == 0 {
        return Err(Error::InvalidInput("Monte Carlo budget must be positive".into()));
    }
    mc_weight_with_shift(req, cfg, 0.0)
}

/// The integrand is torus-translation invariant; the shift hook exists so
/// tests can verify that shifting every sample leaves the periodic estimate
/// bit-identical.
fn mc_weight_with_shift(req: &WeightRequest, cfg: McConfig, shift: f64) -> Result<Measurement> {
    let n = req.cardinality;
    let d = req.bx.dim;
    let bx = req.bx;
    let beta = req.beta;
    let pot = req.potential;
    let half = bx.ell / 2.0;
    let bounds = vec![(-half, half); n * d];
    let rooted = req.rooted;
    let range = pot.range();
    let est = mc::integrate_uniform(&bounds, cfg, move |x| {
        let mut pos: Vec<f64> = x.to_vec();
        if shift != 0.0 {
            for p in pos.chunks_mut(d) {
                for v in p.iter_mut() {
                    *v += shift;
                }
                bx.wrap(p);
            }
        }
        let f = |i: usize, j: usize| {
            pot.mayer_radial(beta, bx.distance(&pos[i * d..(i + 1) * d], &pos[j * d..(j + 1) * d]))
        };
        let mut val = connected_edge_sum(n, &f);
        if let Some(color) = rooted {
            let dist = bx.distance_to_boundary(&pos[0..d]);
            let near = dist < range * n as f64;
            let indicator = match color {
                RootColor::Boundary => near,
                RootColor::Interior => !near,
            };
            val *= if indicator { 1.0 } else { 0.0 } / n as f64;
        }
        val
    });
    let volume = bx.volume().powi(n as i32);
    Ok(Measurement::monte_carlo(est.mean / volume, est.stderr / volume, cfg.seed))
}

#[cfg(test)]
pub(crate) fn polymer_weight_mc_shifted(
    req: &WeightRequest,
    cfg: McConfig,
    shift: f64,
) -> Result<Measurement> {
    mc_weight_with_shift(req, cfg, shift)
}

/// Irreducible coefficient of order n: (1/n!) times the sum over 2-connected
/// graphs on n+1 vertices of the Mayer-product integral with one vertex
/// pinned at the origin. Exact in 1D for hard cores up to n = 3; Monte Carlo
/// otherwise (the integration domain [-nR, nR]^(dn) is exact by finite
/// range).
pub fn irreducible_coefficient(
    n: usize,
    potential: &PairPotential,
    beta: f64,
    d: usize,
) -> Result<Measurement> {
    validate_order(n, d)?;
    if potential.is_ideal() {
        return Ok(Measurement::exact(0.0));
    }
    if n == 1 {
        // the only 2-connected graph on two vertices is the single edge, so
        // the first order is the signed Mayer integral for every kind
        return potential.mayer_integral(beta, d);
    }
    if d == 1 && potential.is_hard_core() && n <= 3 {
        let r = rat_from_f64(potential.range())?;
        let mut value = exact1d::biconnected_cluster_integral_line(n + 1, &r)?;
        for k in 2..=n {
            value /= Rat::from_integer(BigInt::from(k));
        }
        return Ok(Measurement::exact(rat_to_f64(&value)));
    }
    irreducible_coefficient_mc(n, potential, beta, d, McConfig::new(1_000_000, 0))
}

/// Monte Carlo route for the irreducible coefficient.
pub fn irreducible_coefficient_mc(
    n: usize,
    potential: &PairPotential,
    beta: f64,
    d: usize,
    cfg: McConfig,
) -> Result<Measurement> {
    validate_order(n, d)?;
    if potential.is_ideal() {
        return Ok(Measurement::exact(0.0));
    }
    let graphs = enumerate_biconnected(n + 1)?;
    let span = n as f64 * potential.range();
    let bounds = vec![(-span, span); n * d];
    let est = mc::integrate_uniform(&bounds, cfg, |x| {
        // q_1 pinned at the origin, q_2.. laid out from the sample
        let coord = |i: usize, k: usize| if i == 0 { 0.0 } else { x[(i - 1) * d + k] };
        let mut total = 0.0;
        for g in &graphs {
            // the Mayer factors carry the sign of the graph term themselves
            let mut term = 1.0;
            for (a, b) in g.edges() {
                let mut s = 0.0;
                for k in 0..d {
                    let dd = coord(a - 1, k) - coord(b - 1, k);
                    s += dd * dd;
                }
                term *= potential.mayer_radial(beta, s.sqrt());
                if term == 0.0 {
                    break;
                }
            }
            total += term;
        }
        total
    });
    let mut factorial = 1.0;
    for k in 2..=n {
        factorial *= k as f64;
    }
    Ok(Measurement::monte_carlo(est.mean / factorial, est.stderr / factorial, cfg.seed))
}

fn validate_order(n: usize, d: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidInput("irreducible coefficients start at n = 1".into()));
    }
    if n + 1 > WEIGHT_CAP {
        return Err(Error::CapExceeded { what: "irreducible coefficient", n, cap: WEIGHT_CAP - 1 });
    }
    if !(1..=3).contains(&d) {
        return Err(Error::Unsupported(format!("dimension {d} not in 1..=3")));
    }
    Ok(())
}

/// Result of sampling the tree-graph inequality.
#[derive(Clone, Debug, Serialize)]
pub struct TreeGraphReport {
    pub configs: usize,
    pub violations: usize,
    pub max_ratio: f64,
    pub seed: u64,
}

/// Samples configurations in a cube of the given side and checks
/// |sum over connected graphs of the Mayer product| against
/// e^(2 beta B n) times the spanning-tree sum of |f| factors.
pub fn tree_graph_bound_report(
    n: usize,
    potential: &PairPotential,
    beta: f64,
    stability_b: f64,
    d: usize,
    side: f64,
    configs: usize,
    seed: u64,
) -> Result<TreeGraphReport> {
    use rand::Rng;
    if n > WEIGHT_CAP {
        return Err(Error::CapExceeded { what: "tree_graph_bound_report", n, cap: WEIGHT_CAP });
    }
    let trees = enumerate_trees(n)?;
    // graph enumeration only to assert the cap; the connected sum uses the
    // subset recursion
    let _ = enumerate_connected(n)?;
    let mut rng = mc::stream_rng(seed, 0);
    let mut max_ratio: f64 = 0.0;
    let mut violations = 0usize;
    let prefactor = (2.0 * beta * stability_b * n as f64).exp();
    for _ in 0..configs {
        let pos: Vec<f64> = (0..n * d).map(|_| rng.random_range(0.0..side)).collect();
        let fmat = |i: usize, j: usize| {
            let mut s = 0.0;
            for k in 0..d {
                let dd = pos[i * d + k] - pos[j * d + k];
                s += dd * dd;
            }
            potential.mayer_radial(beta, s.sqrt())
        };
        let lhs = connected_edge_sum(n, &fmat).abs();
        let mut tree_sum = 0.0;
        for t in &trees {
            let mut term = 1.0;
            for (a, b) in t.edges() {
                term *= fmat(a - 1, b - 1).abs();
                if term == 0.0 {
                    break;
                }
            }
            tree_sum += term;
        }
        let rhs = prefactor * tree_sum;
        // the absolute slack absorbs roundoff in the subset recursion when
        // the overlap graph is disconnected and both sides vanish
        if lhs > rhs + 1e-9 * rhs.max(1.0) {
            violations += 1;
        }
        if rhs > 1e-12 {
            max_ratio = max_ratio.max(lhs / rhs);
        }
    }
    Ok(TreeGraphReport { configs, violations, max_ratio, seed })
}

/// Analytic activity upper bound e^((2 beta B + a) n) n^(n-2) C^(n-1) /
/// |Lambda|^(n-1), with the extra surface factor 2 d R / ell for
/// boundary-rooted polymers.
pub fn activity_bound(
    n: usize,
    potential: &PairPotential,
    beta: f64,
    bx: &BoxSpec,
    a: f64,
    rooted: Option<RootColor>,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidInput("activity bound needs |V| >= 2".into()));
    }
    let c = potential.c_beta(beta, bx.dim)?.value;
    let b = potential.stability_constant();
    let nf = n as f64;
    let base = ((2.0 * beta * b + a) * nf).exp() * nf.powi(n as i32 - 2)
        * (c / bx.volume()).powi(n as i32 - 1);
    Ok(match rooted {
        Some(RootColor::Boundary) => {
            base * 2.0 * bx.dim as f64 * potential.range() / bx.ell
        }
        _ => base,
    })
}

/// JSON record for CLI output: operation, parameters, and the measurement.
#[derive(Serialize)]
pub struct WeightRecord<'a> {
    pub op: &'a str,
    pub params: serde_json::Value,
    pub value: f64,
    pub stderr: f64,
    pub method: crate::measure::Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl<'a> WeightRecord<'a> {
    pub fn new(op: &'a str, params: serde_json::Value, m: &Measurement) -> Self {
        Self { op, params, value: m.value, stderr: m.stderr, method: m.method, seed: m.seed }
    }
}
