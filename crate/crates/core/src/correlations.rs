//! Truncated correlation functions through the source-augmented generating
//! function.
//!
//! A point source is realized as the indicator of a small ball of radius
//! eta; the generating function Psi(a1, a2) multiplies the Boltzmann weight
//! by (1 + a_i h_i(q_i)) and is multilinear in the a's, so its four
//! coefficients determine the ball-averaged labelled correlation functions
//! exactly. Coefficients are extracted directly; central finite differences
//! of log Psi survive as a cross-check.

use serde::Serialize;

use crate::gibbs::{estimate_correlation, run_chain, ChainConfig, CorrelationKind};
use crate::mc::{self, McConfig};
use crate::measure::{Measurement, Method};
use crate::oracle;
use crate::polymer::connected_edge_sum;
use crate::potential::{ball_volume, BoundaryCondition, BoxSpec, PairPotential};
use crate::{Error, Result};

/// An eta-ball source around a fixed point of the box.
#[derive(Clone, Debug, Serialize)]
pub struct SourceBall {
    pub center: Vec<f64>,
    pub eta: f64,
}

impl SourceBall {
    pub fn new(center: Vec<f64>, eta: f64, bx: &BoxSpec) -> Result<Self> {
        if !(eta > 0.0) {
            return Err(Error::InvalidInput("source radius must be positive".into()));
        }
        if center.len() != bx.dim {
            return Err(Error::InvalidInput("source center has the wrong dimension".into()));
        }
        match bx.bc {
            BoundaryCondition::Periodic => {
                if 2.0 * eta >= bx.ell {
                    return Err(Error::InvalidInput("source ball wraps around the torus".into()));
                }
            }
            BoundaryCondition::Zero => {
                let half = bx.ell / 2.0;
                if center.iter().any(|&x| x.abs() + eta > half) {
                    return Err(Error::InvalidInput("source ball leaves the box".into()));
                }
            }
        }
        Ok(Self { center, eta })
    }

    pub fn volume(&self, dim: usize) -> f64 {
        ball_volume(dim, self.eta)
    }

    fn contains(&self, point: &[f64], bx: &BoxSpec) -> bool {
        bx.distance(point, &self.center) <= self.eta
    }
}

#[derive(Clone, Debug)]
pub struct PsiRequest<'a> {
    pub n: usize,
    pub bx: BoxSpec,
    pub potential: &'a PairPotential,
    pub beta: f64,
    pub source1: Option<SourceBall>,
    pub source2: Option<SourceBall>,
}

/// The four multilinear coefficients of Psi(a1, a2) = c00 + c10 a1 + c01 a2
/// + c11 a1 a2, with statistical errors when Monte Carlo was used.
/// c00 is the interaction partition function.
#[derive(Clone, Debug, Serialize)]
pub struct PsiCoefficients {
    pub c00: f64,
    pub c10: f64,
    pub c01: f64,
    pub c11: f64,
    #[serde(skip)]
    pub stderr: [f64; 4],
    #[serde(skip)]
    pub method: Method,
    #[serde(skip)]
    pub seed: Option<u64>,
}

impl PsiCoefficients {
    pub fn psi_value(&self, a1: f64, a2: f64) -> f64 {
        self.c00 + self.c10 * a1 + self.c01 * a2 + self.c11 * a1 * a2
    }
}

/// Length of the overlap of two arcs on a circle of length ell (arc i is the
/// set within radius r_i of center c_i).
fn torus_arc_overlap(ell: f64, c1: f64, r1: f64, c2: f64, r2: f64) -> f64 {
    let a = 2.0 * r1;
    let b = 2.0 * r2;
    // shift so the first arc is [0, a]
    let mut s = (c2 - r2) - (c1 - r1);
    s -= ell * (s / ell).floor();
    let direct = (a.min(s + b) - s).max(0.0);
    let wrapped = (a.min(s + b - ell)).max(0.0);
    direct + wrapped
}

fn exact_two_rod_coefficients(req: &PsiRequest) -> Result<PsiCoefficients> {
    let ell = req.bx.ell;
    let r = req.potential.range();
    let s1 = req.source1.as_ref().unwrap();
    let s2 = req.source2.as_ref().unwrap();
    let c00 = 1.0 - 2.0 * r / ell;
    let c10 = s1.volume(1) * (ell - 2.0 * r) / (ell * ell);
    let c01 = s2.volume(1) * (ell - 2.0 * r) / (ell * ell);
    // c11 = (1/ell^2) int over the first ball of |B2 \ B_R(q1)|
    let steps = 20_000;
    let h = 2.0 * s1.eta / steps as f64;
    let mut acc = 0.0;
    for i in 0..steps {
        let q1 = s1.center[0] - s1.eta + (i as f64 + 0.5) * h;
        let overlap = torus_arc_overlap(ell, s2.center[0], s2.eta, q1, r);
        acc += 2.0 * s2.eta - overlap;
    }
    let c11 = acc * h / (ell * ell);
    Ok(PsiCoefficients {
        c00,
        c10,
        c01,
        c11,
        stderr: [0.0; 4],
        method: Method::Quadrature,
        seed: None,
    })
}

/// Extracts the Psi coefficients. Ideal gases and the two-rod periodic case
/// have closed paths; everything else uses common-random-number Monte Carlo
/// with the given budget (N <= 8).
pub fn psi_coefficients(req: &PsiRequest, cfg: Option<McConfig>) -> Result<PsiCoefficients> {
    if req.n == 0 {
        return Err(Error::InvalidInput("need at least one particle".into()));
    }
    if req.potential.is_ideal() {
        let v = req.bx.volume();
        let b1 = req.source1.as_ref().map_or(0.0, |s| s.volume(req.bx.dim) / v);
        let b2 = req.source2.as_ref().map_or(0.0, |s| s.volume(req.bx.dim) / v);
        return Ok(PsiCoefficients {
            c00: 1.0,
            c10: b1,
            c01: b2,
            c11: b1 * b2,
            stderr: [0.0; 4],
            method: Method::Exact,
            seed: None,
        });
    }
    let two_rod_exact = req.n == 2
        && req.bx.dim == 1
        && req.bx.bc == BoundaryCondition::Periodic
        && req.potential.is_hard_core()
        && req.bx.ell > 2.0 * req.potential.range()
        && req.source1.is_some()
        && req.source2.is_some();
    if two_rod_exact && cfg.is_none() {
        return exact_two_rod_coefficients(req);
    }
    let cfg = cfg.unwrap_or(McConfig::new(1_000_000, 0));
    if req.n > 8 {
        return Err(Error::CapExceeded { what: "psi coefficients", n: req.n, cap: 8 });
    }
    let d = req.bx.dim;
    let half = req.bx.ell / 2.0;
    let bounds = vec![(-half, half); req.n * d];
    let bx = req.bx;
    let pot = req.potential;
    let beta = req.beta;
    // the same sample stream evaluates all four coefficients, so the
    // multilinear extraction is exact given the samples
    let run = |which: usize| -> crate::mc::McEstimate {
        mc::sample_mean(&bounds, cfg, |x, _| {
            let e = crate::potential::total_energy(pot, &bx, x);
            if !e.is_finite() {
                return 0.0;
            }
            let w = (-beta * e).exp();
            let h1 = req.source1.as_ref().map_or(0.0, |s| {
                if s.contains(&x[0..d], &bx) {
                    1.0
                } else {
                    0.0
                }
            });
            let h2 = req.source2.as_ref().map_or(0.0, |s| {
                if req.n >= 2 && s.contains(&x[d..2 * d], &bx) {
                    1.0
                } else {
                    0.0
                }
            });
            match which {
                0 => w,
                1 => w * h1,
                2 => w * h2,
                _ => w * h1 * h2,
            }
        })
    };
    let e00 = run(0);
    let e10 = run(1);
    let e01 = run(2);
    let e11 = run(3);
    Ok(PsiCoefficients {
        c00: e00.mean,
        c10: e10.mean,
        c01: e01.mean,
        c11: e11.mean,
        stderr: [e00.stderr, e10.stderr, e01.stderr, e11.stderr],
        method: Method::MonteCarlo,
        seed: Some(cfg.seed),
    })
}

/// Direct evaluation of Psi(a1, a2) itself (the normalized integral with the
/// source factors); a1 = a2 = 0 recovers the interaction partition function.
pub fn psi_bruteforce(
    req: &PsiRequest,
    a1: f64,
    a2: f64,
    cfg: Option<McConfig>,
) -> Result<Measurement> {
    let coeffs = psi_coefficients(req, cfg)?;
    let value = coeffs.psi_value(a1, a2);
    let stderr = coeffs.stderr[0]
        + coeffs.stderr[1] * a1.abs()
        + coeffs.stderr[2] * a2.abs()
        + coeffs.stderr[3] * (a1 * a2).abs();
    Ok(Measurement { value, stderr, method: coeffs.method, seed: coeffs.seed })
}

/// Ball-averaged labelled one-point function
/// |Lambda| c10 / (c00 |B_eta|), from the coefficients.
pub fn one_point_estimate(req: &PsiRequest, cfg: Option<McConfig>) -> Result<Measurement> {
    let s1 = req
        .source1
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("one-point estimate needs source 1".into()))?;
    let ball = s1.volume(req.bx.dim);
    let coeffs = psi_coefficients(req, cfg)?;
    let value = req.bx.volume() * coeffs.c10 / (coeffs.c00 * ball);
    let rel = if coeffs.c10 != 0.0 {
        (coeffs.stderr[1] / coeffs.c10).hypot(coeffs.stderr[0] / coeffs.c00)
    } else {
        0.0
    };
    Ok(Measurement {
        value,
        stderr: value.abs() * rel,
        method: coeffs.method,
        seed: coeffs.seed,
    })
}

/// Central-difference route |Lambda| (log Psi(da) - log Psi(-da)) / (2 da)
/// / |B_eta|; kept as a cross-check of the coefficient extraction.
pub fn one_point_finite_difference(
    req: &PsiRequest,
    da: f64,
    cfg: Option<McConfig>,
) -> Result<f64> {
    let s1 = req
        .source1
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("one-point estimate needs source 1".into()))?;
    let ball = s1.volume(req.bx.dim);
    let coeffs = psi_coefficients(req, cfg)?;
    let plus = coeffs.psi_value(da, 0.0).ln();
    let minus = coeffs.psi_value(-da, 0.0).ln();
    Ok(req.bx.volume() * (plus - minus) / (2.0 * da) / ball)
}

/// Ball-averaged truncated labelled two-point function
/// |Lambda|^2 (c11/c00 - c10 c01 / c00^2) / |B_eta|^2.
pub fn truncated_two_point(req: &PsiRequest, cfg: Option<McConfig>) -> Result<Measurement> {
    let (s1, s2) = match (&req.source1, &req.source2) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InvalidInput("two-point estimate needs both sources".into())),
    };
    let balls = s1.volume(req.bx.dim) * s2.volume(req.bx.dim);
    let coeffs = psi_coefficients(req, cfg)?;
    let connected = coeffs.c11 / coeffs.c00 - coeffs.c10 * coeffs.c01 / (coeffs.c00 * coeffs.c00);
    let value = req.bx.volume() * req.bx.volume() * connected / balls;
    let scale = req.bx.volume() * req.bx.volume() / balls;
    let stderr = scale
        * ((coeffs.stderr[3] / coeffs.c00).powi(2)
            + (coeffs.stderr[1] * coeffs.c01 / (coeffs.c00 * coeffs.c00)).powi(2)
            + (coeffs.stderr[2] * coeffs.c10 / (coeffs.c00 * coeffs.c00)).powi(2)
            + (coeffs.stderr[0] * connected / coeffs.c00).powi(2))
        .sqrt();
    Ok(Measurement { value, stderr, method: coeffs.method, seed: coeffs.seed })
}

/// Mixed 4-point stencil on log Psi, the cross-check of
/// [`truncated_two_point`].
pub fn truncated_two_point_finite_difference(
    req: &PsiRequest,
    da: f64,
    cfg: Option<McConfig>,
) -> Result<f64> {
    let (s1, s2) = match (&req.source1, &req.source2) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InvalidInput("two-point estimate needs both sources".into())),
    };
    let balls = s1.volume(req.bx.dim) * s2.volume(req.bx.dim);
    let coeffs = psi_coefficients(req, cfg)?;
    let pp = coeffs.psi_value(da, da).ln();
    let pm = coeffs.psi_value(da, -da).ln();
    let mp = coeffs.psi_value(-da, da).ln();
    let mm = coeffs.psi_value(-da, -da).ln();
    let mixed = (pp - pm - mp + mm) / (4.0 * da * da);
    Ok(req.bx.volume() * req.bx.volume() * mixed / balls)
}

/// Coefficient of the marked-source monomial prod_{i in marks} a_i in the
/// activity of a polymer of the given cardinality: the connected Mayer sum
/// with the marked coordinates integrated against their source balls.
pub fn marked_polymer_weight(
    v_size: usize,
    marks: &[usize],
    sources: (Option<&SourceBall>, Option<&SourceBall>),
    potential: &PairPotential,
    beta: f64,
    bx: &BoxSpec,
    cfg: Option<McConfig>,
) -> Result<Measurement> {
    if marks.iter().any(|&m| m != 1 && m != 2) || marks.len() > 2 {
        return Err(Error::InvalidInput("marks name the sources 1 and 2".into()));
    }
    let source_of = |m: usize| -> Result<&SourceBall> {
        let s = if m == 1 { sources.0 } else { sources.1 };
        s.ok_or_else(|| Error::InvalidInput(format!("mark {m} has no source")))
    };
    // special single-label polymers carry only the source integral
    if v_size == 1 {
        if marks.len() != 1 {
            return Err(Error::InvalidInput(
                "a single-label polymer must carry exactly one mark".into(),
            ));
        }
        let s = source_of(marks[0])?;
        return Ok(Measurement::exact(s.volume(bx.dim) / bx.volume()));
    }
    if marks.is_empty() {
        return crate::weights::polymer_weight(&crate::weights::WeightRequest::new(
            v_size, potential, beta, *bx,
        ));
    }
    if v_size > crate::weights::WEIGHT_CAP {
        return Err(Error::CapExceeded {
            what: "marked polymer weight",
            n: v_size,
            cap: crate::weights::WEIGHT_CAP,
        });
    }
    // exact paths for two-label polymers on the 1D torus (hard core)
    let torus_pair = bx.dim == 1
        && potential.is_hard_core()
        && bx.bc == BoundaryCondition::Periodic
        && bx.ell > 2.0 * potential.range();
    if v_size == 2 && marks.len() == 1 && torus_pair && cfg.is_none() {
        // the free coordinate integrates the Mayer function over the torus
        // regardless of where the marked one sits
        let s = source_of(marks[0])?;
        let value = s.volume(1) * (-2.0 * potential.range()) / (bx.ell * bx.ell);
        return Ok(Measurement::exact(value));
    }
    if v_size == 2 && marks == [1, 2] && torus_pair && cfg.is_none() {
        let s1 = source_of(1)?;
        let s2 = source_of(2)?;
        let r = potential.range();
        let steps = 20_000;
        let h = 2.0 * s1.eta / steps as f64;
        let mut acc = 0.0;
        for i in 0..steps {
            let q1 = s1.center[0] - s1.eta + (i as f64 + 0.5) * h;
            acc += torus_arc_overlap(bx.ell, s2.center[0], s2.eta, q1, r);
        }
        // f = -1 on the overlap
        let value = -acc * h / (bx.ell * bx.ell);
        return Ok(Measurement::quadrature(value, 1e-12 * acc.abs().max(1.0)));
    }
    // Monte Carlo: marked coordinates sampled in their balls with the
    // |B| / |Lambda| importance factor, unmarked coordinates uniform
    let cfg = cfg.unwrap_or(McConfig::new(1_000_000, 0));
    let d = bx.dim;
    let half = bx.ell / 2.0;
    let bounds = vec![(-half, half); v_size * d];
    let marked: Vec<usize> = marks.to_vec();
    let src: Vec<&SourceBall> = marks.iter().map(|&m| source_of(m)).collect::<Result<_>>()?;
    let importance: f64 = src.iter().map(|s| s.volume(d) / bx.volume()).product();
    let bxc = *bx;
    let est = mc::sample_mean(&bounds, cfg, |x, rng| {
        use rand::Rng;
        let mut pos = x.to_vec();
        // rejection-sample the marked coordinates inside their balls
        for (slot, s) in marked.iter().zip(&src) {
            let i = slot - 1;
            loop {
                let mut inside = 0.0;
                for k in 0..d {
                    let v = s.center[k] + rng.random_range(-s.eta..s.eta);
                    pos[i * d + k] = v;
                    inside += (v - s.center[k]) * (v - s.center[k]);
                }
                if inside.sqrt() <= s.eta {
                    break;
                }
            }
            // wrap into the torus if needed
            let mut p = [0.0; 3];
            p[..d].copy_from_slice(&pos[i * d..(i + 1) * d]);
            bxc.wrap(&mut p[..d]);
            pos[i * d..(i + 1) * d].copy_from_slice(&p[..d]);
        }
        let f = |i: usize, j: usize| {
            potential
                .mayer_radial(beta, bxc.distance(&pos[i * d..(i + 1) * d], &pos[j * d..(j + 1) * d]))
        };
        connected_edge_sum(v_size, &f)
    });
    Ok(Measurement::monte_carlo(est.mean * importance, est.stderr * importance, cfg.seed))
}

/// One separation of the decay table.
#[derive(Clone, Debug, Serialize)]
pub struct DecayRow {
    pub r: f64,
    pub truncated: f64,
    pub stderr: f64,
    /// Exact canonical value when the potential admits one (1D hard rods).
    pub exact: Option<f64>,
    pub envelope: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayProfile {
    pub rows: Vec<DecayRow>,
    /// Fitted plateau constant of the envelope, as C2 C(beta,R)/|Lambda|.
    pub c2: f64,
    pub c3: f64,
    /// Least-squares decay rate of |T(r) - plateau| over the fit window.
    pub fitted_rate: f64,
    pub seed: u64,
}

impl DecayProfile {
    /// CSV rows `r,truncated,stderr,envelope,pass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,truncated,stderr,envelope,pass\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{:.6},{:.10e},{:.10e},{:.10e},{}\n",
                row.r, row.truncated, row.stderr, row.envelope, row.pass
            ));
        }
        out
    }
}

pub struct DecayParams<'a> {
    pub n: usize,
    pub bx: BoxSpec,
    pub potential: &'a PairPotential,
    pub beta: f64,
    pub separations: Vec<f64>,
    pub sweeps: usize,
    pub stride_sweeps: usize,
    pub seed: u64,
}

/// Measures the truncated labelled correlation at the requested separations,
/// fits the envelope (plateau constant plus exponential with the interaction
/// range as reference scale), and reports per-row pass flags.
///
/// The decaying part sits on top of a canonical plateau of order
/// C(beta,R)/|Lambda| which does not decay with distance (for two rods the
/// truncated function beyond contact is exactly the constant |B_R|/|Lambda
/// minus B_R|), so the decay rate is fitted on |T(r) - plateau|; for hard
/// rods the fit uses the exact canonical curve.
pub fn decay_profile(params: &DecayParams) -> Result<DecayProfile> {
    let bx = params.bx;
    if bx.bc != BoundaryCondition::Periodic || bx.dim != 1 {
        return Err(Error::Unsupported("decay profiles run on the 1D torus".into()));
    }
    let range = params.potential.range();
    let c_beta = params.potential.c_beta(params.beta, 1)?.value;
    let hard_rod = params.potential.is_hard_core();
    // measured curve
    let cfg = ChainConfig::new(params.n, bx, params.potential, params.beta, params.sweeps, params.seed)
        .with_stride(params.stride_sweeps);
    let out = run_chain(&cfg)?;
    let bins = if range > 0.0 {
        ((bx.ell / 2.0 / (range / 4.0)).round() as usize).clamp(10, 2000)
    } else {
        40
    };
    let est = estimate_correlation(&out.snapshots, &bx, CorrelationKind::TruncatedLabelled, bins, params.seed)?;
    let exact_at = |r: f64| -> Result<Option<f64>> {
        if hard_rod {
            Ok(Some(oracle::tonks_truncated_pair(params.n, bx.ell, range, r)?))
        } else {
            Ok(None)
        }
    };
    // plateau estimate: the exact (or measured) value at the farthest
    // requested separation
    let far = params.separations.iter().cloned().fold(0.0f64, f64::max);
    let plateau = match exact_at(far)? {
        Some(v) => v,
        None => est.at(far).map(|(v, _)| v).unwrap_or(0.0),
    };
    let c2 = if c_beta > 0.0 { plateau.abs() * bx.volume() / c_beta } else { 0.0 };
    // residual curve on the fit window [2R, 8R]
    let mut fit_points = Vec::new();
    let mut c3: f64 = 0.0;
    for &r in &params.separations {
        if r < 2.0 * range - 1e-9 || r > 8.0 * range + 1e-9 {
            continue;
        }
        let t = match exact_at(r)? {
            Some(v) => v,
            None => est.at(r).map(|(v, _)| v).unwrap_or(0.0),
        };
        let resid = (t - plateau).abs();
        if resid > 1e-13 {
            fit_points.push((r, resid.ln()));
            c3 = c3.max(resid * (r / range).exp());
        }
    }
    let fitted_rate = if fit_points.len() >= 2 {
        let n = fit_points.len() as f64;
        let sx: f64 = fit_points.iter().map(|p| p.0).sum();
        let sy: f64 = fit_points.iter().map(|p| p.1).sum();
        let sxx: f64 = fit_points.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = fit_points.iter().map(|p| p.0 * p.1).sum();
        -(n * sxy - sx * sy) / (n * sxx - sx * sx)
    } else {
        f64::NAN
    };
    let mut rows = Vec::new();
    for &r in &params.separations {
        let (measured, stderr) = est
            .at(r)
            .ok_or_else(|| Error::InvalidInput(format!("separation {r} outside [0, ell/2)")))?;
        let indicator = if r <= range { 1.0 / (1.0 - c_beta / bx.volume()) } else { 0.0 };
        let envelope = indicator + c2 * c_beta / bx.volume() + c3 * (-r / range).exp();
        let pass = measured.abs() <= envelope + 3.0 * stderr;
        rows.push(DecayRow { r, truncated: measured, stderr, exact: exact_at(r)?, envelope, pass });
    }
    Ok(DecayProfile { rows, c2, c3, fitted_rate, seed: params.seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn hard_rod() -> PairPotential {
        PairPotential::hard_core(1.0).unwrap()
    }

    fn torus_box(ell: f64) -> BoxSpec {
        BoxSpec::new(ell, 1, BoundaryCondition::Periodic).unwrap()
    }

    fn two_rod_request<'a>(
        pot: &'a PairPotential,
        ell: f64,
        q1: f64,
        q2: f64,
        eta: f64,
    ) -> PsiRequest<'a> {
        let bx = torus_box(ell);
        PsiRequest {
            n: 2,
            bx,
            potential: pot,
            beta: 1.0,
            source1: Some(SourceBall::new(vec![q1], eta, &bx).unwrap()),
            source2: Some(SourceBall::new(vec![q2], eta, &bx).unwrap()),
        }
    }

    #[test]
    fn arc_overlap_matches_brute_force() {
        let ell = 10.0;
        for (c1, r1, c2, r2) in [
            (0.0, 1.0, 0.5, 0.2),
            (4.9, 0.3, -4.9, 0.4),
            (2.0, 1.5, 2.0, 0.1),
            (-3.0, 0.05, 3.0, 2.0),
        ] {
            let got = torus_arc_overlap(ell, c1, r1, c2, r2);
            let steps = 2_000_000;
            let h = ell / steps as f64;
            let mut brute = 0.0;
            let bx = torus_box(ell);
            for i in 0..steps {
                let x = -5.0 + (i as f64 + 0.5) * h;
                if bx.distance(&[x], &[c1]) <= r1 && bx.distance(&[x], &[c2]) <= r2 {
                    brute += h;
                }
            }
            assert!((got - brute).abs() < 1e-4, "{got} vs {brute}");
        }
    }

    #[test]
    fn psi_at_zero_is_z_int() {
        let pot = hard_rod();
        let req = two_rod_request(&pot, 10.0, 0.0, 3.0, 0.1);
        let coeffs = psi_coefficients(&req, None).unwrap();
        assert!((coeffs.c00 - 0.8).abs() < 1e-12);
        assert!((psi_bruteforce(&req, 0.0, 0.0, None).unwrap().value - 0.8).abs() < 1e-12);
    }

    #[test]
    fn ideal_gas_psi_separates() {
        let pot = PairPotential::ideal();
        let bx = torus_box(10.0);
        let req = PsiRequest {
            n: 3,
            bx,
            potential: &pot,
            beta: 1.0,
            source1: Some(SourceBall::new(vec![1.0], 0.2, &bx).unwrap()),
            source2: Some(SourceBall::new(vec![-2.0], 0.2, &bx).unwrap()),
        };
        let coeffs = psi_coefficients(&req, None).unwrap();
        assert!((coeffs.psi_value(0.7, 0.0) - (1.0 + 0.7 * 0.4 / 10.0)).abs() < 1e-12);
        // the connected part vanishes identically
        let t = truncated_two_point(&req, None).unwrap();
        assert_eq!(t.value, 0.0);
        let one = one_point_estimate(&req, None).unwrap();
        assert_eq!(one.value, 1.0);
    }

    #[test]
    fn two_rod_truncated_matches_closed_form() {
        let pot = hard_rod();
        // overlap separation: coefficient -|Lambda|/|Lambda - ball| plus the
        // constant; beyond contact only the constant survives
        for (sep, want) in [(0.5, -1.0), (2.0, 0.25)] {
            for eta in [0.2, 0.1, 0.05] {
                let req = two_rod_request(&pot, 10.0, 0.0, sep, eta);
                let t = truncated_two_point(&req, None).unwrap();
                assert!(
                    (t.value - want).abs() < 2e-2 * want.abs().max(1.0),
                    "sep {sep} eta {eta}: {} vs {want}",
                    t.value
                );
            }
        }
    }

    #[test]
    fn one_point_sees_the_wall_under_zero_bc() {
        // two hard rods in a closed box: the labelled one-point function is
        // |box minus exclusion zone around q1| / (ell Z_int), larger at the
        // walls where less of the exclusion zone fits inside
        let pot = hard_rod();
        let ell = 10.0;
        let bx = BoxSpec::new(ell, 1, BoundaryCondition::Zero).unwrap();
        let z_int = 1.0 - (2.0 * ell - 1.0) / (ell * ell);
        let closed_form = |q: f64| {
            let lo = (q - 1.0).max(-ell / 2.0);
            let hi = (q + 1.0).min(ell / 2.0);
            (ell - (hi - lo)) / (ell * z_int)
        };
        for q in [0.0, -4.8, 3.9] {
            let eta = 0.05;
            let req = PsiRequest {
                n: 2,
                bx,
                potential: &pot,
                beta: 1.0,
                source1: Some(SourceBall::new(vec![q], eta, &bx).unwrap()),
                source2: None,
            };
            let got = one_point_estimate(&req, Some(McConfig::new(3_000_000, 7))).unwrap();
            let want = closed_form(q);
            assert!(
                (got.value - want).abs() <= 3.0 * got.stderr + 0.01,
                "q = {q}: {} +- {} vs {want}",
                got.value,
                got.stderr
            );
            // bounded uniformly (wall value ~1.11 here)
            assert!(got.value.abs() <= 1.3);
        }
        // interior < wall
        assert!(closed_form(0.0) < closed_form(-4.8));
    }

    #[test]
    fn one_point_is_unity_on_the_torus() {
        let pot = hard_rod();
        for q in [0.0, 2.5, -4.0] {
            let req = two_rod_request(&pot, 10.0, q, 4.9, 0.1);
            let one = one_point_estimate(&req, None).unwrap();
            assert!((one.value - 1.0).abs() < 1e-9, "q = {q}: {}", one.value);
        }
    }

    #[test]
    fn finite_differences_agree_with_coefficients() {
        let pot = hard_rod();
        let req = two_rod_request(&pot, 10.0, 0.0, 2.0, 0.1);
        let one = one_point_estimate(&req, None).unwrap().value;
        let fd = one_point_finite_difference(&req, 1e-3, None).unwrap();
        assert!((one - fd).abs() < 1e-5, "{one} vs {fd}");
        let two = truncated_two_point(&req, None).unwrap().value;
        let fd2 = truncated_two_point_finite_difference(&req, 1e-3, None).unwrap();
        assert!((two - fd2).abs() < 1e-4 * two.abs().max(1.0), "{two} vs {fd2}");
    }

    #[test]
    fn mc_coefficients_agree_with_exact() {
        let pot = hard_rod();
        let req = two_rod_request(&pot, 10.0, 0.0, 2.0, 0.4);
        let exact = psi_coefficients(&req, None).unwrap();
        let mc = psi_coefficients(&req, Some(McConfig::new(2_000_000, 5).with_workers(2))).unwrap();
        assert!((mc.c00 - exact.c00).abs() <= 4.0 * mc.stderr[0]);
        assert!((mc.c10 - exact.c10).abs() <= 4.0 * mc.stderr[1]);
        assert!((mc.c11 - exact.c11).abs() <= 4.0 * mc.stderr[3] + 1e-9);
    }

    #[test]
    fn marked_weight_examples() {
        let pot = hard_rod();
        let bx = torus_box(10.0);
        let s1 = SourceBall::new(vec![0.0], 0.1, &bx).unwrap();
        let s2 = SourceBall::new(vec![0.5], 0.1, &bx).unwrap();
        // single-label polymer: |B| / |Lambda|
        let single =
            marked_polymer_weight(1, &[1], (Some(&s1), None), &pot, 1.0, &bx, None).unwrap();
        assert!((single.value - 0.02).abs() < 1e-15);
        // no marks reduces to the plain weight
        let plain =
            marked_polymer_weight(2, &[], (None, None), &pot, 1.0, &bx, None).unwrap();
        assert!((plain.value - (-0.2)).abs() < 1e-12);
        // one mark: the free coordinate contributes the Mayer integral -2R
        let one_marked =
            marked_polymer_weight(2, &[1], (Some(&s1), None), &pot, 1.0, &bx, None).unwrap();
        assert!((one_marked.value - (0.2 * -2.0 / 100.0)).abs() < 1e-15);
        let mc = marked_polymer_weight(
            2,
            &[1],
            (Some(&s1), None),
            &pot,
            1.0,
            &bx,
            Some(McConfig::new(300_000, 4)),
        )
        .unwrap();
        assert!((mc.value - one_marked.value).abs() <= 4.0 * mc.stderr);
        // both sources inside the hard core: the pair coefficient approaches
        // -|B1||B2|/|Lambda|^2
        let pair = marked_polymer_weight(
            2,
            &[1, 2],
            (Some(&s1), Some(&s2)),
            &pot,
            1.0,
            &bx,
            None,
        )
        .unwrap();
        let want = -(0.2 * 0.2) / 100.0;
        assert!((pair.value - want).abs() < 1e-6, "{} vs {want}", pair.value);
        // normalized per unit source volume it is -1/|Lambda|^2
        assert!((pair.value / (0.2 * 0.2) - (-0.01)).abs() < 1e-6);
        // separated sources: zero
        let s3 = SourceBall::new(vec![4.0], 0.1, &bx).unwrap();
        let far = marked_polymer_weight(
            2,
            &[1, 2],
            (Some(&s1), Some(&s3)),
            &pot,
            1.0,
            &bx,
            None,
        )
        .unwrap();
        assert_eq!(far.value, 0.0);
    }

    #[test]
    fn marked_weight_mc_agrees_with_exact_pair() {
        let pot = hard_rod();
        let bx = torus_box(10.0);
        let s1 = SourceBall::new(vec![0.0], 0.3, &bx).unwrap();
        let s2 = SourceBall::new(vec![0.4], 0.3, &bx).unwrap();
        let exact = marked_polymer_weight(
            2,
            &[1, 2],
            (Some(&s1), Some(&s2)),
            &pot,
            1.0,
            &bx,
            None,
        )
        .unwrap();
        let mc = marked_polymer_weight(
            2,
            &[1, 2],
            (Some(&s1), Some(&s2)),
            &pot,
            1.0,
            &bx,
            Some(McConfig::new(400_000, 9)),
        )
        .unwrap();
        assert!(
            (mc.value - exact.value).abs() <= 4.0 * mc.stderr + 1e-12,
            "{} vs {} +- {}",
            exact.value,
            mc.value,
            mc.stderr
        );
    }

    #[test]
    fn pair_class_resummation_is_geometric() {
        // the marked pair polymer with n plain copies carries coefficient
        // (-1)^n, and the plain weight is -C/|Lambda| exactly, so the class
        // sum telescopes into the geometric closed form; verified in exact
        // rational arithmetic
        use crate::polymer::{cluster_coefficient, support, MultiIndex};
        for ell in [10i64, 100] {
            let x = BigRational::new(BigInt::from(2), BigInt::from(ell)); // C/|Lambda|
            let marked = support(&[1, 2]);
            let plain = support(&[1, 3]); // same support size, overlapping
            let mut partial = BigRational::zero();
            let k_max = 8u32;
            for n in 0..=k_max {
                let c = if n == 0 {
                    BigRational::one()
                } else {
                    let idx =
                        MultiIndex::new(vec![(marked.clone(), 1), (plain.clone(), n)]).unwrap();
                    cluster_coefficient(&idx).unwrap()
                };
                // weight of the plain polymer is -x; the marked activity is
                // factored out of the class sum
                let mut w = BigRational::one();
                for _ in 0..n {
                    w *= -x.clone();
                }
                partial += c * w;
            }
            // partial geometric sum: (1 - x^(k+1)) / (1 - x)
            let mut x_pow = BigRational::one();
            for _ in 0..=k_max {
                x_pow *= x.clone();
            }
            let closed = (BigRational::one() - &x_pow) / (BigRational::one() - &x);
            assert_eq!(partial, closed, "ell = {ell}");
            // and the full resummation differs from 1/(1-x) by exactly the
            // dropped tail x^(k+1)/(1-x)
            let full = BigRational::one() / (BigRational::one() - &x);
            assert_eq!(full - partial, x_pow / (BigRational::one() - &x));
        }
    }

    #[test]
    fn decay_profile_two_rods() {
        let pot = hard_rod();
        let params = DecayParams {
            n: 2,
            bx: torus_box(10.0),
            potential: &pot,
            beta: 1.0,
            separations: vec![0.5, 2.0, 3.0, 4.0],
            sweeps: 40_000,
            stride_sweeps: 2,
            seed: 77,
        };
        let profile = decay_profile(&params).unwrap();
        for row in &profile.rows {
            assert!(row.pass, "r = {}: {} vs envelope {}", row.r, row.truncated, row.envelope);
            let exact = row.exact.unwrap();
            assert!(
                (row.truncated - exact).abs() <= 4.0 * row.stderr + 0.02,
                "r = {}: {} vs exact {exact}",
                row.r,
                row.truncated
            );
        }
        let csv = profile.to_csv();
        assert!(csv.starts_with("r,truncated,stderr,envelope,pass\n"));
        assert_eq!(csv.lines().count(), 5);
    }
}
