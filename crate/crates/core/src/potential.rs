//! Pair potentials, their Mayer functions, box geometry and the integrated
//! Mayer weight C(beta, R).
//!
//! All potentials are radial and of finite range: V(r) = 0 for r > R. The
//! hard core is +infinity inside the range; the square well is a flat
//! attractive (or repulsive) step; tabulated potentials interpolate a
//! user-supplied (r, V) table linearly and cut off hard at the range.

use serde::{Deserialize, Serialize};

use crate::measure::Measurement;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Kind {
    /// V identically zero.
    Ideal,
    /// +infinity for r <= range, 0 beyond.
    HardCore,
    /// -depth for r <= range, 0 beyond (depth > 0 is attractive).
    SquareWell { depth: f64 },
    /// Piecewise-linear interpolation of sorted (r, V) nodes on [0, range].
    Tabulated { points: Vec<(f64, f64)> },
}

/// A stable, finite-range pair potential together with its stability
/// constant B (the user-supplied lower-bound constant; 0 for hard cores).
#[derive(Clone, Debug, PartialEq)]
pub struct PairPotential {
    kind: Kind,
    range: f64,
    stability: f64,
}

impl PairPotential {
    pub fn ideal() -> Self {
        Self { kind: Kind::Ideal, range: 0.0, stability: 0.0 }
    }

    pub fn hard_core(range: f64) -> Result<Self> {
        if !(range > 0.0) {
            return Err(Error::InvalidInput("hard-core range must be positive".into()));
        }
        // a hard core is stable with B = 0
        Ok(Self { kind: Kind::HardCore, range, stability: 0.0 })
    }

    pub fn square_well(range: f64, depth: f64, stability: f64) -> Result<Self> {
        if !(range > 0.0) || !depth.is_finite() {
            return Err(Error::InvalidInput("square well needs range > 0, finite depth".into()));
        }
        if stability < 0.0 {
            return Err(Error::InvalidInput("stability constant must be >= 0".into()));
        }
        Ok(Self { kind: Kind::SquareWell { depth }, range, stability })
    }

    pub fn tabulated(mut points: Vec<(f64, f64)>, range: f64, stability: f64) -> Result<Self> {
        if !(range > 0.0) || points.is_empty() {
            return Err(Error::InvalidInput("tabulated potential needs range > 0 and nodes".into()));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        if points.iter().any(|&(r, v)| !(0.0..=range).contains(&r) || !v.is_finite()) {
            return Err(Error::InvalidInput(
                "table nodes must have finite V and r within [0, range]".into(),
            ));
        }
        if stability < 0.0 {
            return Err(Error::InvalidInput("stability constant must be >= 0".into()));
        }
        Ok(Self { kind: Kind::Tabulated { points }, range, stability })
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    /// The stability constant B with H >= -B N.
    pub fn stability_constant(&self) -> f64 {
        self.stability
    }

    pub fn is_ideal(&self) -> bool {
        matches!(self.kind, Kind::Ideal)
    }

    pub fn is_hard_core(&self) -> bool {
        matches!(self.kind, Kind::HardCore)
    }

    /// V at radial separation r; may be +infinity.
    pub fn eval_radial(&self, r: f64) -> f64 {
        if r > self.range {
            return 0.0;
        }
        match &self.kind {
            Kind::Ideal => 0.0,
            Kind::HardCore => f64::INFINITY,
            Kind::SquareWell { depth } => -depth,
            Kind::Tabulated { points } => {
                if points.len() == 1 || r <= points[0].0 {
                    return points[0].1;
                }
                match points.binary_search_by(|p| p.0.total_cmp(&r)) {
                    Ok(i) => points[i].1,
                    Err(i) => {
                        if i >= points.len() {
                            points[points.len() - 1].1
                        } else {
                            let (r0, v0) = points[i - 1];
                            let (r1, v1) = points[i];
                            v0 + (v1 - v0) * (r - r0) / (r1 - r0)
                        }
                    }
                }
            }
        }
    }

    /// V evaluated at a displacement vector.
    pub fn eval(&self, displacement: &[f64]) -> f64 {
        self.eval_radial(norm(displacement))
    }

    /// Mayer function e^(-beta V) - 1, with e^(-inf) = 0. Exactly 0 beyond
    /// the range and exactly -1 on hard-core overlap.
    pub fn mayer_radial(&self, beta: f64, r: f64) -> f64 {
        let v = self.eval_radial(r);
        if v == 0.0 {
            0.0
        } else if v.is_infinite() {
            -1.0
        } else {
            (-beta * v).exp_m1()
        }
    }

    pub fn mayer(&self, beta: f64, displacement: &[f64]) -> f64 {
        self.mayer_radial(beta, norm(displacement))
    }

    /// Mayer function of the periodized potential: with ell > 2 range at most
    /// one image interacts, so this is the Mayer function at the minimal-image
    /// displacement.
    pub fn mayer_periodized(&self, beta: f64, qi: &[f64], qj: &[f64], bx: &BoxSpec) -> Result<f64> {
        if bx.bc != BoundaryCondition::Periodic {
            return Err(Error::Unsupported("periodized potential needs a periodic box".into()));
        }
        if bx.ell <= 2.0 * self.range {
            return Err(Error::Unsupported(format!(
                "periodic box needs ell > 2R (ell = {}, R = {})",
                bx.ell, self.range
            )));
        }
        Ok(self.mayer_radial(beta, bx.distance(qi, qj)))
    }

    /// Integral over R^d of |e^(-beta V) - 1|; exact for the piecewise-flat
    /// kinds, radial quadrature for tabulated potentials.
    pub fn c_beta(&self, beta: f64, d: usize) -> Result<Measurement> {
        check_dim(d)?;
        match &self.kind {
            Kind::Ideal => Ok(Measurement::exact(0.0)),
            Kind::HardCore => Ok(Measurement::exact(ball_volume(d, self.range))),
            Kind::SquareWell { depth } => {
                let strength = (beta * depth).exp_m1().abs();
                Ok(Measurement::exact(strength * ball_volume(d, self.range)))
            }
            Kind::Tabulated { .. } => self.c_beta_quadrature(beta, d),
        }
    }

    /// Radial quadrature route for C(beta, R), available for every kind as a
    /// cross-check. The radial integrand is split at the known breakpoints of
    /// the kind, then refined by composite midpoint until successive
    /// estimates differ by less than 1e-8.
    pub fn c_beta_quadrature(&self, beta: f64, d: usize) -> Result<Measurement> {
        self.radial_mayer_quadrature(beta, d, true)
    }

    /// Signed integral over R^d of the Mayer function (no absolute value);
    /// the first irreducible coefficient in any dimension.
    pub fn mayer_integral(&self, beta: f64, d: usize) -> Result<Measurement> {
        match &self.kind {
            Kind::Ideal => Ok(Measurement::exact(0.0)),
            Kind::HardCore => Ok(Measurement::exact(-ball_volume(d, self.range))),
            Kind::SquareWell { depth } => {
                let strength = (beta * depth).exp_m1();
                Ok(Measurement::exact(strength * ball_volume(d, self.range)))
            }
            Kind::Tabulated { .. } => self.radial_mayer_quadrature(beta, d, false),
        }
    }

    fn radial_mayer_quadrature(&self, beta: f64, d: usize, absolute: bool) -> Result<Measurement> {
        check_dim(d)?;
        if self.is_ideal() {
            return Ok(Measurement::quadrature(0.0, 0.0));
        }
        let surface = match d {
            1 => 2.0,
            2 => 2.0 * std::f64::consts::PI,
            _ => 4.0 * std::f64::consts::PI,
        };
        let mut breaks: Vec<f64> = vec![0.0, self.range];
        if let Kind::Tabulated { points } = &self.kind {
            breaks.extend(points.iter().map(|p| p.0));
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let integrand = |r: f64| {
            let f = self.mayer_radial(beta, r);
            (if absolute { f.abs() } else { f }) * r.powi(d as i32 - 1)
        };
        let mut prev = f64::NAN;
        let mut pts_per_piece = 16usize;
        for _ in 0..20 {
            let mut total = 0.0;
            for w in breaks.windows(2) {
                let (a, b) = (w[0], w[1]);
                let h = (b - a) / pts_per_piece as f64;
                let mut piece = 0.0;
                for i in 0..pts_per_piece {
                    piece += integrand(a + (i as f64 + 0.5) * h);
                }
                total += piece * h;
            }
            total *= surface;
            if (total - prev).abs() < 1e-8 {
                return Ok(Measurement::quadrature(total, (total - prev).abs()));
            }
            prev = total;
            pts_per_piece *= 2;
        }
        Ok(Measurement::quadrature(prev, 1e-8))
    }
}

fn check_dim(d: usize) -> Result<()> {
    if !(1..=3).contains(&d) {
        return Err(Error::Unsupported(format!("dimension {d} not in 1..=3")));
    }
    Ok(())
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Volume of the d-dimensional ball of radius r.
pub fn ball_volume(d: usize, r: f64) -> f64 {
    match d {
        1 => 2.0 * r,
        2 => std::f64::consts::PI * r * r,
        3 => 4.0 / 3.0 * std::f64::consts::PI * r.powi(3),
        _ => panic!("dimension {d} not supported"),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryCondition {
    Periodic,
    Zero,
}

/// The box Lambda(ell) = (-ell/2, ell/2]^d with a boundary-condition flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxSpec {
    pub ell: f64,
    pub dim: usize,
    pub bc: BoundaryCondition,
}

impl BoxSpec {
    pub fn new(ell: f64, dim: usize, bc: BoundaryCondition) -> Result<Self> {
        if !(ell > 0.0) {
            return Err(Error::InvalidInput("box side must be positive".into()));
        }
        check_dim(dim)?;
        Ok(Self { ell, dim, bc })
    }

    pub fn volume(&self) -> f64 {
        self.ell.powi(self.dim as i32)
    }

    /// Surface measure 2 d ell^(d-1).
    pub fn surface(&self) -> f64 {
        2.0 * self.dim as f64 * self.ell.powi(self.dim as i32 - 1)
    }

    /// Distance between two points under the box's convention: Euclidean for
    /// zero boundary conditions, minimal image on the torus otherwise.
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut s = 0.0;
        for k in 0..self.dim {
            let mut d = a[k] - b[k];
            if self.bc == BoundaryCondition::Periodic {
                d -= self.ell * (d / self.ell).round();
            }
            s += d * d;
        }
        s.sqrt()
    }

    /// Distance from a point to the complement of the box; infinite for
    /// periodic boxes (there is no outside).
    pub fn distance_to_boundary(&self, p: &[f64]) -> f64 {
        match self.bc {
            BoundaryCondition::Periodic => f64::INFINITY,
            BoundaryCondition::Zero => {
                let half = self.ell / 2.0;
                (0..self.dim)
                    .map(|k| (half - p[k].abs()).max(0.0))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Wraps a point back into (-ell/2, ell/2]^d (periodic only).
    pub fn wrap(&self, p: &mut [f64]) {
        if self.bc != BoundaryCondition::Periodic {
            return;
        }
        for k in 0..self.dim {
            let mut x = p[k];
            x -= self.ell * (x / self.ell).round();
            if x <= -self.ell / 2.0 {
                x += self.ell;
            }
            p[k] = x;
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        let half = self.ell / 2.0;
        (0..self.dim).all(|k| p[k] > -half && p[k] <= half)
    }
}

/// Inverse temperature, particle count and the density they imply.
#[derive(Clone, Copy, Debug)]
pub struct ThermoState {
    pub beta: f64,
    pub n: usize,
    pub rho: f64,
}

impl ThermoState {
    pub fn new(beta: f64, n: usize, bx: &BoxSpec) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::InvalidInput("beta must be positive".into()));
        }
        Ok(Self { beta, n, rho: n as f64 / bx.volume() })
    }
}

/// Total pair energy of a configuration (flat layout, `dim` coords per
/// particle) under the box's distance convention.
pub fn total_energy(pot: &PairPotential, bx: &BoxSpec, config: &[f64]) -> f64 {
    let d = bx.dim;
    let n = config.len() / d;
    let mut h = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            h += pot.eval_radial(bx.distance(&config[i * d..(i + 1) * d], &config[j * d..(j + 1) * d]));
            if h.is_infinite() {
                return f64::INFINITY;
            }
        }
    }
    h
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub min_energy_per_particle: f64,
    pub violations: usize,
    pub trials: usize,
    pub pass: bool,
    pub seed: u64,
}

/// Samples random n-point configurations in a cube and reports the smallest
/// finite H/n against -B. A sampling heuristic, not a proof.
pub fn stability_probe(
    pot: &PairPotential,
    n: usize,
    d: usize,
    trials: usize,
    seed: u64,
) -> Result<StabilityReport> {
    use rand::Rng;
    if n > 12 {
        return Err(Error::CapExceeded { what: "stability_probe", n, cap: 12 });
    }
    check_dim(d)?;
    let side = (2.0 * pot.range().max(0.5)) * (n as f64).powf(1.0 / d as f64);
    let bx = BoxSpec::new(side, d, BoundaryCondition::Zero)?;
    let mut rng = crate::mc::stream_rng(seed, 0);
    let mut min_per_particle = f64::INFINITY;
    let mut violations = 0usize;
    let b = pot.stability_constant();
    for _ in 0..trials {
        let config: Vec<f64> = (0..n * d)
            .map(|_| rng.random_range(-side / 2.0..side / 2.0))
            .collect();
        let h = total_energy(pot, &bx, &config);
        if h.is_finite() {
            let per = h / n as f64;
            min_per_particle = min_per_particle.min(per);
            if per < -b - 1e-12 {
                violations += 1;
            }
        }
    }
    if min_per_particle.is_infinite() {
        min_per_particle = 0.0;
    }
    Ok(StabilityReport {
        min_energy_per_particle: min_per_particle,
        violations,
        trials,
        pass: violations == 0,
        seed,
    })
}

/// On-disk potential description (structured text).
#[derive(Debug, Deserialize)]
struct PotentialFile {
    kind: String,
    #[serde(default)]
    range: Option<f64>,
    #[serde(default)]
    stability: Option<f64>,
    #[serde(default)]
    depth: Option<f64>,
    #[serde(default)]
    table: Option<Vec<(f64, f64)>>,
    #[serde(default)]
    table_csv: Option<String>,
}

impl PairPotential {
    /// Parses a potential definition: `kind`, `range`, `stability` plus the
    /// kind's parameters. Tabulated potentials accept inline `table` pairs or
    /// a `table_csv` path with `r,value` rows.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: PotentialFile =
            toml::from_str(text).map_err(|e| Error::Parse(format!("potential file: {e}")))?;
        let range = file.range.unwrap_or(0.0);
        let stability = file.stability.unwrap_or(0.0);
        match file.kind.as_str() {
            "ideal" => Ok(Self::ideal()),
            "hard-core" => Self::hard_core(range),
            "square-well" => {
                let depth = file
                    .depth
                    .ok_or_else(|| Error::Parse("square-well needs depth".into()))?;
                Self::square_well(range, depth, stability)
            }
            "tabulated" => {
                let points = if let Some(p) = file.table {
                    p
                } else if let Some(path) = file.table_csv {
                    load_table_csv(&path)?
                } else {
                    return Err(Error::Parse("tabulated needs table or table_csv".into()));
                };
                Self::tabulated(points, range, stability)
            }
            other => Err(Error::Parse(format!("unknown potential kind {other:?}"))),
        }
    }

    pub fn from_toml_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }
}

/// Reads `r,value` rows; blank lines and `#` comments are skipped.
pub fn load_table_csv(path: &str) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split(',');
        let parse = |s: Option<&str>| -> Result<f64> {
            s.ok_or_else(|| Error::Parse(format!("line {}: expected r,value", lineno + 1)))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
        };
        out.push((parse(parts.next())?, parse(parts.next())?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hard_core_values() {
        let p = PairPotential::hard_core(1.0).unwrap();
        assert_eq!(p.eval(&[0.5]), f64::INFINITY);
        assert_eq!(p.eval(&[2.0]), 0.0);
        assert_eq!(p.eval(&[1.0 + 1e-12]), 0.0);
        assert_eq!(p.mayer(1.0, &[0.5]), -1.0);
        assert_eq!(p.mayer(1.0, &[2.0]), 0.0);
    }

    #[test]
    fn square_well_mayer_is_expm1() {
        let eps = 0.25;
        let p = PairPotential::square_well(1.0, eps, eps).unwrap();
        let beta = 2.0;
        let expect = (beta * eps).exp_m1();
        assert!((p.mayer(beta, &[0.7]) - expect).abs() < 1e-15);
        assert_eq!(p.mayer(beta, &[1.5]), 0.0);
    }

    #[test]
    fn mayer_respects_bounds() {
        let p = PairPotential::square_well(1.0, 0.5, 0.5).unwrap();
        let beta = 1.3;
        let upper = (2.0 * beta * p.stability_constant()).exp() - 1.0;
        for i in 0..200 {
            let r = i as f64 * 0.01;
            let f = p.mayer_radial(beta, r);
            assert!(f >= -1.0 && f <= upper + 1e-12, "r = {r}");
        }
    }

    #[test]
    fn c_beta_exact_is_ball_volume() {
        let p = PairPotential::hard_core(1.0).unwrap();
        assert!((p.c_beta(1.0, 1).unwrap().value - 2.0).abs() < 1e-12);
        assert!((p.c_beta(1.0, 2).unwrap().value - std::f64::consts::PI).abs() < 1e-12);
        assert!(
            (p.c_beta(1.0, 3).unwrap().value - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-12
        );
    }

    #[test]
    fn c_beta_quadrature_matches_exact() {
        let hc = PairPotential::hard_core(1.0).unwrap();
        let sw = PairPotential::square_well(0.8, 0.3, 0.3).unwrap();
        for d in 1..=3 {
            for p in [&hc, &sw] {
                let exact = p.c_beta(1.1, d).unwrap().value;
                let quad = p.c_beta_quadrature(1.1, d).unwrap().value;
                assert!((exact - quad).abs() < 1e-6, "d = {d}: {exact} vs {quad}");
            }
        }
    }

    #[test]
    fn tabulated_interpolates_and_cuts_off() {
        let p = PairPotential::tabulated(vec![(0.0, 2.0), (1.0, 0.0)], 1.0, 0.0).unwrap();
        assert!((p.eval_radial(0.5) - 1.0).abs() < 1e-15);
        assert_eq!(p.eval_radial(1.5), 0.0);
        // quadrature agrees with the closed form of the triangle profile
        let beta = 1.0;
        let exact: f64 = {
            // 2 * int_0^1 (1 - e^(-beta(2 - 2r))) dr
            let f = |r: f64| 1.0 - (-beta * (2.0 - 2.0 * r)).exp();
            let n = 200000;
            2.0 * (0..n).map(|i| f((i as f64 + 0.5) / n as f64)).sum::<f64>() / n as f64
        };
        let quad = p.c_beta(beta, 1).unwrap().value;
        assert!((exact - quad).abs() < 1e-6, "{exact} vs {quad}");
    }

    #[test]
    fn periodized_equals_minimal_image_on_grid() {
        let p = PairPotential::hard_core(1.0).unwrap();
        let bx = BoxSpec::new(10.0, 1, BoundaryCondition::Periodic).unwrap();
        let beta = 1.0;
        for i in 0..100 {
            for j in 0..100 {
                let qi = [-5.0 + 0.1 * i as f64 + 0.05];
                let qj = [-5.0 + 0.1 * j as f64 + 0.05];
                let per = p.mayer_periodized(beta, &qi, &qj, &bx).unwrap();
                let mut d = qi[0] - qj[0];
                d -= 10.0 * (d / 10.0).round();
                assert_eq!(per, p.mayer_radial(beta, d.abs()));
            }
        }
        // the worked example: 0.2 and 9.9 on a ring of 10 are 0.3 apart
        let f = p
            .mayer_periodized(1.0, &[0.2], &[9.9], &bx)
            .unwrap();
        assert_eq!(f, -1.0);
        assert_eq!(p.mayer_periodized(1.0, &[0.0], &[0.0], &bx).unwrap(), -1.0);
    }

    #[test]
    fn periodized_refuses_small_boxes() {
        let p = PairPotential::hard_core(1.0).unwrap();
        let bx = BoxSpec::new(1.5, 1, BoundaryCondition::Periodic).unwrap();
        assert!(p.mayer_periodized(1.0, &[0.0], &[0.5], &bx).is_err());
    }

    #[test]
    fn box_geometry() {
        let bx = BoxSpec::new(10.0, 3, BoundaryCondition::Zero).unwrap();
        assert_eq!(bx.volume(), 1000.0);
        assert_eq!(bx.surface(), 600.0);
        assert!((bx.distance_to_boundary(&[4.0, 0.0, 0.0]) - 1.0).abs() < 1e-15);
        let per = BoxSpec::new(10.0, 1, BoundaryCondition::Periodic).unwrap();
        assert!((per.distance(&[0.2], &[9.9 - 10.0]) - 0.3).abs() < 1e-12);
        assert_eq!(per.distance_to_boundary(&[0.0]), f64::INFINITY);
    }

    #[test]
    fn stability_probe_examples() {
        let hc = PairPotential::hard_core(1.0).unwrap();
        let rep = stability_probe(&hc, 4, 1, 500, 7).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.min_energy_per_particle, 0.0);

        let ideal = PairPotential::ideal();
        let rep = stability_probe(&ideal, 4, 1, 100, 7).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.min_energy_per_particle, 0.0);

        // two particles in a well of depth eps: H/2 >= -eps/2 >= -B for B = eps
        let eps = 0.5;
        let sw = PairPotential::square_well(1.0, eps, eps).unwrap();
        let rep = stability_probe(&sw, 2, 1, 2000, 7).unwrap();
        assert!(rep.pass);
        assert!(rep.min_energy_per_particle >= -eps / 2.0 - 1e-12);
        assert!(rep.min_energy_per_particle < 0.0, "sampler should find the well");
    }

    #[test]
    fn thermo_state_density() {
        let bx = BoxSpec::new(10.0, 2, BoundaryCondition::Periodic).unwrap();
        let t = ThermoState::new(2.0, 5, &bx).unwrap();
        assert_eq!(t.rho, 0.05);
        assert!(ThermoState::new(0.0, 5, &bx).is_err());
    }

    #[test]
    fn potential_file_roundtrip() {
        let p = PairPotential::from_toml_str("kind = \"hard-core\"\nrange = 1.0\n").unwrap();
        assert!(p.is_hard_core());
        let p = PairPotential::from_toml_str(
            "kind = \"square-well\"\nrange = 1.0\ndepth = 0.25\nstability = 0.25\n",
        )
        .unwrap();
        assert_eq!(p.kind(), &Kind::SquareWell { depth: 0.25 });
        let p = PairPotential::from_toml_str(
            "kind = \"tabulated\"\nrange = 1.0\ntable = [[0.0, 2.0], [1.0, 0.0]]\n",
        )
        .unwrap();
        assert!((p.eval_radial(0.25) - 1.5).abs() < 1e-15);
        assert!(PairPotential::from_toml_str("kind = \"coulomb\"\n").is_err());
    }
}
