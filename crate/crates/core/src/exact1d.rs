//! Exact volumes of one-dimensional interval-constraint regions.
//!
//! Every 1D hard-rod integral in this crate reduces to the volume of a region
//! cut out by pairwise constraints |q_i - q_j| <= R (or >= R) inside a box or
//! the whole line. Splitting into ordering sectors q_(1) <= ... <= q_(n) and
//! switching to gap coordinates turns each pairwise constraint into a bound
//! on a contiguous window of gaps, so the sector volume is a rational number
//! computed exactly by eliminating one variable at a time: pick the active
//! lower and upper bound, integrate the polynomial integrand between them,
//! and recurse on the remaining variables with the bound comparisons added to
//! the region.
//!
//! Everything here is exact rational arithmetic; results convert to f64 at
//! the boundary.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::graphs::LabeledGraph;
use crate::{Error, Result};

pub type Rat = BigRational;

pub fn rat_from_f64(x: f64) -> Result<Rat> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::InvalidInput(format!("{x} is not a finite number")))
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Sparse polynomial over `nvars` variables with rational coefficients.
/// Keys are exponent vectors of length `nvars`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, Rat>,
}

impl Poly {
    fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    fn var(nvars: usize, v: usize) -> Self {
        let mut exp = vec![0u16; nvars];
        exp[v] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(exp, Rat::one());
        p
    }

    fn add_term(&mut self, exp: Vec<u16>, c: Rat) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                // drop exact cancellations so equality tests stay canonical
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        let mut out = Poly::zero(self.nvars);
        for (e, k) in &self.terms {
            out.terms.insert(e.clone(), k * c);
        }
        out
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exp, ca * cb);
            }
        }
        out
    }

    /// Antiderivative with respect to the last variable.
    fn antiderivative_last(&self) -> Poly {
        let v = self.nvars - 1;
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut exp = e.clone();
            exp[v] += 1;
            out.terms
                .insert(exp, c / Rat::from(BigInt::from(e[v] as i64 + 1)));
        }
        out
    }

    /// Coefficient of the last variable and the remainder (as a polynomial in
    /// the remaining variables), assuming degree <= 1 in the last variable.
    fn split_last_affine(&self) -> (Rat, Poly) {
        let v = self.nvars - 1;
        let mut coeff = Rat::zero();
        let mut rest = Poly::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            if e[v] == 0 {
                rest.add_term(e[..v].to_vec(), c.clone());
            } else {
                debug_assert_eq!(e[v], 1, "constraints must be affine");
                debug_assert!(e[..v].iter().all(|&x| x == 0), "constraints must be affine");
                coeff += c;
            }
        }
        (coeff, rest)
    }

    /// Substitutes an affine polynomial (over one variable fewer) for the
    /// last variable and projects the result down.
    fn substitute_last(&self, affine: &Poly) -> Poly {
        let v = self.nvars - 1;
        debug_assert_eq!(affine.nvars, v);
        let mut powers: Vec<Poly> = vec![Poly::one(v)];
        let max_deg = self.terms.keys().map(|e| e[v]).max().unwrap_or(0);
        for _ in 0..max_deg {
            powers.push(powers.last().unwrap().mul(affine));
        }
        let mut out = Poly::zero(v);
        for (e, c) in &self.terms {
            let base = &powers[e[v] as usize];
            for (eb, cb) in &base.terms {
                let mut exp: Vec<u16> = e[..v].to_vec();
                for (k, add) in eb.iter().enumerate() {
                    exp[k] += add;
                }
                out.add_term(exp, c * cb);
            }
        }
        out
    }

    fn constant_value(&self) -> Rat {
        debug_assert_eq!(self.nvars, 0);
        self.terms.values().next().cloned().unwrap_or_else(Rat::zero)
    }
}

/// Integrates `integrand` over the region where every affine `constraints`
/// polynomial is >= 0, eliminating variables from last to first.
fn integrate(nvars: usize, constraints: &[Poly], integrand: &Poly) -> Rat {
    if nvars == 0 {
        for c in constraints {
            if c.constant_value().is_negative() {
                return Rat::zero();
            }
        }
        return integrand.constant_value();
    }
    let mut pass_down: Vec<Poly> = Vec::new();
    let mut lowers: Vec<Poly> = Vec::new();
    let mut uppers: Vec<Poly> = Vec::new();
    for c in constraints {
        let (coeff, rest) = c.split_last_affine();
        if coeff.is_zero() {
            pass_down.push(rest);
        } else if coeff.is_positive() {
            // coeff*x + rest >= 0  =>  x >= -rest/coeff
            let inv = -Rat::one() / &coeff;
            lowers.push(rest.scale(&inv));
        } else {
            // x <= rest / (-coeff)
            let inv = -Rat::one() / &coeff;
            uppers.push(rest.scale(&inv));
        }
    }
    lowers.sort();
    lowers.dedup();
    uppers.sort();
    uppers.dedup();
    assert!(
        !lowers.is_empty() && !uppers.is_empty(),
        "integration region must be bounded in every variable"
    );
    let anti = integrand.antiderivative_last();
    let mut total = Rat::zero();
    for (li, lo) in lowers.iter().enumerate() {
        for (ui, hi) in uppers.iter().enumerate() {
            // cell where `lo` is the largest lower bound and `hi` the
            // smallest upper bound; ties between distinct forms have measure
            // zero
            let mut region = pass_down.clone();
            for (lj, lo2) in lowers.iter().enumerate() {
                if lj != li {
                    region.push(lo.sub(lo2));
                }
            }
            for (uj, hi2) in uppers.iter().enumerate() {
                if uj != ui {
                    region.push(hi2.sub(hi));
                }
            }
            region.push(hi.sub(lo));
            let piece = anti.substitute_last(hi).sub(&anti.substitute_last(lo));
            total += integrate(nvars - 1, &region, &piece);
        }
    }
    total
}

/// A contiguous window of gap variables `[lo, hi)` whose sum is compared
/// against the rod length.
type Window = (u8, u8);

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct SectorKey {
    le: Vec<Window>,
    ge: Vec<Window>,
    root_slot: Option<u8>,
}

fn window_sum(nvars: usize, w: Window) -> Poly {
    let mut p = Poly::zero(nvars);
    for g in w.0..w.1 {
        p = p.add(&Poly::var(nvars, g as usize));
    }
    p
}

fn windows_for_edges(perm: &[usize], edges: &[(usize, usize)]) -> Vec<Window> {
    let mut slot_of = vec![0usize; perm.len()];
    for (slot, &label) in perm.iter().enumerate() {
        slot_of[label] = slot;
    }
    let mut out: Vec<Window> = edges
        .iter()
        .map(|&(i, j)| {
            let (a, b) = (slot_of[i].min(slot_of[j]), slot_of[i].max(slot_of[j]));
            (a as u8, b as u8)
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Exact volumes of ordering sectors, memoized on the window pattern.
struct SectorVolumes {
    r: Rat,
    cache: HashMap<SectorKey, Rat>,
}

impl SectorVolumes {
    fn new(r: Rat) -> Self {
        Self { r, cache: HashMap::new() }
    }

    /// Volume over gap space [0, inf)^(n-1) of the sector with the given
    /// window constraints. Requires every gap to be covered by some `le`
    /// window, otherwise the sector is unbounded.
    fn line(&mut self, n: usize, key: SectorKey) -> Result<Rat> {
        if let Some(v) = self.cache.get(&key) {
            return Ok(v.clone());
        }
        let m = n - 1;
        for g in 0..m as u8 {
            if !key.le.iter().any(|w| w.0 <= g && g < w.1) {
                return Err(Error::InvalidInput(
                    "unbounded sector: gap not covered by any <= window".into(),
                ));
            }
        }
        let mut constraints = Vec::new();
        for g in 0..m {
            constraints.push(Poly::var(m, g));
        }
        let r_poly = Poly::constant(m, self.r.clone());
        for &w in &key.le {
            constraints.push(r_poly.sub(&window_sum(m, w)));
        }
        for &w in &key.ge {
            constraints.push(window_sum(m, w).sub(&r_poly));
        }
        let vol = integrate(m, &constraints, &Poly::one(m));
        self.cache.insert(key, vol.clone());
        Ok(vol)
    }

    /// Volume over the box [0, ell]^n of the sector with the given window
    /// constraints; the variables are the gaps plus the base position, so
    /// boundedness is automatic. `root_interval` restricts the position of
    /// the particle sitting at `key.root_slot`.
    fn boxed(
        &mut self,
        n: usize,
        key: SectorKey,
        ell: &Rat,
        root_interval: Option<(&Rat, &Rat)>,
    ) -> Rat {
        if let Some(v) = self.cache.get(&key) {
            return v.clone();
        }
        // vars: g_0..g_{n-2}, then t (base position)
        let m = n - 1;
        let nv = n;
        let t = Poly::var(nv, m);
        let mut span = Poly::zero(nv);
        for g in 0..m {
            span = span.add(&Poly::var(nv, g));
        }
        let mut constraints = Vec::new();
        for g in 0..m {
            constraints.push(Poly::var(nv, g));
        }
        constraints.push(t.clone());
        constraints.push(Poly::constant(nv, ell.clone()).sub(&t).sub(&span));
        let r_poly = Poly::constant(nv, self.r.clone());
        for &w in &key.le {
            constraints.push(r_poly.sub(&window_sum(nv, w)));
        }
        for &w in &key.ge {
            constraints.push(window_sum(nv, w).sub(&r_poly));
        }
        if let Some((lo, hi)) = root_interval {
            let slot = key.root_slot.expect("root interval needs a root slot") as usize;
            let mut pos = t.clone();
            for g in 0..slot {
                pos = pos.add(&Poly::var(nv, g));
            }
            constraints.push(pos.sub(&Poly::constant(nv, lo.clone())));
            constraints.push(Poly::constant(nv, hi.clone()).sub(&pos));
        }
        let vol = integrate(nv, &constraints, &Poly::one(nv));
        self.cache.insert(key, vol.clone());
        vol
    }
}

/// Volume of { q in R^n : q_1 = 0, |q_i - q_j| <= R for every edge } for a
/// connected constraint graph, summed over ordering sectors.
pub fn pinned_graph_volume(graph: &LabeledGraph, r: &Rat) -> Result<Rat> {
    let n = graph.vertex_count();
    if n == 1 {
        return Ok(Rat::one());
    }
    let edges: Vec<(usize, usize)> = graph.edges().iter().map(|&(i, j)| (i - 1, j - 1)).collect();
    let mut sectors = SectorVolumes::new(r.clone());
    let mut total = Rat::zero();
    for perm in permutations(n) {
        let le = windows_for_edges(&perm, &edges);
        total += sectors.line(n, SectorKey { le, ge: vec![], root_slot: None })?;
    }
    Ok(total)
}

/// Volume of { q in [0, ell]^n : |q_i - q_j| <= R for every edge }, with an
/// optional interval constraint on one particle's position.
pub fn box_graph_volume(
    graph: &LabeledGraph,
    r: &Rat,
    ell: &Rat,
    root_interval: Option<(usize, &Rat, &Rat)>,
) -> Rat {
    let n = graph.vertex_count();
    let edges: Vec<(usize, usize)> = graph.edges().iter().map(|&(i, j)| (i - 1, j - 1)).collect();
    let mut sectors = SectorVolumes::new(r.clone());
    let mut total = Rat::zero();
    for perm in permutations(n) {
        let le = windows_for_edges(&perm, &edges);
        let (root_slot, interval) = match root_interval {
            None => (None, None),
            Some((label, lo, hi)) => {
                let slot = perm.iter().position(|&l| l == label).unwrap() as u8;
                (Some(slot), Some((lo, hi)))
            }
        };
        total += sectors.boxed(n, SectorKey { le, ge: vec![], root_slot }, ell, interval);
    }
    total
}

fn signed(graph: &LabeledGraph) -> Rat {
    if graph.edge_count() % 2 == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

/// Sum over connected graphs on n vertices of (-1)^(edges) times the pinned
/// volume: the full-line connected cluster integral of the hard-rod gas.
pub fn connected_cluster_integral_line(n: usize, r: &Rat) -> Result<Rat> {
    let mut total = Rat::zero();
    for g in crate::graphs::enumerate_connected(n)? {
        total += signed(&g) * pinned_graph_volume(&g, r)?;
    }
    Ok(total)
}

/// Same sum with every point confined to [0, ell].
pub fn connected_cluster_integral_box(n: usize, r: &Rat, ell: &Rat) -> Result<Rat> {
    let mut total = Rat::zero();
    for g in crate::graphs::enumerate_connected(n)? {
        total += signed(&g) * box_graph_volume(&g, r, ell, None);
    }
    Ok(total)
}

/// Connected cluster integral over the box with the root particle confined
/// to [lo, hi].
pub fn rooted_cluster_integral_box(
    n: usize,
    r: &Rat,
    ell: &Rat,
    root: usize,
    lo: &Rat,
    hi: &Rat,
) -> Result<Rat> {
    let mut total = Rat::zero();
    for g in crate::graphs::enumerate_connected(n)? {
        total += signed(&g) * box_graph_volume(&g, r, ell, Some((root, lo, hi)));
    }
    Ok(total)
}

/// Sum over 2-connected graphs on m vertices of (-1)^(edges) times the
/// pinned volume: m = n + 1 gives n! times the irreducible coefficient.
pub fn biconnected_cluster_integral_line(m: usize, r: &Rat) -> Result<Rat> {
    let mut total = Rat::zero();
    for g in crate::graphs::enumerate_biconnected(m)? {
        total += signed(&g) * pinned_graph_volume(&g, r)?;
    }
    Ok(total)
}

/// Hard-rod partition function in a box with zero boundary conditions:
/// (1/n!) vol{ q in [0, ell]^n : |q_i - q_j| >= R for all pairs }.
pub fn hard_rod_box_partition(n: usize, r: &Rat, ell: &Rat) -> Rat {
    if n == 0 {
        return Rat::one();
    }
    if n == 1 {
        return ell.clone();
    }
    // all orderings give the same volume: n! identical sectors / n!
    let m = n - 1;
    let nv = n;
    let t = Poly::var(nv, m);
    let mut span = Poly::zero(nv);
    for g in 0..m {
        span = span.add(&Poly::var(nv, g));
    }
    let mut constraints = vec![t.clone()];
    let r_poly = Poly::constant(nv, r.clone());
    for g in 0..m {
        constraints.push(Poly::var(nv, g).sub(&r_poly));
    }
    constraints.push(Poly::constant(nv, ell.clone()).sub(&t).sub(&span));
    integrate(nv, &constraints, &Poly::one(nv))
}

/// Hard-rod partition function on the ring: fix one particle (factor ell),
/// order the rest, and require all n gaps (including the wrap-around one) to
/// be at least R.
pub fn hard_rod_ring_partition(n: usize, r: &Rat, ell: &Rat) -> Rat {
    if n == 0 {
        return Rat::one();
    }
    if n == 1 {
        return ell.clone();
    }
    let m = n - 1;
    let mut span = Poly::zero(m);
    for g in 0..m {
        span = span.add(&Poly::var(m, g));
    }
    let r_poly = Poly::constant(m, r.clone());
    let mut constraints = Vec::new();
    for g in 0..m {
        constraints.push(Poly::var(m, g).sub(&r_poly));
    }
    constraints.push(Poly::constant(m, ell.clone()).sub(&span).sub(&r_poly));
    let gap_volume = integrate(m, &constraints, &Poly::one(m));
    // ell * (n-1)! sector copies / n!
    ell * gap_volume / Rat::from(BigInt::from(n as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{enumerate_connected, LabeledGraph};

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn pinned_volume_single_edge() {
        let g = LabeledGraph::from_edges(2, &[(1, 2)]).unwrap();
        assert_eq!(pinned_graph_volume(&g, &rat(1, 1)).unwrap(), rat(2, 1));
        assert_eq!(pinned_graph_volume(&g, &rat(1, 2)).unwrap(), rat(1, 1));
    }

    #[test]
    fn pinned_volume_triangle_and_path() {
        let tri = LabeledGraph::from_edges(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(pinned_graph_volume(&tri, &rat(1, 1)).unwrap(), rat(3, 1));
        let path = LabeledGraph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(pinned_graph_volume(&path, &rat(1, 1)).unwrap(), rat(4, 1));
    }

    #[test]
    fn line_cluster_integrals_match_ring_closed_form() {
        // I_n = n! * [coefficient linking the ring partition function to
        // (1 - nR/ell)^(n-1)]; frozen values derived by expanding
        // prod-of-weights identities at n <= 4: -2R, 9R^2, -64R^3.
        let r = rat(1, 1);
        assert_eq!(connected_cluster_integral_line(2, &r).unwrap(), rat(-2, 1));
        assert_eq!(connected_cluster_integral_line(3, &r).unwrap(), rat(9, 1));
        assert_eq!(connected_cluster_integral_line(4, &r).unwrap(), rat(-64, 1));
        let r = rat(1, 2);
        assert_eq!(connected_cluster_integral_line(3, &r).unwrap(), rat(9, 4));
    }

    #[test]
    fn box_partition_matches_free_volume_formula() {
        for n in 1..=4usize {
            let z = hard_rod_box_partition(n, &rat(1, 1), &rat(10, 1));
            // (ell - (n-1) R)^n / n!
            let mut want = Rat::one();
            for _ in 0..n {
                want *= rat(10 - (n as i64 - 1), 1);
            }
            for k in 2..=n as i64 {
                want /= rat(k, 1);
            }
            assert_eq!(z, want, "n = {n}");
        }
        // jammed box
        assert!(hard_rod_box_partition(4, &rat(4, 1), &rat(10, 1)).is_zero());
    }

    #[test]
    fn ring_partition_matches_closed_form() {
        for n in 1..=4usize {
            let z = hard_rod_ring_partition(n, &rat(1, 1), &rat(10, 1));
            // ell (ell - n R)^(n-1) / n!
            let mut want = rat(10, 1);
            for _ in 0..n - 1 {
                want *= rat(10 - n as i64, 1);
            }
            for k in 2..=n as i64 {
                want /= rat(k, 1);
            }
            assert_eq!(z, want, "n = {n}");
        }
    }

    #[test]
    fn box_cluster_integrals_rebuild_the_partition_function() {
        // sum over compatible collections of polymer weights equals Z^int
        // (zero bc): at n = 4 and ell = 10 the collection sum is
        // 1 + 6 w2 + 4 w3 + w4 + 3 w2^2 with w_k the box cluster integral
        // over ell^k.
        let r = rat(1, 1);
        let ell = rat(10, 1);
        let vol = |k: u32| -> Rat {
            let mut v = Rat::one();
            for _ in 0..k {
                v *= &ell;
            }
            v
        };
        let w2 = connected_cluster_integral_box(2, &r, &ell).unwrap() / vol(2);
        let w3 = connected_cluster_integral_box(3, &r, &ell).unwrap() / vol(3);
        let w4 = connected_cluster_integral_box(4, &r, &ell).unwrap() / vol(4);
        let direct = Rat::one()
            + rat(6, 1) * &w2
            + rat(4, 1) * &w3
            + &w4
            + rat(3, 1) * &w2 * &w2;
        let z_int = hard_rod_box_partition(4, &r, &ell) * rat(24, 1) / vol(4);
        assert_eq!(direct, z_int);
        // and the known single-edge value: -(2 R ell - R^2)
        assert_eq!(
            connected_cluster_integral_box(2, &r, &ell).unwrap(),
            rat(-19, 1)
        );
    }

    #[test]
    fn rooted_volumes_partition_the_plain_volume() {
        // restricting the root to [0, a] and [a, ell] splits the volume
        let r = rat(1, 1);
        let ell = rat(10, 1);
        let a = rat(3, 1);
        for g in enumerate_connected(3).unwrap() {
            let whole = box_graph_volume(&g, &r, &ell, None);
            let left = box_graph_volume(&g, &r, &ell, Some((1, &rat(0, 1), &a)));
            let right = box_graph_volume(&g, &r, &ell, Some((1, &a, &ell)));
            assert_eq!(left + right, whole, "{g:?}");
        }
    }

    #[test]
    fn biconnected_cluster_integral_values() {
        let r = rat(1, 1);
        // m = 2: single edge, integral of f = -2R
        assert_eq!(biconnected_cluster_integral_line(2, &r).unwrap(), rat(-2, 1));
        // m = 3: triangle with three -1 factors on the overlap region of
        // area 3R^2
        assert_eq!(biconnected_cluster_integral_line(3, &r).unwrap(), rat(-3, 1));
        // m = 4: equals 3! * beta_3 = 3! * (-4/3) R^3
        assert_eq!(biconnected_cluster_integral_line(4, &r).unwrap(), rat(-8, 1));
    }

    #[test]
    fn simplex_volumes_from_raw_integrator() {
        // direct sanity checks of the eliminator on textbook shapes
        let m = 3;
        let mut constraints: Vec<Poly> = (0..m).map(|v| Poly::var(m, v)).collect();
        let mut sum = Poly::zero(m);
        for v in 0..m {
            sum = sum.add(&Poly::var(m, v));
        }
        constraints.push(Poly::constant(m, Rat::one()).sub(&sum));
        assert_eq!(integrate(m, &constraints, &Poly::one(m)), rat(1, 6));
        // unit cube
        let mut cube: Vec<Poly> = (0..m).map(|v| Poly::var(m, v)).collect();
        for v in 0..m {
            cube.push(Poly::constant(m, Rat::one()).sub(&Poly::var(m, v)));
        }
        assert_eq!(integrate(m, &cube, &Poly::one(m)), rat(1, 1));
        // int over the unit square of x*y
        let m = 2;
        let mut sq: Vec<Poly> = (0..m).map(|v| Poly::var(m, v)).collect();
        for v in 0..m {
            sq.push(Poly::constant(m, Rat::one()).sub(&Poly::var(m, v)));
        }
        let xy = Poly::var(m, 0).mul(&Poly::var(m, 1));
        assert_eq!(integrate(m, &sq, &xy), rat(1, 4));
    }
}
