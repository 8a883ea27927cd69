//! Labeled-graph enumeration and tree/composition counting.
//!
//! Graphs live on the vertex labels `1..=n` and are stored as an edge bitmask
//! over the canonical pair order (1,2), (1,3), ..., (1,n), (2,3), ...
//! Enumerations scan all edge subsets, so they are capped at
//! [`ENUMERATION_CAP`] vertices, and emit graphs in increasing bitmask order
//! so that dumps and golden tests are stable.

use crate::{Error, Result};

/// Largest vertex count accepted by the edge-subset enumerations
/// (2^15 subsets at n = 6).
pub const ENUMERATION_CAP: usize = 6;

/// A graph on the labels `1..=n`, with edges packed into a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledGraph {
    n: u8,
    edges: u32,
}

fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Index of the unordered pair `(a, b)` (0-based, `a < b < n`) in the
/// canonical order.
fn pair_index(a: usize, b: usize, n: usize) -> usize {
    debug_assert!(a < b && b < n);
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

impl LabeledGraph {
    /// Builds a graph from 1-based endpoint pairs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 || n > 255 {
            return Err(Error::InvalidInput(format!("vertex count {n} out of range")));
        }
        let mut mask = 0u32;
        for &(i, j) in edges {
            if i == j || i < 1 || j < 1 || i > n || j > n {
                return Err(Error::InvalidInput(format!(
                    "edge ({i},{j}) invalid on {n} vertices"
                )));
            }
            let (a, b) = if i < j { (i - 1, j - 1) } else { (j - 1, i - 1) };
            let bit = 1u32 << pair_index(a, b, n);
            if mask & bit != 0 {
                return Err(Error::InvalidInput(format!("duplicate edge ({i},{j})")));
            }
            mask |= bit;
        }
        Ok(Self { n: n as u8, edges: mask })
    }

    fn from_mask(n: usize, edges: u32) -> Self {
        Self { n: n as u8, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.n as usize
    }

    pub fn edge_count(&self) -> usize {
        self.edges.count_ones() as usize
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let n = self.vertex_count();
        if i == j || i < 1 || j < 1 || i > n || j > n {
            return false;
        }
        let (a, b) = if i < j { (i - 1, j - 1) } else { (j - 1, i - 1) };
        self.edges & (1 << pair_index(a, b, n)) != 0
    }

    /// Edges as 1-based label pairs in canonical order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count();
        let mut out = Vec::with_capacity(self.edge_count());
        for a in 0..n {
            for b in a + 1..n {
                if self.edges & (1 << pair_index(a, b, n)) != 0 {
                    out.push((a + 1, b + 1));
                }
            }
        }
        out
    }

    /// Adjacency bitmask of 0-based vertex `v`.
    fn adjacency(&self, v: usize) -> u32 {
        let n = self.vertex_count();
        let mut adj = 0u32;
        for u in 0..n {
            if u == v {
                continue;
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if self.edges & (1 << pair_index(a, b, n)) != 0 {
                adj |= 1 << u;
            }
        }
        adj
    }

    pub fn degree(&self, label: usize) -> usize {
        self.adjacency(label - 1).count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (1..=self.vertex_count()).map(|v| self.degree(v)).collect()
    }

    /// Connectivity over the vertex subset `mask` (0-based bits). Isolated
    /// vertices inside the subset disconnect it; singletons are connected.
    fn connected_on(&self, mask: u32) -> bool {
        if mask == 0 {
            return true;
        }
        let start = mask.trailing_zeros() as usize;
        let mut seen = 1u32 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adjacency(v) & mask & !seen;
            }
            seen |= next;
            frontier = next;
        }
        seen == mask
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        self.connected_on(((1u64 << n) - 1) as u32)
    }

    /// 2-connectivity taken literally: connected, and still connected after
    /// deleting any single vertex with its incident edges. The single edge on
    /// two vertices qualifies.
    pub fn is_biconnected(&self) -> bool {
        if !self.is_connected() {
            return false;
        }
        let n = self.vertex_count();
        let full = ((1u64 << n) - 1) as u32;
        (0..n).all(|v| self.connected_on(full & !(1 << v)))
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count() == self.vertex_count().saturating_sub(1)
    }

    /// One-line dump `n:<int> edges:<i-j,...>` in canonical order.
    pub fn dump_line(&self) -> String {
        let edges = self
            .edges()
            .iter()
            .map(|(i, j)| format!("{i}-{j}"))
            .collect::<Vec<_>>()
            .join(",");
        format!("n:{} edges:{}", self.n, edges)
    }
}

impl std::fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.dump_line())
    }
}

fn check_cap(what: &'static str, n: usize) -> Result<()> {
    if n > ENUMERATION_CAP {
        return Err(Error::CapExceeded { what, n, cap: ENUMERATION_CAP });
    }
    Ok(())
}

fn enumerate_filtered(n: usize, keep: impl Fn(&LabeledGraph) -> bool) -> Vec<LabeledGraph> {
    let m = pair_count(n);
    (0u32..1 << m)
        .map(|mask| LabeledGraph::from_mask(n, mask))
        .filter(keep)
        .collect()
}

/// All connected graphs on `1..=n` in bitmask order. The singleton counts as
/// connected.
pub fn enumerate_connected(n: usize) -> Result<Vec<LabeledGraph>> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one vertex".into()));
    }
    check_cap("connected-graph enumeration", n)?;
    Ok(enumerate_filtered(n, LabeledGraph::is_connected))
}

/// All 2-connected graphs on `1..=n` in bitmask order, using the literal
/// delete-one-vertex definition (so n = 2 yields the single edge).
pub fn enumerate_biconnected(n: usize) -> Result<Vec<LabeledGraph>> {
    if n < 2 {
        return Err(Error::InvalidInput(
            "2-connected enumeration needs n >= 2".into(),
        ));
    }
    check_cap("2-connected-graph enumeration", n)?;
    Ok(enumerate_filtered(n, LabeledGraph::is_biconnected))
}

/// All labeled trees on `1..=n` in bitmask order; the count is n^(n-2) for
/// n >= 2.
pub fn enumerate_trees(n: usize) -> Result<Vec<LabeledGraph>> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one vertex".into()));
    }
    check_cap("tree enumeration", n)?;
    Ok(enumerate_filtered(n, LabeledGraph::is_tree))
}

/// Number of labeled trees on m vertices whose vertex i has degree
/// `degrees[i]`: (m-2)! / prod (d_i - 1)!.
pub fn cayley_count(degrees: &[u32]) -> Result<u128> {
    let m = degrees.len();
    if m < 2 {
        return Err(Error::InvalidInput("degree sequence needs m >= 2".into()));
    }
    if m > 33 {
        return Err(Error::CapExceeded { what: "cayley_count", n: m, cap: 33 });
    }
    if degrees.iter().any(|&d| d == 0) {
        return Err(Error::InvalidInput("tree degrees must be positive".into()));
    }
    let sum: u64 = degrees.iter().map(|&d| d as u64).sum();
    if sum != 2 * (m as u64 - 1) {
        return Err(Error::InvalidInput(format!(
            "degree sum {sum} != 2(m-1) = {}",
            2 * (m - 1)
        )));
    }
    fn factorial(k: u128) -> u128 {
        (2..=k).product()
    }
    let num = factorial(m as u128 - 2);
    let den: u128 = degrees.iter().map(|&d| factorial(d as u128 - 1)).product();
    Ok(num / den)
}

/// Number of ordered positive-integer solutions of d_1 + ... + d_k = m,
/// summed literally. Returns 0 when m < k.
pub fn compositions(k: u32, m: u32) -> Result<u128> {
    if k == 0 {
        return Err(Error::InvalidInput("composition count needs k >= 1".into()));
    }
    if m > 64 {
        return Err(Error::CapExceeded { what: "compositions", n: m as usize, cap: 64 });
    }
    fn rec(parts_left: u32, remaining: u32) -> u128 {
        if parts_left == 1 {
            return u128::from(remaining >= 1);
        }
        let mut total = 0u128;
        // leave at least 1 for each of the remaining parts
        for d in 1..=remaining.saturating_sub(parts_left - 1) {
            total += rec(parts_left - 1, remaining - d);
        }
        total
    }
    Ok(rec(k, m))
}

/// Checks the bound  compositions(k, m) <= m^(k-1) / (k-1)!  exactly in
/// integer arithmetic.
pub fn composition_bound_holds(k: u32, m: u32) -> Result<bool> {
    if m > 20 {
        return Err(Error::CapExceeded { what: "composition_bound_holds", n: m as usize, cap: 20 });
    }
    let count = compositions(k, m)?;
    let mut fact: u128 = 1;
    for i in 2..k as u128 {
        fact *= i;
    }
    let power = (m as u128).pow(k.saturating_sub(1));
    Ok(count * fact <= power)
}
