//! Polymer supports, multi-indices and the combinatorial kernels built on
//! them: truncated functions, exact-rational cluster coefficients and the
//! shared-label tests used by the remainder estimates.
//!
//! Two supports are compatible when they are disjoint; a polymer is always
//! incompatible with itself.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::graphs::enumerate_connected;
use crate::{Error, Result};

/// Cap on the total multiplicity accepted by [`cluster_coefficient`]
/// (the expanded graph has that many vertices; the subset recursion is 3^m).
pub const MULTIPLICITY_CAP: usize = 10;

/// A nonempty set of positive particle labels, stored sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PolymerSupport {
    labels: Vec<u32>,
}

impl PolymerSupport {
    pub fn new(mut labels: Vec<u32>) -> Result<Self> {
        labels.sort_unstable();
        labels.dedup();
        if labels.is_empty() {
            return Err(Error::InvalidInput("polymer support must be nonempty".into()));
        }
        if labels[0] == 0 {
            return Err(Error::InvalidInput("labels are positive integers".into()));
        }
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, label: u32) -> bool {
        self.labels.binary_search(&label).is_ok()
    }

    pub fn intersection(&self, other: &Self) -> Vec<u32> {
        self.labels
            .iter()
            .copied()
            .filter(|&l| other.contains(l))
            .collect()
    }

    /// Compatible means disjoint supports.
    pub fn compatible(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }
}

/// Convenience constructor used all over the tests.
pub fn support(labels: &[u32]) -> PolymerSupport {
    PolymerSupport::new(labels.to_vec()).expect("valid support")
}

/// A multi-index: polymer supports with positive multiplicities, stored in
/// canonical (sorted) order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiIndex {
    entries: Vec<(PolymerSupport, u32)>,
}

impl MultiIndex {
    pub fn new(entries: Vec<(PolymerSupport, u32)>) -> Result<Self> {
        let mut merged: Vec<(PolymerSupport, u32)> = Vec::new();
        for (s, m) in entries {
            if m == 0 {
                return Err(Error::InvalidInput("multiplicities are positive".into()));
            }
            match merged.iter_mut().find(|(t, _)| *t == s) {
                Some((_, mm)) => *mm += m,
                None => merged.push((s, m)),
            }
        }
        if merged.is_empty() {
            return Err(Error::InvalidInput("multi-index must be nonempty".into()));
        }
        merged.sort();
        Ok(Self { entries: merged })
    }

    pub fn entries(&self) -> &[(PolymerSupport, u32)] {
        &self.entries
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|(_, m)| *m as usize).sum()
    }

    /// prod_{gamma} I(gamma)!
    pub fn factorial(&self) -> BigInt {
        let mut out = BigInt::from(1);
        for (_, m) in &self.entries {
            for k in 2..=*m {
                out *= BigInt::from(k);
            }
        }
        out
    }

    /// Union of all labels in the support.
    pub fn label_union(&self) -> Vec<u32> {
        let mut labels: Vec<u32> = self
            .entries
            .iter()
            .flat_map(|(s, _)| s.labels().iter().copied())
            .collect();
        labels.sort_unstable();
        labels.dedup();
        labels
    }

    /// Whether the incompatibility graph over the distinct supports is
    /// connected.
    pub fn support_graph_connected(&self) -> bool {
        let k = self.entries.len();
        if k <= 1 {
            return true;
        }
        let mut seen = 1u64;
        let mut frontier = vec![0usize];
        while let Some(i) = frontier.pop() {
            for j in 0..k {
                if seen & (1 << j) == 0
                    && !self.entries[i].0.compatible(&self.entries[j].0)
                {
                    seen |= 1 << j;
                    frontier.push(j);
                }
            }
        }
        seen.count_ones() as usize == k
    }
}

/// Sum over connected spanning subgraphs of the incompatibility graph of
/// (-1)^(edge count). `incompat[i]` is the bitmask of vertices incompatible
/// with vertex i.
///
/// Uses the first-vertex component recursion: with w(S) = 1 iff S carries no
/// incompatibility edge, u(S) = w(S) - sum over proper T containing min(S) of
/// u(T) w(S \ T).
pub fn ursell_value(n: usize, incompat: &[u64]) -> i64 {
    assert!(n <= 16, "ursell_value is meant for small vertex counts");
    if n == 0 {
        return 0;
    }
    let full: u64 = (1 << n) - 1;
    // w(S): no internal edges
    let mut independent = vec![false; 1 << n];
    for s in 0..=full {
        let mut ok = true;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if incompat[v] & s & !(1 << v) != 0 {
                ok = false;
                break;
            }
        }
        independent[s as usize] = ok;
    }
    let mut u = vec![0i64; 1 << n];
    for s in 1..=full {
        let v0 = s.trailing_zeros();
        let mut val = i64::from(independent[s as usize]);
        // proper subsets T of S containing v0
        let inner = s & !(1 << v0);
        let mut t = (inner.wrapping_sub(1)) & inner;
        loop {
            let sub = t | (1 << v0);
            if sub != s {
                let rest = s & !sub;
                if independent[rest as usize] {
                    val -= u[sub as usize];
                }
            }
            if t == 0 {
                break;
            }
            t = (t.wrapping_sub(1)) & inner;
        }
        u[s as usize] = val;
    }
    u[full as usize]
}

/// Truncated function of an ordered list of supports: 1 for a single
/// support, otherwise the sum over connected graphs on the positions of
/// prod over edges of (-1) * [supports incompatible]. Integer exact.
///
/// The connected-graph list is enumerated literally, so the enumeration cap
/// applies to the list length.
pub fn truncated_function(supports: &[PolymerSupport]) -> Result<i64> {
    let n = supports.len();
    if n == 0 {
        return Err(Error::InvalidInput("need at least one support".into()));
    }
    if n == 1 {
        return Ok(1);
    }
    let mut total = 0i64;
    for g in enumerate_connected(n)? {
        let mut term = if g.edge_count() % 2 == 0 { 1i64 } else { -1 };
        for (i, j) in g.edges() {
            if supports[i - 1].compatible(&supports[j - 1]) {
                term = 0;
                break;
            }
        }
        total += term;
    }
    Ok(total)
}

/// Same value as [`truncated_function`], computed by the subset recursion
/// instead of graph enumeration. No cap; used to cross-check and by callers
/// that outgrow the enumeration limit.
pub fn truncated_function_recursive(supports: &[PolymerSupport]) -> i64 {
    let n = supports.len();
    if n == 1 {
        return 1;
    }
    let mut incompat = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && !supports[i].compatible(&supports[j]) {
                incompat[i] |= 1 << j;
            }
        }
    }
    ursell_value(n, &incompat)
}

/// Exact-rational cluster coefficient of a multi-index: (1/I!) times the sum
/// over connected spanning subgraphs of the expanded incompatibility graph of
/// (-1)^(edge count). Zero when the support graph is disconnected.
pub fn cluster_coefficient(index: &MultiIndex) -> Result<BigRational> {
    let m = index.total_multiplicity();
    if m > MULTIPLICITY_CAP {
        return Err(Error::CapExceeded { what: "cluster_coefficient", n: m, cap: MULTIPLICITY_CAP });
    }
    if !index.support_graph_connected() {
        return Ok(BigRational::zero());
    }
    // expand each support into I(gamma) copies
    let mut owner = Vec::with_capacity(m);
    for (k, (_, mult)) in index.entries().iter().enumerate() {
        for _ in 0..*mult {
            owner.push(k);
        }
    }
    let mut incompat = vec![0u64; m];
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let (si, _) = &index.entries()[owner[i]];
            let (sj, _) = &index.entries()[owner[j]];
            // copies of the same polymer are mutually incompatible
            if owner[i] == owner[j] || !si.compatible(sj) {
                incompat[i] |= 1 << j;
            }
        }
    }
    let u = ursell_value(m, &incompat);
    Ok(BigRational::new(BigInt::from(u), index.factorial()))
}

/// Sum over connected graphs on n vertices of the product of `f(i, j)` over
/// edges (0-based), by the same subset recursion with real edge weights:
/// w(S) = prod over pairs in S of (1 + f), u extracts the connected part.
pub fn connected_edge_sum(n: usize, f: &dyn Fn(usize, usize) -> f64) -> f64 {
    assert!(n >= 1 && n <= 16);
    if n == 1 {
        return 1.0;
    }
    let full: usize = (1 << n) - 1;
    let mut w = vec![1.0f64; 1 << n];
    for s in 1..=full {
        // peel the highest vertex to reuse smaller subsets
        let v = usize::BITS as usize - 1 - s.leading_zeros() as usize;
        let rest = s & !(1 << v);
        let mut val = w[rest];
        let mut r = rest;
        while r != 0 {
            let u = r.trailing_zeros() as usize;
            r &= r - 1;
            val *= 1.0 + f(u.min(v), u.max(v));
        }
        w[s] = val;
    }
    let mut u = vec![0.0f64; 1 << n];
    for s in 1..=full {
        let v0 = s.trailing_zeros() as usize;
        let mut val = w[s];
        let inner = s & !(1 << v0);
        let mut t = inner.wrapping_sub(1) & inner;
        loop {
            let sub = t | (1 << v0);
            if sub != s {
                val -= u[sub] * w[s & !sub];
            }
            if t == 0 {
                break;
            }
            t = t.wrapping_sub(1) & inner;
        }
        u[s] = val;
    }
    u[full]
}

/// Shared-label test over the indexed supports.
///
/// For two indices: intersection of size at least two. For k >= 3: there are
/// distinct labels v_1, ..., v_k with v_l in the intersection of the l-th and
/// (l+1)-th indexed supports, cyclically. Decided by exhaustive search.
pub fn cyclic_overlap(supports: &[PolymerSupport], indices: &[usize]) -> Result<bool> {
    let k = indices.len();
    if k < 2 {
        return Err(Error::InvalidInput("cyclic overlap needs k >= 2 indices".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for &i in indices {
        if i >= supports.len() {
            return Err(Error::InvalidInput(format!("index {i} out of range")));
        }
        if !seen.insert(i) {
            return Err(Error::InvalidInput("indices must be distinct".into()));
        }
    }
    if k == 2 {
        let inter = supports[indices[0]].intersection(&supports[indices[1]]);
        return Ok(inter.len() >= 2);
    }
    // candidate labels per cyclic edge
    let candidates: Vec<Vec<u32>> = (0..k)
        .map(|l| supports[indices[l]].intersection(&supports[indices[(l + 1) % k]]))
        .collect();
    fn assign(candidates: &[Vec<u32>], l: usize, used: &mut Vec<u32>) -> bool {
        if l == candidates.len() {
            return true;
        }
        for &v in &candidates[l] {
            if !used.contains(&v) {
                used.push(v);
                if assign(candidates, l + 1, used) {
                    return true;
                }
                used.pop();
            }
        }
        false
    }
    Ok(assign(&candidates, 0, &mut Vec::new()))
}
