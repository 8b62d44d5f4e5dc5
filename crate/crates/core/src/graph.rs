//! Coprimality graphs and the combinatorial primitives the density formulas
//! are built on: degrees, neighborhoods, independent sets, vertex covers,
//! canonical forms and edge-subset enumeration.
//!
//! Vertices are labeled 1..k in the public API. Internally everything is a
//! bitmask over 0-indexed vertices, which keeps the subset loops cheap.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest k for which exhaustive permutation canonicalization is allowed.
pub const MAX_CANONICAL_K: usize = 8;
/// Largest k for which all edge subsets of the complete graph are enumerable.
pub const MAX_ENUM_K: usize = 7;

/// A subset of the vertex labels {1,..,k}, stored as a bitmask.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// Builds a set from 1-indexed vertex labels.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(vs: I) -> Self {
        let mut bits = 0u64;
        for v in vs {
            assert!((1..=64).contains(&v), "vertex label out of range");
            bits |= 1 << (v - 1);
        }
        VertexSet(bits)
    }

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, v: usize) -> bool {
        (1..=64).contains(&v) && self.0 >> (v - 1) & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Ascending 1-indexed vertex labels.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize + 1;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A simple graph on vertices 1..k whose edges encode pairwise-coprimality
/// constraints gcd(n_i, n_j) = 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoprimalityGraph {
    k: usize,
    /// Sorted, 1-indexed, i < j.
    edges: Vec<(usize, usize)>,
    /// adj[v] is the 0-indexed neighbor bitmask of 0-indexed vertex v.
    adj: Vec<u64>,
}

impl CoprimalityGraph {
    pub fn new(k: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if k < 2 {
            return Err(Error::KTooSmall(k));
        }
        if k > 63 {
            return Err(Error::KTooLarge {
                k,
                limit: 63,
                what: "bitmask graph representation",
            });
        }
        let mut normalized = BTreeSet::new();
        for &(a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop { v: a });
            }
            for v in [a, b] {
                if v < 1 || v > k {
                    return Err(Error::VertexOutOfRange { v, k });
                }
            }
            let e = (a.min(b), a.max(b));
            if !normalized.insert(e) {
                return Err(Error::DuplicateEdge { i: e.0, j: e.1 });
            }
        }
        let edges: Vec<_> = normalized.into_iter().collect();
        let mut adj = vec![0u64; k];
        for &(i, j) in &edges {
            adj[i - 1] |= 1 << (j - 1);
            adj[j - 1] |= 1 << (i - 1);
        }
        Ok(CoprimalityGraph { k, edges, adj })
    }

    /// The complete graph K_k.
    pub fn complete(k: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 1..=k {
            for j in i + 1..=k {
                edges.push((i, j));
            }
        }
        CoprimalityGraph::new(k, &edges)
    }

    /// The path 1-2-...-k.
    pub fn path(k: usize) -> Result<Self> {
        let edges: Vec<_> = (1..k).map(|i| (i, i + 1)).collect();
        CoprimalityGraph::new(k, &edges)
    }

    /// The k-cycle 1-2-...-k-1.
    pub fn cycle(k: usize) -> Result<Self> {
        let mut edges: Vec<_> = (1..k).map(|i| (i, i + 1)).collect();
        edges.push((1, k));
        CoprimalityGraph::new(k, &edges)
    }

    pub fn empty(k: usize) -> Result<Self> {
        CoprimalityGraph::new(k, &[])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i >= 1
            && j >= 1
            && i <= self.k
            && j <= self.k
            && i != j
            && self.adj[i - 1] >> (j - 1) & 1 == 1
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet((1u64 << self.k) - 1)
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        if v < 1 || v > self.k {
            return Err(Error::VertexOutOfRange { v, k: self.k });
        }
        Ok(self.adj[v - 1].count_ones() as usize)
    }

    pub fn max_degree(&self) -> usize {
        self.adj
            .iter()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Vertices incident to at least one edge.
    pub fn non_isolated(&self) -> VertexSet {
        let mut bits = 0u64;
        for (v, &m) in self.adj.iter().enumerate() {
            if m != 0 {
                bits |= 1 << v;
            }
        }
        VertexSet(bits)
    }

    /// N(L): union of the neighborhoods of the members of L.
    pub fn neighborhood(&self, l: VertexSet) -> VertexSet {
        let mut bits = 0u64;
        for v in l.iter() {
            if v <= self.k {
                bits |= self.adj[v - 1];
            }
        }
        VertexSet(bits)
    }

    /// True iff no edge has both endpoints inside s.
    pub fn is_independent(&self, s: VertexSet) -> bool {
        let bits = s.bits();
        let mut rest = bits;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if v < self.k && self.adj[v] & bits != 0 {
                return false;
            }
        }
        true
    }

    /// True iff every edge has at least one endpoint in s.
    pub fn is_vertex_cover(&self, s: VertexSet) -> bool {
        self.edges
            .iter()
            .all(|&(i, j)| s.contains(i) || s.contains(j))
    }

    /// Counts independent subsets of `restrict` by cardinality.
    ///
    /// Entry m of the result is the number of independent subsets of
    /// `restrict` with exactly m vertices; the vector has k+1 entries.
    pub fn independent_set_counts(&self, restrict: VertexSet) -> Vec<u64> {
        let mask = restrict.bits() & self.all_vertices().bits();
        let mut counts = vec![0u64; self.k + 1];
        // Enumerate all submasks of `mask`, including the empty set.
        let mut sub = mask;
        loop {
            if self.is_independent(VertexSet(sub)) {
                counts[sub.count_ones() as usize] += 1;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
        counts
    }

    /// A minimum vertex cover; the lexicographically least (by sorted member
    /// list) among all covers of minimum cardinality.
    pub fn min_vertex_cover(&self) -> VertexSet {
        for size in 0..=self.k {
            if let Some(cover) = self.first_cover_of_size(size) {
                return cover;
            }
        }
        unreachable!("the full vertex set always covers")
    }

    fn first_cover_of_size(&self, size: usize) -> Option<VertexSet> {
        // Combinations of {1..k} in lexicographic order of the member list.
        let mut comb: Vec<usize> = (1..=size).collect();
        loop {
            let s = VertexSet::from_vertices(comb.iter().copied());
            if self.is_vertex_cover(s) {
                return Some(s);
            }
            // next combination
            let mut i = size;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                if comb[i] < self.k - (size - 1 - i) {
                    comb[i] += 1;
                    for t in i + 1..size {
                        comb[t] = comb[t - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Bitmask over the edge slots of the complete graph on k vertices, in
    /// the pair order (1,2),(1,3),..,(1,k),(2,3),..
    pub fn edge_mask(&self) -> u32 {
        let mut mask = 0u32;
        for &(i, j) in &self.edges {
            mask |= 1 << edge_index(self.k, i, j);
        }
        mask
    }

    pub fn from_edge_mask(k: usize, mask: u32) -> Result<Self> {
        let e = k * (k - 1) / 2;
        let mut edges = Vec::new();
        for idx in 0..e {
            if mask >> idx & 1 == 1 {
                edges.push(edge_pair(k, idx));
            }
        }
        CoprimalityGraph::new(k, &edges)
    }

    /// Relabels vertices: vertex v becomes perm[v-1]+1 (perm is a 0-indexed
    /// permutation of 0..k).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(i, j)| (perm[i - 1] + 1, perm[j - 1] + 1))
            .collect();
        CoprimalityGraph::new(self.k, &edges)
    }

    /// Isomorphism-invariant key: the lexicographically minimal edge-set
    /// encoding over all vertex relabelings. Exhaustive over k! permutations,
    /// so k is capped at 8.
    pub fn canonical_key(&self) -> Result<Vec<u8>> {
        if self.k > MAX_CANONICAL_K {
            return Err(Error::KTooLarge {
                k: self.k,
                limit: MAX_CANONICAL_K,
                what: "exhaustive canonicalization",
            });
        }
        let maps = edge_permutation_maps(self.k);
        let mask = self.edge_mask();
        let canon = maps
            .iter()
            .map(|map| remap_edge_mask(mask, map))
            .min()
            .unwrap();
        let mut key = vec![self.k as u8];
        key.extend_from_slice(&canon.to_be_bytes());
        Ok(key)
    }
}

impl fmt::Debug for CoprimalityGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoprimalityGraph(k={}, edges={:?})", self.k, self.edges)
    }
}

/// Serializes in the line-oriented graph file format.
impl fmt::Display for CoprimalityGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.k)?;
        for &(i, j) in &self.edges {
            writeln!(f, "{} {}", i, j)?;
        }
        Ok(())
    }
}

/// Parses the graph file format: first non-comment line is k, then one
/// "i j" edge per line; '#' starts a comment line; blank lines are skipped.
impl FromStr for CoprimalityGraph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut k: Option<usize> = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = lineno + 1;
            if k.is_none() {
                let parsed = line.parse::<usize>().map_err(|_| Error::GraphFormat {
                    line: lineno,
                    msg: format!("expected vertex count, got {:?}", line),
                })?;
                k = Some(parsed);
                continue;
            }
            let mut parts = line.split_whitespace();
            let (a, b) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::GraphFormat {
                        line: lineno,
                        msg: format!("expected \"i j\", got {:?}", line),
                    })
                }
            };
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| Error::GraphFormat {
                    line: lineno,
                    msg: format!("bad vertex index {:?}", s),
                })
            };
            edges.push((parse(a)?, parse(b)?));
        }
        let k = k.ok_or(Error::GraphFormat {
            line: 0,
            msg: "empty graph file".into(),
        })?;
        CoprimalityGraph::new(k, &edges)
    }
}

/// Parses a graph file's content.
pub fn parse_graph(text: &str) -> Result<CoprimalityGraph> {
    text.parse()
}

/// Built-in fixture graphs addressable by name from the CLI and tests:
/// `c4`, `path3`, `example2`, `k<N>` and `empty<N>`.
pub fn named_graph(name: &str) -> Option<CoprimalityGraph> {
    match name {
        "c4" => CoprimalityGraph::cycle(4).ok(),
        "path3" => CoprimalityGraph::path(3).ok(),
        "example2" => {
            CoprimalityGraph::new(7, &[(1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (4, 5)]).ok()
        }
        _ => {
            if let Some(n) = name.strip_prefix('k') {
                let k = n.parse().ok()?;
                CoprimalityGraph::complete(k).ok()
            } else if let Some(n) = name.strip_prefix("empty") {
                let k = n.parse().ok()?;
                CoprimalityGraph::empty(k).ok()
            } else {
                None
            }
        }
    }
}

/// Index of the pair {i,j} (1-indexed, i<j) in the complete graph's edge
/// slot ordering (1,2),(1,3),..,(1,k),(2,3),..
pub fn edge_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= k);
    // slots before row i: (i-1)*k - i*(i-1)/2 ... derived from the row layout
    (i - 1) * k - i * (i - 1) / 2 + (j - i - 1)
}

/// Inverse of `edge_index`.
pub fn edge_pair(k: usize, idx: usize) -> (usize, usize) {
    let mut i = 1;
    let mut base = 0;
    loop {
        let row = k - i;
        if idx < base + row {
            return (i, i + 1 + idx - base);
        }
        base += row;
        i += 1;
    }
}

/// All permutations of 0..k.
pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..k).collect();
    heap_permute(&mut items, k, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
    if n == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..n {
        heap_permute(items, n - 1, out);
        if n.is_multiple_of(2) {
            items.swap(i, n - 1);
        } else {
            items.swap(0, n - 1);
        }
    }
}

/// For each permutation of the vertices, the induced permutation of the
/// complete graph's edge slots.
pub(crate) fn edge_permutation_maps(k: usize) -> Vec<Vec<u8>> {
    let e = k * (k - 1) / 2;
    permutations(k)
        .into_iter()
        .map(|perm| {
            (0..e)
                .map(|idx| {
                    let (i, j) = edge_pair(k, idx);
                    let (pi, pj) = (perm[i - 1] + 1, perm[j - 1] + 1);
                    edge_index(k, pi.min(pj), pi.max(pj)) as u8
                })
                .collect()
        })
        .collect()
}

pub(crate) fn remap_edge_mask(mask: u32, map: &[u8]) -> u32 {
    let mut out = 0u32;
    let mut rest = mask;
    while rest != 0 {
        let idx = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= 1 << map[idx];
    }
    out
}

/// Streams every j-edge subset of the complete graph on k vertices, each
/// exactly once, in ascending edge-mask order.
pub fn enumerate_edge_subsets(
    k: usize,
    j: usize,
) -> Result<impl Iterator<Item = CoprimalityGraph>> {
    if k < 2 {
        return Err(Error::KTooSmall(k));
    }
    if k > MAX_ENUM_K {
        return Err(Error::KTooLarge {
            k,
            limit: MAX_ENUM_K,
            what: "edge-subset enumeration",
        });
    }
    let e = k * (k - 1) / 2;
    if j > e {
        return Err(Error::EdgeBudgetOutOfRange { j, max: e });
    }
    let full: u32 = if e == 32 { u32::MAX } else { (1 << e) - 1 };
    // Gosper's hack walks the j-bit masks in ascending order.
    let mut next: Option<u32> = Some(if j == 0 { 0 } else { (1 << j) - 1 });
    Ok(std::iter::from_fn(move || {
        let mask = next?;
        next = if mask == 0 {
            None
        } else {
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            let n = (((r ^ mask) >> 2) / c) | r;
            if n > full {
                None
            } else {
                Some(n)
            }
        };
        Some(CoprimalityGraph::from_edge_mask(k, mask).expect("mask within range"))
    }))
}
