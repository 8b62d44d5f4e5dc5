//! Exact integer-coefficient per-prime local factors of the constrained-tuple
//! density, computed three independent ways, plus a direct Moebius-convolution
//! oracle for the coefficients.
//!
//! All arithmetic here is exact; floating point only enters at Euler-product
//! evaluation time.

use std::collections::BTreeMap;

use serde_json::json;

use crate::arith::{binom, divisors, gcd, mobius};
use crate::error::{Error, Result};
use crate::graph::{CoprimalityGraph, VertexSet};

/// Univariate local factor Q(x) = sum a_m x^m, with x standing for 1/p.
///
/// Invariants: a_0 = 1 and a_1 = 0 (the degree-1 terms always cancel).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniLocalFactor {
    coeffs: Vec<i64>,
}

impl UniLocalFactor {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        let ok = coeffs.first() == Some(&1) && coeffs.get(1).is_none_or(|&a| a == 0);
        if !ok {
            return Err(Error::MalformedFactor(coeffs));
        }
        Ok(UniLocalFactor { coeffs })
    }

    /// The constant factor 1, padded to k+1 coefficients.
    pub fn one(k: usize) -> Self {
        let mut coeffs = vec![0i64; k + 1];
        coeffs[0] = 1;
        UniLocalFactor { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// True iff Q is the constant polynomial 1.
    pub fn is_one(&self) -> bool {
        self.coeffs.iter().skip(1).all(|&a| a == 0)
    }

    /// Horner evaluation at a real point.
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &a in self.coeffs.iter().rev() {
            acc = acc * x + a as f64;
        }
        acc
    }

    /// JSON serialization: the plain coefficient array [a_0,..,a_k].
    pub fn to_json(&self) -> serde_json::Value {
        json!(self.coeffs)
    }

    /// Drops trailing zero coefficients (used when comparing factors that
    /// were produced with different paddings).
    pub fn trimmed(&self) -> Vec<i64> {
        let mut c = self.coeffs.clone();
        while c.len() > 1 && *c.last().unwrap() == 0 {
            c.pop();
        }
        c
    }
}

/// Multivariate local factor: vertex subset S -> integer coefficient c(S),
/// the coefficient of prod_{i in S} x_i. Only nonzero coefficients are kept,
/// except c(empty) = 1 which is always present.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiLocalFactor {
    k: usize,
    coeffs: BTreeMap<u64, i64>,
}

impl MultiLocalFactor {
    fn from_map(k: usize, mut coeffs: BTreeMap<u64, i64>) -> Self {
        coeffs.retain(|_, &mut c| c != 0);
        coeffs.insert(0, 1);
        MultiLocalFactor { k, coeffs }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coeff(&self, s: VertexSet) -> i64 {
        self.coeffs.get(&s.bits()).copied().unwrap_or(0)
    }

    /// Nonzero terms, keyed by vertex subset.
    pub fn terms(&self) -> impl Iterator<Item = (VertexSet, i64)> + '_ {
        self.coeffs
            .iter()
            .map(|(&bits, &c)| (VertexSet::from_bits(bits), c))
    }

    /// Collapses x_i -> x: a_m = sum over |S| = m of c(S).
    pub fn collapse(&self) -> UniLocalFactor {
        let mut coeffs = vec![0i64; self.k + 1];
        for (&bits, &c) in &self.coeffs {
            coeffs[bits.count_ones() as usize] += c;
        }
        UniLocalFactor { coeffs }
    }

    /// JSON serialization: sorted vertex lists ("1,3,4") mapped to integers.
    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        for (s, c) in self.terms() {
            let key = s
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",");
            obj.insert(key, json!(c));
        }
        serde_json::Value::Object(obj)
    }
}

/// Local factor from independent-set counts:
/// Q(x) = sum_m i_m x^m (1-x)^{n-m} over the restricted vertex set of size n.
///
/// `restrict` must be the full vertex set or the non-isolated set; both give
/// the same polynomial after padding to k+1 coefficients, since an isolated
/// vertex contributes the factor x + (1-x) = 1.
pub fn factor_by_independent_sets(
    g: &CoprimalityGraph,
    restrict: VertexSet,
) -> Result<UniLocalFactor> {
    if restrict != g.all_vertices() && restrict != g.non_isolated() {
        return Err(Error::InvalidRestrict);
    }
    let counts = g.independent_set_counts(restrict);
    let n = restrict.len();
    let mut coeffs = vec![0i64; g.k() + 1];
    for (m, &im) in counts.iter().enumerate().take(n + 1) {
        if im == 0 {
            continue;
        }
        // x^m (1-x)^{n-m} contributes binom(n-m, t) (-1)^t to degree m+t.
        for t in 0..=n - m {
            let sign = if t % 2 == 0 { 1 } else { -1 };
            coeffs[m + t] += im as i64 * sign * binom(n - m, t) as i64;
        }
    }
    UniLocalFactor::new(coeffs)
}

/// Maximum edge count for the 2^|E| edge-subset enumeration.
pub const MAX_EDGE_ENUM: usize = 24;

/// Local factor by signed edge-subset enumeration:
/// c(S) = sum over F subseteq E with vertex support exactly S of (-1)^|F|.
pub fn factor_by_edge_subsets(g: &CoprimalityGraph) -> Result<MultiLocalFactor> {
    let e = g.edge_count();
    if e > MAX_EDGE_ENUM {
        return Err(Error::TooManyEdges {
            edges: e,
            limit: MAX_EDGE_ENUM,
        });
    }
    let edge_bits: Vec<u64> = g
        .edges()
        .iter()
        .map(|&(i, j)| (1u64 << (i - 1)) | (1u64 << (j - 1)))
        .collect();
    let mut coeffs: BTreeMap<u64, i64> = BTreeMap::new();
    for f in 0u32..1 << e {
        let mut support = 0u64;
        let mut rest = f;
        while rest != 0 {
            support |= edge_bits[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        *coeffs.entry(support).or_insert(0) += if f.count_ones() % 2 == 0 { 1 } else { -1 };
    }
    Ok(MultiLocalFactor::from_map(g.k(), coeffs))
}

/// Local factor from a vertex cover J: the sum over independent subsets L of
/// J of  prod_{l in L} x_l * prod_{i in (J\L) u (N(L)\J)} (1 - x_i),
/// expanded into exact multilinear coefficients.
pub fn factor_by_vertex_cover(g: &CoprimalityGraph, cover: VertexSet) -> Result<MultiLocalFactor> {
    if !g.is_vertex_cover(cover) {
        return Err(Error::NotACover(cover.to_vec()));
    }
    let j_bits = cover.bits();
    let mut coeffs: BTreeMap<u64, i64> = BTreeMap::new();
    let mut l = j_bits;
    loop {
        let l_set = VertexSet::from_bits(l);
        if g.is_independent(l_set) {
            let n_l = g.neighborhood(l_set);
            let d = (j_bits & !l) | (n_l.bits() & !j_bits);
            // Expand prod_{i in d} (1 - x_i): subset T picks up (-1)^|T|.
            let mut t = d;
            loop {
                let sign = if t.count_ones().is_multiple_of(2) {
                    1
                } else {
                    -1
                };
                *coeffs.entry(l | t).or_insert(0) += sign;
                if t == 0 {
                    break;
                }
                t = (t - 1) & d;
            }
        }
        if l == 0 {
            break;
        }
        l = (l - 1) & j_bits;
    }
    Ok(MultiLocalFactor::from_map(g.k(), coeffs))
}

/// The local factor of the all-pairs-coprime density:
/// a_0 = 1, a_1 = 0, a_j = (-1)^{j-1} (j-1) C(k,j) for j >= 2.
pub fn pairwise_coprime_factor(k: usize) -> Result<UniLocalFactor> {
    if k < 2 {
        return Err(Error::KTooSmall(k));
    }
    if k > 40 {
        return Err(Error::KTooLarge {
            k,
            limit: 40,
            what: "pairwise-coprime coefficients in i64",
        });
    }
    let mut coeffs = vec![0i64; k + 1];
    coeffs[0] = 1;
    for (j, c) in coeffs.iter_mut().enumerate().skip(2) {
        let sign = if (j - 1) % 2 == 0 { 1 } else { -1 };
        *c = sign * (j as i64 - 1) * binom(k, j) as i64;
    }
    UniLocalFactor::new(coeffs)
}

/// Direct Moebius-convolution oracle:
/// sum over divisor tuples d_i | n_i of mu(d_1)..mu(d_k) * [the quotient
/// tuple satisfies every edge constraint].
///
/// This is the anti-hallucination reference for the local-factor
/// coefficients; inputs are capped at 200 per component.
pub fn mobius_delta_oracle(g: &CoprimalityGraph, n: &[u64]) -> Result<i64> {
    if n.len() != g.k() {
        return Err(Error::TupleLength {
            got: n.len(),
            k: g.k(),
        });
    }
    for &v in n {
        if v == 0 || v > 200 {
            return Err(Error::OracleInputTooLarge(v));
        }
    }
    let div_lists: Vec<Vec<u64>> = n.iter().map(|&v| divisors(v)).collect();
    let mu_lists: Vec<Vec<i64>> = div_lists
        .iter()
        .map(|ds| ds.iter().map(|&d| mobius(d)).collect())
        .collect();
    let k = g.k();
    let mut idx = vec![0usize; k];
    let mut total: i64 = 0;
    'outer: loop {
        let mut mu_prod: i64 = 1;
        for i in 0..k {
            mu_prod *= mu_lists[i][idx[i]];
            if mu_prod == 0 {
                break;
            }
        }
        if mu_prod != 0 {
            let quot: Vec<u64> = (0..k).map(|i| n[i] / div_lists[i][idx[i]]).collect();
            let satisfied = g
                .edges()
                .iter()
                .all(|&(a, b)| gcd(quot[a - 1], quot[b - 1]) == 1);
            if satisfied {
                total += mu_prod;
            }
        }
        // odometer over divisor indices
        for i in 0..k {
            idx[i] += 1;
            if idx[i] < div_lists[i].len() {
                continue 'outer;
            }
            idx[i] = 0;
        }
        break;
    }
    Ok(total)
}
