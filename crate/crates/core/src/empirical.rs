//! Empirical verification of the computed densities: exact tuple counting
//! over boxes [1,x]^k, an inclusion-exclusion counting oracle, seeded
//! Monte Carlo estimation and convergence diagnostics.

use serde_json::json;

use crate::arith::{binom, gcd};
use crate::error::{Error, Result};
use crate::graph::CoprimalityGraph;
use crate::report::decimal20;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Exact-count budget: x^k may not exceed this many tuples.
pub const MAX_EXACT_TUPLES: u64 = 100_000_000;

/// Which pair statistic a count refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairMode {
    /// Exactly r coprime pairs.
    ExactR,
    /// At least r coprime pairs.
    AtLeastR,
}

/// What a count or Monte Carlo run targets.
#[derive(Clone, Debug)]
pub enum Target {
    /// Tuples satisfying a coprimality graph's constraints.
    Graph(CoprimalityGraph),
    /// Tuples by number of coprime pairs among all k(k-1)/2 pairs.
    Pairs { k: usize, r: usize, mode: PairMode },
}

/// Result of an exact count or a Monte Carlo estimate over [1,x]^k.
#[derive(Clone, Debug)]
pub struct CountResult {
    /// True for exact enumeration, false for Monte Carlo.
    pub exact: bool,
    /// Box bound (x for exact counts, X for Monte Carlo).
    pub x: u64,
    pub samples: Option<u64>,
    /// Exact tuple count, or Monte Carlo hit count.
    pub count: u64,
    /// count/x^k, or hits/samples.
    pub estimate: f64,
    /// 4 standard errors for Monte Carlo; None for exact counts.
    pub ci_halfwidth: Option<f64>,
    pub seed: Option<u64>,
}

impl CountResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "mode": if self.exact { "exact" } else { "mc" },
            "x": self.x,
            "samples": self.samples,
            "count": self.count,
            "estimate": decimal20(self.estimate),
            "ci": self.ci_halfwidth.map(decimal20),
            "seed": self.seed,
        })
    }
}

fn check_box(k: usize, x: u64) -> Result<()> {
    if x == 0 {
        return Err(Error::BelowMinimum {
            what: "box bound x",
            min: 1,
            got: 0,
        });
    }
    let mut budget = 1u64;
    for _ in 0..k {
        budget = budget
            .checked_mul(x)
            .filter(|&b| b <= MAX_EXACT_TUPLES)
            .ok_or(Error::BoxTooLarge { x, k })?;
    }
    Ok(())
}

/// For each vertex (0-indexed), the list of earlier neighbors, so the tuple
/// recursion can reject a partial assignment as soon as a constraint fails.
fn earlier_neighbors(g: &CoprimalityGraph) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); g.k()];
    for &(i, j) in g.edges() {
        out[j - 1].push(i - 1);
    }
    out
}

fn count_delta_rec(prev: &mut Vec<u64>, x: u64, k: usize, constraints: &[Vec<usize>]) -> u64 {
    let depth = prev.len();
    if depth == k {
        return 1;
    }
    let mut total = 0u64;
    'next: for n in 1..=x {
        for &e in &constraints[depth] {
            if gcd(prev[e], n) != 1 {
                continue 'next;
            }
        }
        prev.push(n);
        total += count_delta_rec(prev, x, k, constraints);
        prev.pop();
    }
    total
}

/// Exact count of tuples in [1,x]^k satisfying every edge constraint.
pub fn count_delta_exact(g: &CoprimalityGraph, x: u64) -> Result<CountResult> {
    let k = g.k();
    check_box(k, x)?;
    let constraints = earlier_neighbors(g);
    let count = first_coordinate_sum(x, |n1| {
        let mut prev = vec![n1];
        count_delta_rec(&mut prev, x, k, &constraints)
    });
    Ok(CountResult {
        exact: true,
        x,
        samples: None,
        count,
        estimate: count as f64 / (x as f64).powi(k as i32),
        ci_halfwidth: None,
        seed: None,
    })
}

#[cfg(feature = "parallel")]
fn first_coordinate_sum(x: u64, per_first: impl Fn(u64) -> u64 + Sync + Send) -> u64 {
    (1..=x).into_par_iter().map(per_first).sum()
}

#[cfg(not(feature = "parallel"))]
fn first_coordinate_sum(x: u64, per_first: impl Fn(u64) -> u64 + Sync) -> u64 {
    (1..=x).map(per_first).sum()
}

fn coprime_pairs(tuple: &[u64]) -> usize {
    let mut pairs = 0;
    for i in 0..tuple.len() {
        for j in i + 1..tuple.len() {
            if gcd(tuple[i], tuple[j]) == 1 {
                pairs += 1;
            }
        }
    }
    pairs
}

fn pair_hit(mode: PairMode, pairs: usize, r: usize) -> bool {
    match mode {
        PairMode::ExactR => pairs == r,
        PairMode::AtLeastR => pairs >= r,
    }
}

fn check_pair_args(k: usize, r: usize, mode: PairMode) -> Result<()> {
    if k < 2 {
        return Err(Error::KTooSmall(k));
    }
    let max = k * (k - 1) / 2;
    let min = usize::from(mode == PairMode::AtLeastR);
    if r < min || r > max {
        return Err(Error::ROutOfRange { r, min, max });
    }
    Ok(())
}

/// Exact count of tuples whose number of coprime pairs is exactly r
/// (or at least r), by direct pair counting.
pub fn count_beta_exact(k: usize, r: usize, mode: PairMode, x: u64) -> Result<CountResult> {
    check_pair_args(k, r, mode)?;
    check_box(k, x)?;
    let count = first_coordinate_sum(x, |n1| {
        let mut tuple = vec![1u64; k];
        tuple[0] = n1;
        let mut hits = 0u64;
        loop {
            if pair_hit(mode, coprime_pairs(&tuple), r) {
                hits += 1;
            }
            // odometer over coordinates 1..k
            let mut i = 1;
            loop {
                if i == k {
                    return hits;
                }
                tuple[i] += 1;
                if tuple[i] <= x {
                    break;
                }
                tuple[i] = 1;
                i += 1;
            }
        }
    });
    Ok(CountResult {
        exact: true,
        x,
        samples: None,
        count,
        estimate: count as f64 / (x as f64).powi(k as i32),
        ci_halfwidth: None,
        seed: None,
    })
}

/// The same count as `count_beta_exact`, assembled from signed constrained
/// counts over all edge subsets. Independent oracle for the
/// inclusion-exclusion identities behind the density formulas.
pub fn count_beta_via_inclusion_exclusion(
    k: usize,
    r: usize,
    mode: PairMode,
    x: u64,
) -> Result<CountResult> {
    check_pair_args(k, r, mode)?;
    if k > 4 || x > 50 {
        return Err(Error::InclusionExclusionGuard { k, x });
    }
    check_box(k, x)?;
    let e = k * (k - 1) / 2;
    let mut total: i128 = 0;
    for j in r..=e {
        let weight = match mode {
            PairMode::ExactR => binom(j, r),
            PairMode::AtLeastR => binom(j.wrapping_sub(1), r - 1),
        };
        let sign = if (j - r).is_multiple_of(2) { 1 } else { -1 };
        for g in crate::graph::enumerate_edge_subsets(k, j)? {
            let delta = count_delta_exact(&g, x)?.count;
            total += sign * weight * delta as i128;
        }
    }
    debug_assert!(total >= 0);
    let count = total.max(0) as u64;
    Ok(CountResult {
        exact: true,
        x,
        samples: None,
        count,
        estimate: count as f64 / (x as f64).powi(k as i32),
        ci_halfwidth: None,
        seed: None,
    })
}

/// SplitMix64 finalizer; the whole Monte Carlo stream is a pure function of
/// (seed, counter), so any scheduling of the sample loop gives identical
/// hit counts. The exact stream is documented in the README so other
/// implementations can reproduce it.
fn mix(seed: u64, counter: u64) -> u64 {
    let mut z = seed.wrapping_add(counter.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn sample_tuple(seed: u64, index: u64, k: usize, x: u64, out: &mut [u64]) {
    for (c, slot) in out.iter_mut().enumerate().take(k) {
        *slot = 1 + mix(seed, index * k as u64 + c as u64) % x;
    }
}

fn target_hit(target: &Target, tuple: &[u64]) -> bool {
    match target {
        Target::Graph(g) => g
            .edges()
            .iter()
            .all(|&(i, j)| gcd(tuple[i - 1], tuple[j - 1]) == 1),
        Target::Pairs { r, mode, .. } => pair_hit(*mode, coprime_pairs(tuple), *r),
    }
}

fn target_k(target: &Target) -> usize {
    match target {
        Target::Graph(g) => g.k(),
        Target::Pairs { k, .. } => *k,
    }
}

/// Seeded Monte Carlo estimate of a density over [1,X]^k.
///
/// Reproducible: identical (target, X, samples, seed) always give identical
/// hit counts. The confidence interval half-width is 4 standard errors.
pub fn monte_carlo(target: &Target, x_bound: u64, samples: u64, seed: u64) -> Result<CountResult> {
    if let Target::Pairs { k, r, mode } = target {
        check_pair_args(*k, *r, *mode)?;
    }
    if x_bound < 10_000 {
        return Err(Error::BelowMinimum {
            what: "Monte Carlo box bound X",
            min: 10_000,
            got: x_bound,
        });
    }
    if samples < 10_000 {
        return Err(Error::BelowMinimum {
            what: "Monte Carlo sample count",
            min: 10_000,
            got: samples,
        });
    }
    let k = target_k(target);
    let hits = mc_hits(target, x_bound, samples, seed, k);
    let estimate = hits as f64 / samples as f64;
    let se = (estimate * (1.0 - estimate) / samples as f64).sqrt();
    Ok(CountResult {
        exact: false,
        x: x_bound,
        samples: Some(samples),
        count: hits,
        estimate,
        ci_halfwidth: Some(4.0 * se),
        seed: Some(seed),
    })
}

#[cfg(feature = "parallel")]
fn mc_hits(target: &Target, x: u64, samples: u64, seed: u64, k: usize) -> u64 {
    const CHUNK: u64 = 1 << 14;
    let nchunks = samples.div_ceil(CHUNK);
    (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let mut tuple = vec![0u64; k];
            let mut hits = 0u64;
            for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                sample_tuple(seed, i, k, x, &mut tuple);
                if target_hit(target, &tuple) {
                    hits += 1;
                }
            }
            hits
        })
        .sum()
}

#[cfg(not(feature = "parallel"))]
fn mc_hits(target: &Target, x: u64, samples: u64, seed: u64, k: usize) -> u64 {
    let mut tuple = vec![0u64; k];
    let mut hits = 0u64;
    for i in 0..samples {
        sample_tuple(seed, i, k, x, &mut tuple);
        if target_hit(target, &tuple) {
            hits += 1;
        }
    }
    hits
}

/// One row of the convergence diagnostic table.
#[derive(Clone, Debug)]
pub struct DiagnosticRow {
    pub x: u64,
    pub estimate: f64,
    /// |estimate - A_G| * x / (log x)^{d_G}; diagnostic only.
    pub normalized_remainder: f64,
}

/// Normalized remainders of the box estimate against a known density value,
/// for each requested box size.
pub fn convergence_diagnostic(
    g: &CoprimalityGraph,
    density: f64,
    xs: &[u64],
) -> Result<Vec<DiagnosticRow>> {
    let d = g.max_degree() as f64;
    xs.iter()
        .map(|&x| {
            let est = count_delta_exact(g, x)?.estimate;
            let denom = (x as f64).ln().powf(d);
            Ok(DiagnosticRow {
                x,
                estimate: est,
                normalized_remainder: (est - density).abs() * x as f64 / denom,
            })
        })
        .collect()
}
