//! Assembly of the densities: A_G for a single graph, the exactly-r /
//! at-least-r / pairwise-non-coprime densities by inclusion-exclusion over
//! all edge subsets (grouped into isomorphism classes), the all-pairs
//! coprime density, and the literal closed forms for k = 3 and 4 as
//! independent references.

#![allow(non_snake_case)]

use std::collections::BTreeMap;

use serde_json::json;

use crate::arith::binom;
use crate::error::{Error, Result};
use crate::euler::Evaluator;
use crate::graph::{edge_permutation_maps, remap_edge_mask, CoprimalityGraph, MAX_ENUM_K};
use crate::local_factor::{
    factor_by_edge_subsets, factor_by_independent_sets, pairwise_coprime_factor, UniLocalFactor,
};
use crate::report::decimal20;

/// Which density a report carries.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DensityLabel {
    /// Density of tuples satisfying a given graph's constraints.
    AG,
    /// Density of pairwise-coprime tuples.
    Ak,
    /// Exactly r coprime pairs.
    CExact,
    /// At least r coprime pairs.
    CAtLeast,
    /// No coprime pair at all.
    CPairwiseNoncoprime,
    /// 1/zeta(k).
    ZetaInv,
    /// Literal closed form for k = 3.
    C3Closed,
    /// Literal closed form for k = 4.
    C4Closed,
}

impl DensityLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            DensityLabel::AG => "A_G",
            DensityLabel::Ak => "A_k",
            DensityLabel::CExact => "C_exact",
            DensityLabel::CAtLeast => "C_at_least",
            DensityLabel::CPairwiseNoncoprime => "C_pairwise_noncoprime",
            DensityLabel::ZetaInv => "zeta_inv",
            DensityLabel::C3Closed => "C3_closed",
            DensityLabel::C4Closed => "C4_closed",
        }
    }
}

/// A labeled density value with its rigorous error bound.
#[derive(Clone, Debug)]
pub struct DensityReport {
    pub label: DensityLabel,
    pub k: usize,
    pub r: Option<usize>,
    pub value: f64,
    pub error_bound: f64,
    pub prime_limit: u64,
    /// Number of isomorphism classes (or product terms) combined.
    pub num_classes: usize,
}

impl DensityReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "label": self.label.as_str(),
            "k": self.k,
            "r": self.r,
            "value": decimal20(self.value),
            "error_bound": decimal20(self.error_bound),
            "prime_limit": self.prime_limit,
            "num_classes": self.num_classes,
        })
    }
}

/// One isomorphism class of labeled graphs on k vertices.
#[derive(Clone, Debug)]
pub struct IsoClass {
    /// Canonical key shared by every member of the class.
    pub key: Vec<u8>,
    /// The member with the minimal edge-mask encoding.
    pub representative: CoprimalityGraph,
    pub edge_count: usize,
    /// Number of labeled graphs in the class (k!/|Aut|).
    pub multiplicity: u64,
    /// The class local factor.
    pub factor: UniLocalFactor,
}

/// All 2^(k(k-1)/2) labeled edge subsets grouped by isomorphism class.
#[derive(Clone, Debug)]
pub struct IsoClassTable {
    pub k: usize,
    pub classes: Vec<IsoClass>,
}

/// Groups every labeled graph on k vertices into isomorphism classes by
/// closing each unassigned edge mask under all vertex permutations.
pub fn build_iso_table(k: usize) -> Result<IsoClassTable> {
    if k < 2 {
        return Err(Error::KTooSmall(k));
    }
    if k > MAX_ENUM_K {
        return Err(Error::KTooLarge {
            k,
            limit: MAX_ENUM_K,
            what: "isomorphism-class enumeration",
        });
    }
    let e = k * (k - 1) / 2;
    let maps = edge_permutation_maps(k);
    let mut assigned = vec![false; 1usize << e];
    let mut classes = Vec::new();
    for mask in 0u32..1 << e {
        if assigned[mask as usize] {
            continue;
        }
        let mut orbit: Vec<u32> = maps.iter().map(|m| remap_edge_mask(mask, m)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &member in &orbit {
            assigned[member as usize] = true;
        }
        let canon = orbit[0];
        let representative = CoprimalityGraph::from_edge_mask(k, canon)?;
        let factor = factor_by_independent_sets(&representative, representative.all_vertices())?;
        let mut key = vec![k as u8];
        key.extend_from_slice(&canon.to_be_bytes());
        classes.push(IsoClass {
            key,
            edge_count: representative.edge_count(),
            multiplicity: orbit.len() as u64,
            representative,
            factor,
        });
    }
    classes.sort_by(|a, b| (a.edge_count, &a.key).cmp(&(b.edge_count, &b.key)));
    Ok(IsoClassTable { k, classes })
}

/// Density A_G of tuples satisfying the graph's constraints.
///
/// The independent-set local factor is cross-checked against the signed
/// edge-subset enumeration before evaluation (when the edge count permits).
pub fn density_A(g: &CoprimalityGraph, prime_limit: u64) -> Result<DensityReport> {
    let q = factor_by_independent_sets(g, g.all_vertices())?;
    if g.edge_count() <= crate::local_factor::MAX_EDGE_ENUM {
        let alt = factor_by_edge_subsets(g)?.collapse();
        if alt != q {
            return Err(Error::FactorMismatch);
        }
    }
    let v = crate::euler::evaluate(&q, prime_limit)?;
    Ok(DensityReport {
        label: DensityLabel::AG,
        k: g.k(),
        r: None,
        value: v.value,
        error_bound: v.total_error(),
        prime_limit,
        num_classes: 1,
    })
}

/// Signed, exact-integer combination of per-class Euler products.
///
/// Classes with the same polynomial share a single evaluation; weights are
/// combined exactly before anything numeric happens. The error bound is the
/// worst-case linear propagation sum |w_i| * err_i.
fn combine(
    table: &IsoClassTable,
    ev: &Evaluator,
    weight_of: impl Fn(usize) -> i128,
) -> Result<(f64, f64)> {
    let mut by_poly: BTreeMap<Vec<i64>, i128> = BTreeMap::new();
    for class in &table.classes {
        let w = weight_of(class.edge_count) * class.multiplicity as i128;
        if w != 0 {
            *by_poly.entry(class.factor.coeffs().to_vec()).or_insert(0) += w;
        }
    }
    let mut value = 0.0f64;
    let mut err = 0.0f64;
    let mut c = 0.0f64; // Kahan compensation for the value sum
    for (coeffs, w) in by_poly {
        if w == 0 {
            continue;
        }
        let q = UniLocalFactor::new(coeffs)?;
        let v = ev.eval(&q)?;
        let wf = w as f64;
        let y = wf * v.value - c;
        let t = value + y;
        c = (t - value) - y;
        value = t;
        err += wf.abs() * v.total_error() + (wf * v.value).abs() * 4.0 * f64::EPSILON;
    }
    Ok((value, err))
}

fn check_r(k: usize, r: usize, min: usize) -> Result<()> {
    let max = k * (k - 1) / 2;
    if r < min || r > max {
        return Err(Error::ROutOfRange { r, min, max });
    }
    Ok(())
}

/// Density of tuples with exactly r coprime pairs.
pub fn density_exact_r(k: usize, r: usize, prime_limit: u64) -> Result<DensityReport> {
    check_r(k, r, 0)?;
    let table = build_iso_table(k)?;
    let ev = Evaluator::new(prime_limit)?;
    let (value, error_bound) = combine(&table, &ev, |j| {
        if j < r {
            0
        } else {
            let sign = if (j - r).is_multiple_of(2) { 1 } else { -1 };
            sign * binom(j, r)
        }
    })?;
    Ok(DensityReport {
        label: DensityLabel::CExact,
        k,
        r: Some(r),
        value,
        error_bound,
        prime_limit,
        num_classes: table.classes.len(),
    })
}

/// Density of tuples with at least r coprime pairs (r >= 1).
pub fn density_at_least_r(k: usize, r: usize, prime_limit: u64) -> Result<DensityReport> {
    check_r(k, r, 1)?;
    let table = build_iso_table(k)?;
    let ev = Evaluator::new(prime_limit)?;
    let (value, error_bound) = combine(&table, &ev, |j| {
        if j < r {
            0
        } else {
            let sign = if (j - r).is_multiple_of(2) { 1 } else { -1 };
            sign * binom(j - 1, r - 1)
        }
    })?;
    Ok(DensityReport {
        label: DensityLabel::CAtLeast,
        k,
        r: Some(r),
        value,
        error_bound,
        prime_limit,
        num_classes: table.classes.len(),
    })
}

/// Density of pairwise non-coprime tuples: the r = 0 case.
pub fn density_pairwise_noncoprime(k: usize, prime_limit: u64) -> Result<DensityReport> {
    let report = density_exact_r(k, 0, prime_limit)?;
    Ok(DensityReport {
        label: DensityLabel::CPairwiseNoncoprime,
        r: None,
        ..report
    })
}

/// Density of pairwise coprime tuples, from the closed-coefficient factor.
pub fn density_pairwise_coprime(k: usize, prime_limit: u64) -> Result<DensityReport> {
    let q = pairwise_coprime_factor(k)?;
    let v = crate::euler::evaluate(&q, prime_limit)?;
    Ok(DensityReport {
        label: DensityLabel::Ak,
        k,
        r: None,
        value: v.value,
        error_bound: v.total_error(),
        prime_limit,
        num_classes: 1,
    })
}

/// 1/zeta(k) wrapped in a report.
pub fn density_zeta_inverse(k: usize, prime_limit: u64) -> Result<DensityReport> {
    let v = crate::euler::zeta_inverse(k, prime_limit)?;
    Ok(DensityReport {
        label: DensityLabel::ZetaInv,
        k,
        r: None,
        value: v.value,
        error_bound: v.total_error(),
        prime_limit,
        num_classes: 1,
    })
}

fn closed_form(
    label: DensityLabel,
    k: usize,
    terms: &[(i64, &[i64])],
    prime_limit: u64,
) -> Result<DensityReport> {
    let ev = Evaluator::new(prime_limit)?;
    let mut value = 1.0f64; // leading constant term
    let mut err = 0.0f64;
    for &(w, coeffs) in terms {
        let q = UniLocalFactor::new(coeffs.to_vec())?;
        let v = ev.eval(&q)?;
        value += w as f64 * v.value;
        err += (w as f64).abs() * v.total_error() + (w as f64 * v.value).abs() * 4.0 * f64::EPSILON;
    }
    Ok(DensityReport {
        label,
        k,
        r: None,
        value,
        error_bound: err,
        prime_limit,
        num_classes: terms.len() + 1,
    })
}

/// The literal 4-product closed form of the k = 3 non-coprime density.
pub fn density_C3_closed(prime_limit: u64) -> Result<DensityReport> {
    closed_form(
        DensityLabel::C3Closed,
        3,
        &[(-3, &[1, 0, -1]), (3, &[1, 0, -2, 1]), (-1, &[1, 0, -3, 2])],
        prime_limit,
    )
}

/// The literal 8-product closed form of the k = 4 non-coprime density.
pub fn density_C4_closed(prime_limit: u64) -> Result<DensityReport> {
    closed_form(
        DensityLabel::C4Closed,
        4,
        &[
            (-6, &[1, 0, -1]),
            (3, &[1, 0, -2, 0, 1]),
            (12, &[1, 0, -2, 1]),
            (-4, &[1, 0, -3, 3, -1]),
            (-16, &[1, 0, -3, 2]),
            (15, &[1, 0, -4, 4, -1]),
            (-6, &[1, 0, -5, 6, -2]),
            (1, &[1, 0, -6, 8, -3]),
        ],
        prime_limit,
    )
}
