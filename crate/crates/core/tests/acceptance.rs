//! Acceptance suite. Each test pins one release criterion with its
//! tolerance and prints a single PASS/FAIL line so the whole gate can be
//! read off `cargo test --test acceptance -- --nocapture`.

use coprime_density::density::{
    density_A, density_C3_closed, density_C4_closed, density_at_least_r, density_exact_r,
};
use coprime_density::empirical::{
    count_beta_exact, count_beta_via_inclusion_exclusion, count_delta_exact, monte_carlo, PairMode,
    Target,
};
use coprime_density::euler::evaluate;
use coprime_density::graph::{named_graph, CoprimalityGraph};
use coprime_density::local_factor::{
    factor_by_edge_subsets, factor_by_independent_sets, factor_by_vertex_cover,
    mobius_delta_oracle, pairwise_coprime_factor, UniLocalFactor,
};

const PRIME_LIMIT: u64 = 10_000_000;

fn report(name: &str, ok: bool, detail: &str) {
    println!(
        "[{}] criterion {}: {}",
        if ok { "PASS" } else { "FAIL" },
        name,
        detail
    );
    assert!(ok, "criterion {name} failed: {detail}");
}

/// All three local-factor formulas reproduce the two worked fixtures
/// exactly: C4 and the 7-vertex example graph.
#[test]
fn criterion_01_local_factor_fixtures() {
    let cases: [(&str, &[i64]); 2] = [
        ("c4", &[1, 0, -4, 4, -1]),
        ("example2", &[1, 0, -6, 8, -3, 0, 0, 0]),
    ];
    let mut ok = true;
    for (name, want) in cases {
        let g = named_graph(name).unwrap();
        let a = factor_by_independent_sets(&g, g.all_vertices()).unwrap();
        let b = factor_by_edge_subsets(&g).unwrap().collapse();
        let c = factor_by_vertex_cover(&g, g.min_vertex_cover())
            .unwrap()
            .collapse();
        ok &= a.coeffs() == want && b.coeffs() == want && c.coeffs() == want;
    }
    report(
        "1 local-factor fixtures",
        ok,
        "three formulas, exact integer equality",
    );
}

/// Closed-form pairwise-coprime coefficients match the complete-graph
/// independent-set computation for k = 2..6.
#[test]
fn criterion_02_pairwise_coprime_coefficients() {
    let mut ok = true;
    for k in 2..=6usize {
        let closed = pairwise_coprime_factor(k).unwrap();
        let kk = CoprimalityGraph::complete(k).unwrap();
        let direct = factor_by_independent_sets(&kk, kk.all_vertices()).unwrap();
        ok &= closed.coeffs() == direct.coeffs();
        for (j, &a) in closed.coeffs().iter().enumerate().skip(1) {
            let sign = if j % 2 == 1 { 1i64 } else { -1 };
            let binom = (0..j).fold(1i64, |acc, t| acc * (k - t) as i64 / (t + 1) as i64);
            ok &= a == sign * (j as i64 - 1) * binom;
        }
    }
    report("2 pairwise-coprime coefficients", ok, "k = 2..6, exact");
}

/// The Mobius-convolution oracle reproduces every edge-subset coefficient
/// c(S) for all 64 graphs on 4 vertices, at p = 2 and p = 3.
#[test]
fn criterion_03_oracle_equivalence() {
    let mut ok = true;
    for mask in 0u32..64 {
        let g = CoprimalityGraph::from_edge_mask(4, mask).unwrap();
        let multi = factor_by_edge_subsets(&g).unwrap();
        for nu in 0u32..16 {
            let support = coprime_density::graph::VertexSet::from_bits(nu as u64);
            let want = multi.coeff(support);
            for p in [2u64, 3] {
                let n: Vec<u64> = (0..4)
                    .map(|i| if nu >> i & 1 == 1 { p } else { 1 })
                    .collect();
                if mobius_delta_oracle(&g, &n).unwrap() != want {
                    ok = false;
                }
            }
        }
    }
    report(
        "3 oracle equivalence",
        ok,
        "64 graphs x 16 supports x p in {2,3}",
    );
}

/// evaluate([1,0,-1], 1e7) is within its own reported error bound of
/// 6/pi^2, and that bound is at most 1e-6.
#[test]
fn criterion_04_zeta2_numeric() {
    let q = UniLocalFactor::new(vec![1, 0, -1]).unwrap();
    let v = evaluate(&q, PRIME_LIMIT).unwrap();
    let exact = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    let err = v.total_error();
    let ok = (v.value - exact).abs() <= err && err <= 1e-6;
    report(
        "4 1/zeta(2) numeric",
        ok,
        &format!(
            "|value - 6/pi^2| = {:.3e}, bound = {:.3e}",
            (v.value - exact).abs(),
            err
        ),
    );
}

/// The inclusion-exclusion densities agree with the independent closed
/// forms for C_{3,0} and C_{4,0}, with each error bound at most 1e-6.
#[test]
fn criterion_05_closed_form_agreement() {
    let mut ok = true;
    let mut detail = String::new();
    for (k, closed) in [
        (3usize, density_C3_closed(PRIME_LIMIT).unwrap()),
        (4, density_C4_closed(PRIME_LIMIT).unwrap()),
    ] {
        let ie = density_exact_r(k, 0, PRIME_LIMIT).unwrap();
        let gap = (ie.value - closed.value).abs();
        let budget = ie.error_bound + closed.error_bound;
        ok &= gap <= budget && ie.error_bound <= 1e-6 && closed.error_bound <= 1e-6;
        detail.push_str(&format!(
            "k={k}: gap {:.3e} vs budget {:.3e} (bounds {:.3e}, {:.3e}); ",
            gap, budget, ie.error_bound, closed.error_bound
        ));
    }
    report("5 closed-form agreement", ok, &detail);
}

/// Sum over r of C_{k,r} is 1 to within 1e-8 for k = 3, 4, 5.
#[test]
fn criterion_06_partition_of_unity() {
    let mut ok = true;
    let mut detail = String::new();
    for k in 3..=5usize {
        let top = k * (k - 1) / 2;
        let total: f64 = (0..=top)
            .map(|r| density_exact_r(k, r, PRIME_LIMIT).unwrap().value)
            .sum();
        ok &= (total - 1.0).abs() <= 1e-8;
        detail.push_str(&format!("k={k}: sum - 1 = {:.3e}; ", total - 1.0));
    }
    report("6 partition of unity", ok, &detail);
}

/// Tail-sum identity C'_{k,r} = sum_{t>=r} C_{k,t} and the complement
/// identity C'_{k,1} = 1 - C_{k,0}, within 1e-8, for k = 3 and 4.
#[test]
fn criterion_07_tail_sum_and_complement() {
    let mut ok = true;
    for k in [3usize, 4] {
        let top = k * (k - 1) / 2;
        let exact: Vec<f64> = (0..=top)
            .map(|r| density_exact_r(k, r, PRIME_LIMIT).unwrap().value)
            .collect();
        for r in 1..=top {
            let atleast = density_at_least_r(k, r, PRIME_LIMIT).unwrap().value;
            let tail: f64 = exact[r..].iter().sum();
            ok &= (atleast - tail).abs() <= 1e-8;
            if r == 1 {
                ok &= (atleast - (1.0 - exact[0])).abs() <= 1e-8;
            }
        }
    }
    report(
        "7 tail-sum and complement identities",
        ok,
        "k = 3, 4, all r, 1e-8",
    );
}

/// The signed edge-subset counting oracle equals direct pair counting.
#[test]
fn criterion_08_counting_oracle() {
    let mut ok = true;
    for r in 0..=3usize {
        let a = count_beta_via_inclusion_exclusion(3, r, PairMode::ExactR, 30).unwrap();
        let b = count_beta_exact(3, r, PairMode::ExactR, 30).unwrap();
        ok &= a.count == b.count;
        if r >= 1 {
            let a = count_beta_via_inclusion_exclusion(3, r, PairMode::AtLeastR, 30).unwrap();
            let b = count_beta_exact(3, r, PairMode::AtLeastR, 30).unwrap();
            ok &= a.count == b.count;
        }
    }
    for r in 0..=2usize {
        let a = count_beta_via_inclusion_exclusion(4, r, PairMode::ExactR, 15).unwrap();
        let b = count_beta_exact(4, r, PairMode::ExactR, 15).unwrap();
        ok &= a.count == b.count;
        if r >= 1 {
            let a = count_beta_via_inclusion_exclusion(4, r, PairMode::AtLeastR, 15).unwrap();
            let b = count_beta_exact(4, r, PairMode::AtLeastR, 15).unwrap();
            ok &= a.count == b.count;
        }
    }
    report(
        "8 inclusion-exclusion counting oracle",
        ok,
        "k=3 x=30 all r; k=4 x=15 r<=2",
    );
}

/// Seeded Monte Carlo estimates bracket four computed densities within
/// their 4-standard-error intervals.
#[test]
fn criterion_09_monte_carlo_bracketing() {
    const X: u64 = 1_000_000;
    const SAMPLES: u64 = 1_000_000;
    const SEED: u64 = 1;
    let c4 = named_graph("c4").unwrap();
    let k2 = CoprimalityGraph::complete(2).unwrap();
    let checks: Vec<(&str, Target, f64)> = vec![
        (
            "1/zeta(2)",
            Target::Graph(k2),
            6.0 / (std::f64::consts::PI * std::f64::consts::PI),
        ),
        (
            "A_C4",
            Target::Graph(c4.clone()),
            density_A(&c4, PRIME_LIMIT).unwrap().value,
        ),
        (
            "C_{3,0}",
            Target::Pairs {
                k: 3,
                r: 0,
                mode: PairMode::ExactR,
            },
            density_exact_r(3, 0, PRIME_LIMIT).unwrap().value,
        ),
        (
            "C_{4,0}",
            Target::Pairs {
                k: 4,
                r: 0,
                mode: PairMode::ExactR,
            },
            density_exact_r(4, 0, PRIME_LIMIT).unwrap().value,
        ),
    ];
    let mut ok = true;
    let mut detail = String::new();
    for (name, target, density) in &checks {
        let mc = monte_carlo(target, X, SAMPLES, SEED).unwrap();
        let ci = mc.ci_halfwidth.unwrap();
        let inside = (mc.estimate - density).abs() <= ci;
        ok &= inside;
        detail.push_str(&format!(
            "{name}: |est - density| = {:.3e}, ci = {:.3e}; ",
            (mc.estimate - density).abs(),
            ci
        ));
    }
    report("9 Monte Carlo bracketing", ok, &detail);
}

/// The exact-count remainder against 1/zeta(2) strictly decreases over
/// x in {100, 200, 400}.
#[test]
fn criterion_10_convergence_trend() {
    let k2 = CoprimalityGraph::complete(2).unwrap();
    let exact = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    let diffs: Vec<f64> = [100u64, 200, 400]
        .iter()
        .map(|&x| (count_delta_exact(&k2, x).unwrap().estimate - exact).abs())
        .collect();
    let ok = diffs[0] > diffs[1] && diffs[1] > diffs[2];
    report(
        "10 convergence trend",
        ok,
        &format!(
            "remainders {:.3e} > {:.3e} > {:.3e}",
            diffs[0], diffs[1], diffs[2]
        ),
    );
}
