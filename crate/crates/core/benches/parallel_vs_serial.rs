//! Compares the rayon-parallel and sequential code paths for the two
//! hot loops: Euler product evaluation over sieved primes and exact
//! tuple counting over a box.
//!
//! Run with `cargo bench` (parallel, the default) and
//! `cargo bench --no-default-features` (sequential) to compare.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use coprime_density::empirical::{count_delta_exact, monte_carlo, Target};
use coprime_density::euler::Evaluator;
use coprime_density::graph::{named_graph, CoprimalityGraph};
use coprime_density::local_factor::{factor_by_independent_sets, pairwise_coprime_factor};

fn bench_euler(c: &mut Criterion) {
    let mut group = c.benchmark_group("euler_product");
    for &limit in &[1_000_000u64, 10_000_000] {
        let ev = Evaluator::new(limit).unwrap();
        let factor = pairwise_coprime_factor(4).unwrap();
        group.bench_with_input(BenchmarkId::new("zeta_like_k4", limit), &limit, |b, _| {
            b.iter(|| ev.eval(&factor).unwrap())
        });
    }
    group.finish();
}

fn bench_counting(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_count");
    group.sample_size(20);
    let c4 = named_graph("c4").unwrap();
    let restrict = c4.non_isolated();
    let _ = factor_by_independent_sets(&c4, restrict).unwrap();
    for &x in &[200u64, 400] {
        group.bench_with_input(BenchmarkId::new("c4_box", x), &x, |b, &x| {
            b.iter(|| count_delta_exact(&c4, x).unwrap())
        });
    }
    let k2 = CoprimalityGraph::complete(2).unwrap();
    group.bench_function("monte_carlo_k2_1e5", |b| {
        b.iter(|| monte_carlo(&Target::Graph(k2.clone()), 1_000_000, 100_000, 1).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_euler, bench_counting);
criterion_main!(benches);
