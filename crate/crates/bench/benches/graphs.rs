//! Graph-side benchmarks: the backtracking search for adjacency-preserving
//! edge permutations and the edge-pair census enumeration.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ghlab::{count_edge_pairs, search_non_induced};

fn bench_search_non_induced(c: &mut Criterion) {
    let mut group = c.benchmark_group("search_non_induced");
    for n in [4usize, 5, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| search_non_induced(black_box(n)).unwrap())
        });
    }
    group.finish();
}

fn bench_count_edge_pairs(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_edge_pairs");
    for n in [8usize, 16, 32] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| count_edge_pairs(black_box(n)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_search_non_induced, bench_count_edge_pairs);
criterion_main!(benches);
