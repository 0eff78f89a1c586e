//! Solver benchmarks: the exact search across sizes, the bijective search,
//! the orbit-quotient distance on either side of its parallel threshold, and
//! the raw enumeration baseline the exact search replaces.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ghlab::oracle::full_enumeration;
use ghlab::{
    gh_bijective, gh_exact, quotient_distance, sample_space, DistVector, FiniteMetricSpace,
    DEFAULT_DIST_RANGE,
};

fn pair(seed: u64, n: usize) -> (FiniteMetricSpace, FiniteMetricSpace) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (
        sample_space(&mut rng, n, DEFAULT_DIST_RANGE).unwrap(),
        sample_space(&mut rng, n, DEFAULT_DIST_RANGE).unwrap(),
    )
}

fn bench_gh_exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("gh_exact");
    for n in [4usize, 5, 6, 7] {
        let (x, y) = pair(11, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| gh_exact(black_box(&x), black_box(&y)))
        });
    }
    group.finish();
}

fn bench_gh_bijective(c: &mut Criterion) {
    let mut group = c.benchmark_group("gh_bijective");
    for n in [6usize, 7, 8] {
        let (x, y) = pair(13, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| gh_bijective(black_box(&x), black_box(&y)).unwrap())
        });
    }
    group.finish();
}

/// The quotient distance switches to a parallel sweep at seven points;
/// benchmarking six against seven shows the seam.
fn bench_quotient_distance(c: &mut Criterion) {
    let mut group = c.benchmark_group("quotient_distance");
    for n in [6usize, 7] {
        let (x, y) = pair(17, n);
        let (a, b_vec) = (DistVector::from_space(&x), DistVector::from_space(&y));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| quotient_distance(black_box(&a), black_box(&b_vec)).unwrap())
        });
    }
    group.finish();
}

/// Raw correspondence enumeration on the sizes where it is still feasible —
/// the baseline the branch-and-bound search is measured against.
fn bench_full_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("full_enumeration");
    for n in [3usize, 4] {
        let (x, y) = pair(19, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| full_enumeration(black_box(&x), black_box(&y)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_gh_exact,
    bench_gh_bijective,
    bench_quotient_distance,
    bench_full_enumeration
);
criterion_main!(benches);
