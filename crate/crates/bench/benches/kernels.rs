use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use skewlab_bench::golden_system;
use skewlab_core::correlate::{davenport_sum, mobius_orbit_average};
use skewlab_core::{mobius_sieve, Observable, Phase, TorusPoint};

fn sieve(c: &mut Criterion) {
    let mut g = c.benchmark_group("mobius_sieve");
    g.sample_size(10);
    for n in [1_000_000u64, 10_000_000] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| mobius_sieve(black_box(n)).unwrap()));
    }
    g.finish();
}

fn cocycle(c: &mut Criterion) {
    let t = golden_system(200);
    let x = Phase::from_f64(0.3);
    let mut g = c.benchmark_group("cocycle");
    g.bench_function("fourier_n1e6", |b| b.iter(|| t.cocycle_fourier(black_box(1_000_000), x).unwrap()));
    g.bench_function("direct_n1e4", |b| b.iter(|| t.cocycle_direct(black_box(10_000), x)));
    g.finish();
}

fn correlations(c: &mut Criterion) {
    let mu = mobius_sieve(1_000_000).unwrap();
    let t = golden_system(50);
    let beta = t.alpha().phase;
    let p0 = TorusPoint::new(0.1, 0.2);
    let mut g = c.benchmark_group("correlate");
    g.sample_size(10);
    g.bench_function("davenport_n1e6", |b| b.iter(|| davenport_sum(black_box(beta), 1_000_000, &mu).unwrap()));
    g.bench_function("orbit_average_n1e6", |b| {
        b.iter(|| mobius_orbit_average(&t, Observable::new(1, 1), &p0, &[1_000_000], &mu).unwrap())
    });
    g.finish();
}

criterion_group!(benches, sieve, cocycle, correlations);
criterion_main!(benches);
