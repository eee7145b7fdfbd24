use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use multcong_bench::PROGRESSIONS;
use multcong_core::arith::factorize_u64;
use multcong_core::classifier::search_congruences;
use multcong_core::{certify_congruence, scan_valuation, tau_table, EngineConfig, FnDescriptor};

fn scans(c: &mut Criterion) {
    let mut g = c.benchmark_group("scan_valuation");
    g.sample_size(10);
    for f in [FnDescriptor::sigma(1), FnDescriptor::phi()] {
        for (a, b) in PROGRESSIONS {
            g.bench_with_input(
                BenchmarkId::new(f.name().to_string(), format!("{a}n+{b}")),
                &(a, b),
                |bench, &(a, b)| bench.iter(|| scan_valuation(&f, 2, a, b, 100_000).unwrap()),
            );
        }
    }
    g.finish();
}

fn certificates(c: &mut Criterion) {
    let cfg = EngineConfig::with_horizon(100_000);
    c.bench_function("certify sigma_1 4n+3 mod 4", |b| {
        b.iter(|| certify_congruence(&FnDescriptor::sigma(1), 2, 2, 4, 3, &cfg).unwrap())
    });
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    g.bench_function("sigma_0 mod 4, A <= 40", |b| {
        b.iter(|| search_congruences(&FnDescriptor::sigma(0), 2, 2, 40, &cfg).unwrap())
    });
    g.finish();
}

fn tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("tau_table");
    g.sample_size(10);
    for n in [10_000u64, 40_007] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| tau_table(n).unwrap()));
    }
    g.finish();
}

fn factoring(c: &mut Criterion) {
    c.bench_function("factorize semiprime near 2^62", |b| {
        b.iter(|| factorize_u64(black_box(4_611_686_014_132_420_609)).unwrap())
    });
}

criterion_group!(benches, scans, certificates, tables, factoring);
criterion_main!(benches);
