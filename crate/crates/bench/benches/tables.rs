use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dowling::polynomials::BlockPolynomial;
use dowling::sampler::rng_stream;
use dowling::{
    closed_form_total, count_distinct_negative_roots, count_table, egf_series_total,
    lemma_residuals, ColorParams, Sampler,
};

fn params() -> ColorParams {
    ColorParams::new(2, 2).unwrap()
}

fn bench_count_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_table");
    group.sample_size(10);
    for n in [100usize, 400, 1000] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| count_table(params(), black_box(n)))
        });
    }
    group.finish();
}

fn bench_oracles(c: &mut Criterion) {
    c.bench_function("closed_form_total/50", |b| {
        b.iter(|| closed_form_total(params(), black_box(50)))
    });
    c.bench_function("egf_series_total/25", |b| {
        b.iter(|| egf_series_total(params(), black_box(25)))
    });
}

fn bench_sturm(c: &mut Criterion) {
    let table = count_table(params(), 40);
    let mut group = c.benchmark_group("sturm");
    for n in [10usize, 20, 40] {
        let poly = BlockPolynomial::from_table(&table, n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &poly, |b, poly| {
            b.iter(|| count_distinct_negative_roots(black_box(poly)))
        });
    }
    group.finish();
}

fn bench_sampling(c: &mut Criterion) {
    let sampler = Sampler::new(params(), 200);
    let mut rng = rng_stream(1, 0);
    c.bench_function("sample/n=200", |b| {
        b.iter(|| sampler.sample(black_box(200), &mut rng).unwrap())
    });
}

fn bench_lemma(c: &mut Criterion) {
    c.bench_function("lemma_residuals/1e4", |b| {
        b.iter(|| lemma_residuals(params(), black_box(10_000)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_count_table,
    bench_oracles,
    bench_sturm,
    bench_sampling,
    bench_lemma
);
criterion_main!(benches);
