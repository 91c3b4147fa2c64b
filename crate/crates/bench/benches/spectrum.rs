use criterion::{black_box, criterion_group, criterion_main, Criterion};
use inhom_core::expansion::{gamma_value, m_star, TSequence};
use inhom_core::{make_alpha, spectrum_catalog, ClassId, Family};
use inhom_core::oracle::{brute_force_min_with, OracleMode};
use inhom_core::spectrum::class_tsequence;

fn catalogue(c: &mut Criterion) {
    let al = make_alpha(8, 12).unwrap();
    c.bench_function("catalog_8_12_k6", |b| b.iter(|| spectrum_catalog(black_box(&al), 6).unwrap()));
    let al = make_alpha(2, 9).unwrap();
    c.bench_function("catalog_2_9_k6", |b| b.iter(|| spectrum_catalog(black_box(&al), 6).unwrap()));
}

fn evaluator(c: &mut Criterion) {
    let al = make_alpha(6, 10).unwrap();
    let ts = class_tsequence(&ClassId::member(Family::KI(7), 4), &al).unwrap();
    c.bench_function("m_star_6_10_k4", |b| b.iter(|| m_star(black_box(&ts), &al)));
}

fn oracle(c: &mut Criterion) {
    let al = make_alpha(4, 7).unwrap();
    let g = gamma_value(&TSequence::periodic(vec![-2, 1]).unwrap(), &al);
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("hybrid_1e5", |b| b.iter(|| brute_force_min_with(&al, &g, 1, 100_000, OracleMode::Hybrid).unwrap()));
    group.bench_function("exact_1e3", |b| b.iter(|| brute_force_min_with(&al, &g, 1, 1_000, OracleMode::Exact).unwrap()));
    group.finish();
}

criterion_group!(benches, catalogue, evaluator, oracle);
criterion_main!(benches);
