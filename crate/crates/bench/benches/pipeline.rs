use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use tau2_bench::{model, prepared, SIZES};
use tau2_core::projector_engine::build_projectors;
use tau2_core::transfer_matrix::{build_tau2, functional_product};

fn bench_tau2(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_tau2");
    for (n, l) in SIZES {
        let params = model(n, l);
        group.bench_with_input(BenchmarkId::from_parameter(format!("N{n}_L{l}")), &params, |b, p| {
            b.iter(|| build_tau2(black_box(p)).unwrap())
        });
    }
    group.finish();
}

fn bench_functional(c: &mut Criterion) {
    let mut group = c.benchmark_group("functional_product");
    for (n, l) in SIZES {
        let tau = build_tau2(&model(n, l)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("N{n}_L{l}")), &tau, |b, t| {
            b.iter(|| functional_product(black_box(t), n).unwrap())
        });
    }
    group.finish();
}

fn bench_projectors(c: &mut Criterion) {
    let mut group = c.benchmark_group("projectors");
    for (n, l) in SIZES {
        let p = prepared(n, l);
        group.bench_function(BenchmarkId::from_parameter(format!("N{n}_L{l}")), |b| {
            b.iter(|| build_projectors(black_box(&p.tower), black_box(&p.vs), n).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_tau2, bench_functional, bench_projectors);
criterion_main!(benches);
