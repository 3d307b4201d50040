use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use prodbase::{classify, factorize, generate_from_type, partitions_of, Tolerances, TypeSpec};
use prodbase_bench::fixture;

fn bench_factorize(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("factorize");
    for n in [2usize, 8, 32, 64] {
        let basis = fixture(&n.to_string(), 1);
        let v = basis.vectors()[0].clone();
        group.bench_with_input(BenchmarkId::from_parameter(n), &v, |b, v| {
            b.iter(|| factorize(black_box(v), &tol).unwrap())
        });
    }
    group.finish();
}

fn bench_classify(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("classify");
    for partition in ["2+1", "3+2+1", "4+4+2+2+1+1", "8+4+2+1+1"] {
        let basis = fixture(partition, 7);
        group.bench_with_input(
            BenchmarkId::from_parameter(partition),
            &basis,
            |b, basis| b.iter(|| classify(black_box(basis), &tol)),
        );
    }
    group.finish();
}

fn bench_generate(c: &mut Criterion) {
    let spec = TypeSpec::new("3+2+1".parse().unwrap(), 3);
    c.bench_function("generate 3+2+1", |b| {
        b.iter(|| generate_from_type(black_box(&spec)).unwrap())
    });
}

fn bench_partitions(c: &mut Criterion) {
    c.bench_function("partitions_of 20", |b| {
        b.iter(|| partitions_of(black_box(20)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_factorize,
    bench_classify,
    bench_generate,
    bench_partitions
);
criterion_main!(benches);
