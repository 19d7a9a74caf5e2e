use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use semicubic::arith::{pow10_neg, rat};
use semicubic::region::log_grid;
use semicubic::{Curve, WeightSequence};

fn boundary(c: &mut Criterion) {
    let curve = Curve::builtin();
    let mut group = c.benchmark_group("boundary_h");
    for (label, t) in [("t=1e-3", rat(1, 1000)), ("t=1", rat(1, 1)), ("t=1e3", rat(1000, 1))] {
        for digits in [6u32, 12] {
            let tol = pow10_neg(digits);
            group.bench_with_input(BenchmarkId::new(label, digits), &tol, |b, tol| {
                b.iter(|| curve.boundary_h(black_box(&t), tol).unwrap())
            });
        }
    }
    group.finish();
}

fn classify(c: &mut Criterion) {
    let curve = Curve::builtin();
    let points = [(rat(1, 100), rat(2, 100)), (rat(1, 100), rat(5, 100)), (rat(12, 100), rat(1, 10))];
    c.bench_function("classify", |b| {
        b.iter(|| {
            for (h, k) in &points {
                black_box(curve.classify(h, k).unwrap());
            }
        })
    });
}

fn trace(c: &mut Criterion) {
    let curve = Curve::builtin();
    let tol = pow10_neg(12);
    let mut group = c.benchmark_group("trace");
    group.sample_size(10);
    for n in [16usize, 64] {
        let grid = log_grid(1e-4, 1e4, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &grid, |b, grid| {
            b.iter(|| curve.trace(grid, &tol).unwrap())
        });
    }
    group.finish();
}

fn weights(c: &mut Criterion) {
    c.bench_function("weights/40", |b| {
        let (h, k) = (rat(1, 100), rat(1, 50));
        b.iter(|| WeightSequence::from_hk(black_box(&h), &k).unwrap().first(40))
    });
}

criterion_group!(benches, boundary, classify, trace, weights);
criterion_main!(benches);
