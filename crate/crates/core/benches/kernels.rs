use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use diskfn::blaschke::ZeroList;
use diskfn::cauchy::{cauchy_on_circle_with, PathMeasure};
use diskfn::fixtures::{random_point, rng};
use diskfn::matching::distance_matrix;
use diskfn::Exec;
use num_complex::Complex64;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn points(seed: u64, n: usize) -> Vec<Complex64> {
    let mut r = rng(seed);
    (0..n).map(|_| random_point(&mut r, 0.95)).collect()
}

fn cauchy_trace(c: &mut Criterion) {
    let (a, b) = (points(1, 50), points(2, 50));
    let sigma = PathMeasure::from_pairs(&a.into_iter().zip(b).collect::<Vec<_>>()).unwrap();
    let mut g = c.benchmark_group("cauchy_on_circle/50 segments/4096");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bch, &e| {
            bch.iter(|| cauchy_on_circle_with(black_box(&sigma), 4096, e).unwrap())
        });
    }
    g.finish();
}

fn boundary_trace(c: &mut Criterion) {
    let b = ZeroList::from_points(&points(3, 200)).unwrap();
    let mut g = c.benchmark_group("eval_boundary/200 zeros/4096");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bch, &e| {
            bch.iter(|| b.eval_boundary_with(black_box(4096), e).unwrap())
        });
    }
    g.finish();
}

fn matching_distances(c: &mut Criterion) {
    let (a, b) = (points(4, 500), points(5, 500));
    let mut g = c.benchmark_group("distance_matrix/500x500");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bch, &e| {
            bch.iter(|| distance_matrix(black_box(&a), black_box(&b), e))
        });
    }
    g.finish();
}

criterion_group!(benches, cauchy_trace, boundary_trace, matching_distances);
criterion_main!(benches);
