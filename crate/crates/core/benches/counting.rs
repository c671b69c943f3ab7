use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use matroid_forge::counting::{count_square_invertible_naive, count_square_invertible_with};
use matroid_forge::decomposition::decompose_k3;
use matroid_forge::par::Execution;
use matroid_forge::regular::sample_regular_matrix;
use matroid_forge::IntMatrix;

fn witness(r: usize, b_bar: u128) -> IntMatrix {
    sample_regular_matrix(&decompose_k3(r, b_bar).unwrap().to_partition(), 3, 0).unwrap()
}

fn modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("count");
    for (r, b_bar) in [(20, 40), (60, 900), (120, 5000)] {
        let m = witness(r, b_bar);
        for (name, exec) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            group.bench_with_input(BenchmarkId::new(name, r), &m, |b, m| {
                b.iter(|| count_square_invertible_with(m, exec))
            });
        }
    }
    group.finish();
}

fn kernel_vs_naive(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernel_vs_naive");
    let m = witness(12, 30);
    group.bench_function("kernel", |b| {
        b.iter(|| count_square_invertible_with(&m, Execution::Sequential))
    });
    group.bench_function("naive", |b| b.iter(|| count_square_invertible_naive(&m)));
    group.finish();
}

criterion_group!(
    name = benches;
    config = Criterion::default().sample_size(10).measurement_time(Duration::from_secs(5));
    targets = modes, kernel_vs_naive
);
criterion_main!(benches);
