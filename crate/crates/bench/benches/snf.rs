use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use novflow_bench::random_laurent_matrix;
use novflow_core::laurent::{module_decompose, smith_normal_form};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bench_snf(c: &mut Criterion) {
    let mut group = c.benchmark_group("snf");
    for size in [2usize, 3, 4] {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let matrices: Vec<_> = (0..8)
            .map(|_| random_laurent_matrix(&mut rng, size, size, 3))
            .collect();
        group.bench_with_input(BenchmarkId::new("square", size), &matrices, |b, ms| {
            b.iter(|| {
                for m in ms {
                    black_box(smith_normal_form(black_box(m)));
                }
            })
        });
    }
    group.finish();
}

fn bench_decompose(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let m = random_laurent_matrix(&mut rng, 4, 4, 3);
    c.bench_function("module_decompose_4x4", |b| {
        b.iter(|| black_box(module_decompose(black_box(&m))))
    });
}

criterion_group!(benches, bench_snf, bench_decompose);
criterion_main!(benches);
