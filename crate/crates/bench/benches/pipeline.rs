use criterion::{black_box, criterion_group, criterion_main, Criterion};

use quadric_axes::chasles::chasles_axes;
use quadric_axes::conjugate::axes_oracle;
use quadric_axes_bench::rotated_systems;

fn bench_pipeline(c: &mut Criterion) {
    let systems = rotated_systems(64);
    let mut i = 0usize;
    c.bench_function("chasles_axes_full", |b| {
        b.iter(|| {
            let sys = &systems[i % systems.len()];
            i += 1;
            black_box(chasles_axes(sys).unwrap());
        })
    });
    let mut j = 0usize;
    c.bench_function("axes_oracle_eigen", |b| {
        b.iter(|| {
            let sys = &systems[j % systems.len()];
            j += 1;
            black_box(axes_oracle(sys).unwrap());
        })
    });
}

criterion_group!(benches, bench_pipeline);
criterion_main!(benches);
