use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rtt_core::{
    alpha_r, alpha_star_r, g0, max_tiling, montgomery_template, second_eigenvalue, Frac, Graph,
    Pattern,
};

fn bench_max_tiling(c: &mut Criterion) {
    let f = Pattern::clique(3);
    let host = g0(30, Frac::new(1, 3)).unwrap();
    c.bench_function("max_tiling/k3_g0_30", |b| {
        b.iter(|| max_tiling(black_box(&host), &f).unwrap())
    });
    let cycle = Graph::cycle(60);
    let p3 = Pattern::path(3);
    c.bench_function("max_tiling/p3_c60", |b| {
        b.iter(|| max_tiling(black_box(&cycle), &p3).unwrap())
    });
}

fn bench_independence(c: &mut Criterion) {
    let host = g0(40, Frac::new(1, 4)).unwrap();
    c.bench_function("alpha_2/g0_40", |b| {
        b.iter(|| alpha_r(black_box(&host), 2).unwrap())
    });
    let small = g0(24, Frac::new(1, 3)).unwrap();
    c.bench_function("alpha_star_2/g0_24", |b| {
        b.iter(|| alpha_star_r(black_box(&small), 2).unwrap())
    });
}

fn bench_absorption(c: &mut Criterion) {
    c.bench_function("montgomery_template/m4", |b| {
        b.iter(|| montgomery_template(black_box(4), Frac::new(1, 2), 0).unwrap())
    });
}

fn bench_spectral(c: &mut Criterion) {
    let cycle = Graph::cycle(100);
    c.bench_function("second_eigenvalue/c100_power", |b| {
        b.iter(|| second_eigenvalue(black_box(&cycle)))
    });
}

criterion_group!(
    benches,
    bench_max_tiling,
    bench_independence,
    bench_absorption,
    bench_spectral
);
criterion_main!(benches);
