use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use bdmbt_bench::{demo_formula, random_connected};
use bdmbt_core::{
    broadcast_time_exact, brute_force_broadcast_time, build_a_tree, build_reduction,
    canonical_a_schedule, greedy_schedule, simulate, tree_broadcast_time, SolverConfig,
};

fn bench_verifier(c: &mut Criterion) {
    let at = build_a_tree(12).expect("n = 12 is valid");
    let schedule = canonical_a_schedule(12).expect("n = 12 is valid");
    c.bench_function("simulate/a_tree_12", |b| {
        b.iter(|| simulate(black_box(&at.graph), black_box(&schedule)))
    });
}

fn bench_exact_solver(c: &mut Criterion) {
    let config = SolverConfig::default();
    for n in [3usize, 4, 5] {
        let at = build_a_tree(n).expect("small n is valid");
        c.bench_function(&format!("exact/a_tree_{n}"), |b| {
            b.iter(|| broadcast_time_exact(black_box(&at.graph), at.root, &config))
        });
    }
    let g = random_connected(12, 6, 7);
    c.bench_function("exact/random_12", |b| {
        b.iter(|| broadcast_time_exact(black_box(&g), 0, &config))
    });
}

fn bench_oracles(c: &mut Criterion) {
    let g = random_connected(10, 5, 3);
    c.bench_function("brute_force/random_10", |b| {
        b.iter(|| brute_force_broadcast_time(black_box(&g), 0))
    });
    let at = build_a_tree(12).expect("n = 12 is valid");
    c.bench_function("tree_oracle/a_tree_12", |b| {
        b.iter(|| tree_broadcast_time(black_box(&at.graph), at.root))
    });
}

fn bench_heuristic(c: &mut Criterion) {
    let at = build_a_tree(8).expect("n = 8 is valid");
    c.bench_function("greedy/a_tree_8", |b| {
        b.iter(|| greedy_schedule(black_box(&at.graph), at.root))
    });
}

fn bench_reduction(c: &mut Criterion) {
    let cnf = demo_formula();
    c.bench_function("reduce/n3_m3", |b| b.iter(|| build_reduction(black_box(&cnf))));
}

criterion_group!(
    benches,
    bench_verifier,
    bench_exact_solver,
    bench_oracles,
    bench_heuristic,
    bench_reduction
);
criterion_main!(benches);
