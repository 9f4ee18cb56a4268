use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use dmpass_bench::{desk, desk_functional, mode};
use dmpass_core::functional::{find_ray_geometry, phi_eval, phi_grad};
use dmpass_core::minimax::SolverBudgets;
use dmpass_core::oracle::{newton_refine, NewtonOptions};
use dmpass_core::{b_spectrum, mountain_pass_solve, PeriodicSequence, SearchSpace, SolverOptions};

fn spectrum(c: &mut Criterion) {
    c.bench_function("b_spectrum/12", |b| b.iter(|| b_spectrum(black_box(12)).unwrap()));
}

fn phi_and_grad(c: &mut Criterion) {
    let f = desk_functional();
    let u = PeriodicSequence::new(vec![0.3, -1.2, 0.8, 2.0, -0.4, 1.1]).unwrap();
    c.bench_function("phi_eval/6", |b| b.iter(|| phi_eval(&f, black_box(&u))));
    c.bench_function("phi_grad/6", |b| b.iter(|| phi_grad(&f, black_box(&u))));
}

fn solve(c: &mut Criterion) {
    let f = desk_functional();
    let g = find_ray_geometry(&f, &mode(), 0.3, 3.0).unwrap();
    let opts = SolverOptions {
        budgets: SolverBudgets { ensemble: 2, ..Default::default() },
        search_space: SearchSpace::Symmetric,
        ..Default::default()
    };
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    group.bench_function("desk_symmetric", |b| b.iter(|| mountain_pass_solve(&f, &g, 0.01, &opts, 1).unwrap()));
    group.finish();
}

fn newton(c: &mut Criterion) {
    let p = desk();
    let u0 = mode();
    c.bench_function("newton_refine/mode", |b| b.iter(|| newton_refine(black_box(&u0), &p, &NewtonOptions::default()).unwrap()));
}

criterion_group!(benches, spectrum, phi_and_grad, solve, newton);
criterion_main!(benches);
