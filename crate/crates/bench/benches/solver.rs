use std::hint::black_box;

use balpoint::{
    s_jacobian, sample_point_density, solve_balance, Configuration, FlowParameter, LeBrunPoint, LeBrunProfileModel,
    Profile, ProjectivePoint, ProjectiveTorusModel, SolveOptions,
};
use criterion::{criterion_group, criterion_main, Criterion};

fn projective_config(m: u32, n: usize) -> (ProjectiveTorusModel, Configuration<ProjectivePoint>) {
    let model = ProjectiveTorusModel::new(m).unwrap();
    let points = (0..n)
        .map(|j| ProjectivePoint::new((0..=m as usize).map(|k| 1.0 + j as f64 * (k as f64).sqrt()).collect()).unwrap())
        .collect();
    let weights = (0..n).map(|j| 1.0 + 0.1 * j as f64).collect();
    let cfg = Configuration::new(&model, m, points, weights).unwrap();
    (model, cfg)
}

fn bench_solve(c: &mut Criterion) {
    let opts = SolveOptions::default();
    for (m, n) in [(2, 3), (4, 8)] {
        let (model, cfg) = projective_config(m, n);
        c.bench_function(&format!("solve_balance projective m={m} n={n}"), |b| {
            b.iter(|| solve_balance(&model, black_box(&cfg), &opts).unwrap())
        });
    }
    for (name, profile) in [("quadratic", Profile::Quadratic), ("sine", Profile::Sine)] {
        let model = LeBrunProfileModel::new(-1.0, 1.0, profile).unwrap();
        let cfg =
            Configuration::new(&model, 2, vec![LeBrunPoint::new(-0.5), LeBrunPoint::new(0.2)], vec![1.0, 1.0]).unwrap();
        c.bench_function(&format!("solve_balance ruled {name}"), |b| {
            b.iter(|| solve_balance(&model, black_box(&cfg), &opts).unwrap())
        });
    }
}

fn bench_jacobian(c: &mut Criterion) {
    let (model, cfg) = projective_config(4, 8);
    let s = FlowParameter::new(vec![0.3, -0.2, 0.1, 0.0, 0.5]).unwrap();
    c.bench_function("s_jacobian projective m=4 n=8", |b| {
        b.iter(|| s_jacobian(&model, black_box(&cfg), black_box(&s)).unwrap())
    });
}

fn bench_sampling(c: &mut Criterion) {
    let model = ProjectiveTorusModel::new(2).unwrap();
    let opts = SolveOptions::default();
    let mut group = c.benchmark_group("sampling");
    group.sample_size(10);
    group.bench_function("sample_point_density m=2 n=3 x100", |b| {
        b.iter(|| sample_point_density(&model, 2, &[1.0; 3], 100, 42, &opts).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_solve, bench_jacobian, bench_sampling);
criterion_main!(benches);
