use criterion::{black_box, criterion_group, criterion_main, Criterion};
use madelung_core::observables::thermo_state;
use madelung_core::solver::integrate_radial;
use madelung_core::sweep;
use madelung_core::{bessel, Params, QuadOptions, SolverOptions};

fn bench_radial_solve(c: &mut Criterion) {
    let opts = SolverOptions::default();
    let mut group = c.benchmark_group("integrate_radial");
    for (t, x) in [(1.0, 1.0), (0.02, 1.0), (100.0, 1.0)] {
        let params = Params::new(t, x).unwrap();
        group.bench_function(format!("T={t}_X={x}"), |b| {
            b.iter(|| integrate_radial(black_box(&params), &opts).unwrap())
        });
    }
    group.finish();
}

fn bench_observables(c: &mut Criterion) {
    let params = Params::new(1.0, 1.0).unwrap();
    let solution = integrate_radial(&params, &SolverOptions::default()).unwrap();
    let quad = QuadOptions::default();
    c.bench_function("thermo_state_T1_X1", |b| {
        b.iter(|| thermo_state(black_box(&solution), &quad).unwrap())
    });
}

fn bench_sweep_row(c: &mut Criterion) {
    let solver = SolverOptions::default();
    let quad = QuadOptions::default();
    c.bench_function("sweep_3x2_grid", |b| {
        b.iter(|| {
            sweep::sweep(
                black_box(&[0.5, 1.0, 2.0]),
                black_box(&[0.5, 1.0]),
                &solver,
                &quad,
            )
            .unwrap()
        })
    });
}

fn bench_bessel(c: &mut Criterion) {
    c.bench_function("j0_series_branch", |b| {
        b.iter(|| bessel::j0(black_box(3.7)))
    });
    c.bench_function("j0_recurrence_branch", |b| {
        b.iter(|| bessel::j0(black_box(27.3)))
    });
}

criterion_group!(
    benches,
    bench_radial_solve,
    bench_observables,
    bench_sweep_row,
    bench_bessel
);
criterion_main!(benches);
