use std::f64::consts::PI;
use std::hint::black_box;

use classicality::integrate::{Execution, McSpec, McmcSpec, QuadratureSpec};
use classicality::{average_indicator, global_indicator, Evaluation, MetricKind, ModuliPoint};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn matrix_model(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo_qutrit_hs");
    group.sample_size(10);
    let point = ModuliPoint::qutrit(PI / 6.0).unwrap();
    for (name, exec) in MODES {
        let eval =
            Evaluation::MonteCarlo(McSpec::new(100_000, 1).with_workers(8).with_execution(exec));
        group.bench_with_input(BenchmarkId::from_parameter(name), &eval, |b, eval| {
            b.iter(|| global_indicator(MetricKind::Hs, black_box(&point), eval).unwrap())
        });
    }
    group.finish();
}

fn metropolis(c: &mut Criterion) {
    let mut group = c.benchmark_group("mcmc_qubit_bkm");
    group.sample_size(10);
    for (name, exec) in MODES {
        let mc = McSpec::new(50_000, 1).with_workers(8).with_execution(exec);
        let eval = Evaluation::Mcmc(McmcSpec {
            burn_in: 2_000,
            ..McmcSpec::from_mc(mc)
        });
        group.bench_with_input(BenchmarkId::from_parameter(name), &eval, |b, eval| {
            b.iter(|| {
                global_indicator(MetricKind::Bkm, black_box(&ModuliPoint::Qubit), eval).unwrap()
            })
        });
    }
    group.finish();
}

fn quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("quadrature_bures_average");
    group.sample_size(10);
    for (name, exec) in MODES {
        let eval = Evaluation::Quadrature(QuadratureSpec::two_dimensional().with_execution(exec));
        group.bench_with_input(BenchmarkId::from_parameter(name), &eval, |b, eval| {
            b.iter(|| average_indicator(black_box(MetricKind::Bures), eval).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, matrix_model, metropolis, quadrature);
criterion_main!(benches);
