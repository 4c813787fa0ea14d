use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use hp_core::delta::{delta_quadrature, DeltaQuery};
use hp_core::eigen::{f_rho_quadrature, EigenParams};
use hp_core::exec::Exec;
use hp_core::quadrature::QuadSpec;
use hp_core::reconstruction::{l2_norm_sweep, log_grid};
use hp_core::Complex64;

const RHO1: Complex64 = Complex64::new(0.5, 14.134_725_141_734_694);

fn policies() -> [(&'static str, Exec); 2] {
    [
        ("sequential", Exec::Sequential),
        ("parallel", Exec::Parallel),
    ]
}

fn l2_sweep(c: &mut Criterion) {
    let p = EigenParams::new(RHO1).unwrap();
    let mut group = c.benchmark_group("l2_sweep");
    group.sample_size(10);
    for (name, exec) in policies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                l2_norm_sweep(black_box(&[2, 4, 8, 16, 32]), &p, 0.1, 10.0, 64, exec).unwrap()
            })
        });
    }
    group.finish();
}

fn delta_grid(c: &mut Criterion) {
    let spec = QuadSpec::default();
    let queries: Vec<DeltaQuery> = [1u32, 2, 5, 10, 20]
        .iter()
        .flat_map(|&l| [0.5, 1.0, 2.0].map(|x| DeltaQuery::new(l, x, RHO1).unwrap()))
        .collect();
    let mut group = c.benchmark_group("delta_quadrature_grid");
    for (name, exec) in policies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                exec.try_map(&queries, |q| delta_quadrature(q, &spec))
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn eigen_quadrature_grid(c: &mut Criterion) {
    let p = EigenParams::new(RHO1).unwrap();
    let grid = log_grid(0.3, 3.0, 16).unwrap();
    let mut group = c.benchmark_group("eigen_quadrature_grid");
    group.sample_size(10);
    for (name, exec) in policies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| exec.try_map(&grid, |&x| f_rho_quadrature(x, &p)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, l2_sweep, delta_grid, eigen_quadrature_grid);
criterion_main!(benches);
