//! Sequential against rayon execution for the two hot loops: Berezin
//! matrix assembly on the sphere and a Bose-Hubbard limit sweep.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ssblab::experiments::{run_limit_sweep, SweepModel, SweepSpec};
use ssblab::models::BhForm;
use ssblab::quantize::{berezin_spin_matrix_with, default_degree, sphere_quadrature};
use ssblab::tensor::Poly3;
use ssblab::Execution;

const POLICIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn berezin(c: &mut Criterion) {
    let n = 200;
    let f = Poly3::z().mul(&Poly3::x()).unwrap();
    let quad = sphere_quadrature(default_degree(n) + 2).unwrap();
    let mut group = c.benchmark_group("berezin_n200");
    for (name, exec) in POLICIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| berezin_spin_matrix_with(n, black_box(&f), &quad, exec).unwrap())
        });
    }
    group.finish();
}

fn bh_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("bose_hubbard_sweep");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        let spec = SweepSpec::new(
            SweepModel::BoseHubbard { form: BhForm::Spin },
            vec![25.0, 50.0, 100.0, 200.0],
            &["x", "z2", "energy"],
        )
        .with_exec(exec);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_limit_sweep(black_box(&spec)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, berezin, bh_sweep);
criterion_main!(benches);
