use std::hint::black_box;

use corset_core::catalog;
use corset_core::{
    delta_estimate, qc5_profile, CayleyBall, ConedBall, CuspedBall, DeltaMethod, DeltaMode, MarkedGroup,
    SubgroupSpec, WordMetric,
};
use criterion::{criterion_group, criterion_main, Criterion};

fn balls(c: &mut Criterion) {
    let mut g = c.benchmark_group("cayley_ball");
    for (name, group, r) in [
        ("free2_r8", catalog::f2(), 8),
        ("heisenberg_r10", MarkedGroup::heisenberg(), 10),
        ("mapping_torus_r7", catalog::default_mapping_torus(), 7),
    ] {
        g.bench_function(name, |b| b.iter(|| CayleyBall::build(black_box(&group), r, 10_000_000).unwrap()));
    }
    g.finish();
    let (f2, pa) = catalog::f2_rel_a();
    c.bench_function("cusped_f2_r6_d4", |b| {
        b.iter(|| CuspedBall::build(&f2, &pa, 6, 4, 10_000_000).unwrap())
    });
}

fn delta(c: &mut Criterion) {
    let z2 = CayleyBall::build(&catalog::z2(), 4, 1_000_000).unwrap().graph();
    c.bench_function("delta_z2_r4_exhaustive", |b| {
        b.iter(|| delta_estimate(&z2, DeltaMethod::ThinTriangle, DeltaMode::Exhaustive).unwrap())
    });
    let (f2, pa) = catalog::f2_rel_a();
    let x = CuspedBall::build(&f2, &pa, 5, 4, 10_000_000).unwrap();
    let mode = DeltaMode::Sampled { size: 5000, seed: 1 };
    c.bench_function("delta_cusped_r5_sampled", |b| {
        b.iter(|| delta_estimate(x.graph(), DeltaMethod::ThinTriangle, mode).unwrap())
    });
}

fn qc5(c: &mut Criterion) {
    let (f2, pa) = catalog::f2_rel_a();
    let coned = ConedBall::build(&f2, &pa, 8, 10_000_000).unwrap();
    let h = SubgroupSpec::from_words(&f2, &["a b"]).unwrap();
    let metric = WordMetric::standard(2);
    let mut g = c.benchmark_group("qc5");
    g.sample_size(10);
    g.bench_function("f2_rel_a_ab_n6", |b| b.iter(|| qc5_profile(&coned, &h, &metric, 6).unwrap()));
    g.finish();
}

criterion_group!(benches, balls, delta, qc5);
criterion_main!(benches);
