//! Compares the parallel closure engine against the sequential fallback
//! on the enumeration workloads: the Suzuki group closure, the unipotent
//! fixed-point filter, and the batch fixed-point verification.

use criterion::{criterion_group, criterion_main, Criterion};

use twistkit::rootsystem::SystemType;
use twistkit::suzree::{
    twisted_group, twisted_unipotent, verify_all_fixed, ClosureOptions, TwistedGroupDescriptor,
};
use twistkit::twistmix::TwistedRing;

fn suzuki(h: usize) -> TwistedGroupDescriptor {
    TwistedGroupDescriptor::new(SystemType::B(2), TwistedRing::f_sqrt_q(2, h).unwrap()).unwrap()
}

fn ree3() -> TwistedGroupDescriptor {
    TwistedGroupDescriptor::new(SystemType::G2, TwistedRing::f_sqrt_p(3).unwrap()).unwrap()
}

fn opts(parallel: bool) -> ClosureOptions {
    ClosureOptions {
        parallel,
        ..ClosureOptions::default()
    }
}

fn bench_closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("closure");
    group.sample_size(10);
    for parallel in [false, true] {
        let label = if parallel { "parallel" } else { "serial" };
        group.bench_function(format!("2B2(2) {label}"), |b| {
            let desc = suzuki(1);
            b.iter(|| twisted_group(&desc, &opts(parallel)).unwrap().1.order)
        });
        group.bench_function(format!("2G2(3) {label}"), |b| {
            let desc = ree3();
            b.iter(|| twisted_group(&desc, &opts(parallel)).unwrap().1.order)
        });
    }
    group.finish();
}

fn bench_unipotent_filter(c: &mut Criterion) {
    let mut group = c.benchmark_group("unipotent-filter");
    group.sample_size(10);
    for parallel in [false, true] {
        let label = if parallel { "parallel" } else { "serial" };
        group.bench_function(format!("2B2(8) {label}"), |b| {
            let desc = suzuki(3);
            b.iter(|| twisted_unipotent(&desc, &opts(parallel)).unwrap().len())
        });
    }
    group.finish();
}

fn bench_verify_fixed(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify-fixed-points");
    group.sample_size(10);
    let desc = ree3();
    let (set, _) = twisted_group(&desc, &opts(true)).unwrap();
    for parallel in [false, true] {
        let label = if parallel { "parallel" } else { "serial" };
        group.bench_function(format!("2G2(3) {label}"), |b| {
            b.iter(|| verify_all_fixed(&desc, &set, parallel).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_closure, bench_unipotent_filter, bench_verify_fixed);
criterion_main!(benches);
