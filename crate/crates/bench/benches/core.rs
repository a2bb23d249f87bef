use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use curvotex::bifurcation::{odd_probe, ProbeOptions};
use curvotex::ring::make_ring;
use curvotex::spectral::{hessian_closed_form, hessian_numerical};
use curvotex::vortex::integrate;
use curvotex::{GreensChoice, RingSpec};

fn hessians(c: &mut Criterion) {
    let s = RingSpec::from_x(8, 1.0, 0.3).unwrap();
    c.bench_function("hessian_numerical_n8", |b| {
        b.iter(|| hessian_numerical(black_box(&s), GreensChoice::Background).unwrap())
    });
    c.bench_function("hessian_closed_form_n8", |b| b.iter(|| hessian_closed_form(black_box(&s)).unwrap()));
}

fn probes(c: &mut Criterion) {
    let opts = ProbeOptions::default();
    c.bench_function("odd_probe_n7", |b| b.iter(|| odd_probe(black_box(7), &opts).unwrap()));
}

fn dynamics(c: &mut Criterion) {
    let ring = make_ring(&RingSpec::from_x(6, 1.0, 0.2).unwrap(), GreensChoice::Background).unwrap();
    c.bench_function("integrate_n6_1000_steps", |b| {
        b.iter(|| integrate(black_box(&ring), 10.0, 0.01).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = hessians, probes, dynamics
}
criterion_main!(benches);
