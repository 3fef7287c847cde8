use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fluxforge_core::field::{surface_map, GridSpec, ModelField, Quantity, SpiralVortexParams};
use fluxforge_core::sources::presets::{build_ring_twister, build_single_cube, RingParams};
use fluxforge_core::streamline::trace;
use fluxforge_core::{Aabb, IntegratorConfig, Vec3, VectorField};

fn field_eval(c: &mut Criterion) {
    let ring = build_ring_twister(&RingParams::default()).unwrap();
    let cube = build_single_cube(1e-2, 1.32, 9).unwrap();
    let p = Vec3::new(0.041, 0.013, 0.012);
    c.bench_function("ring_res5_point", |b| b.iter(|| ring.field(black_box(&p)).unwrap()));
    c.bench_function("cube_res9_point", |b| b.iter(|| cube.field(black_box(&p)).unwrap()));
}

fn map(c: &mut Criterion) {
    let ring = build_ring_twister(&RingParams::default()).unwrap();
    let spec = GridSpec::horizontal(0.0, 0.0, 0.01, 0.055, 64, 64).unwrap();
    c.bench_function("ring_surface_map_64", |b| {
        b.iter(|| surface_map(&ring, black_box(&spec), Quantity::Magnitude).unwrap())
    });
}

fn streamline(c: &mut Criterion) {
    let spiral = ModelField::SpiralVortex(SpiralVortexParams {
        pitch: 0.2,
        core_radius: 1e-3,
        strength: 0.1,
        pole_separation: 0.0,
    });
    let cfg = IntegratorConfig { step: 5e-5, ..IntegratorConfig::new(Aabb::cube(Vec3::zeros(), 0.05).unwrap()) };
    let seed = Vec3::new(5e-3, 0.0, 0.0);
    c.bench_function("spiral_trace", |b| b.iter(|| trace(&spiral, black_box(&seed), &cfg).unwrap()));

    let cube = build_single_cube(1e-2, 1.32, 5).unwrap();
    let cfg = IntegratorConfig::new(Aabb::cube(Vec3::zeros(), 0.05).unwrap());
    let seed = Vec3::new(0.0, 0.0, 0.01);
    c.bench_function("cube_trace", |b| b.iter(|| trace(&cube, black_box(&seed), &cfg).unwrap()));
}

criterion_group!(benches, field_eval, map, streamline);
criterion_main!(benches);
