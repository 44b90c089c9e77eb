use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use thickcurve::curvature::{curvature_profile, default_window};
use thickcurve::thickness::{self, CriticalOptions};
use thickcurve_bench::{circle, stadium, trefoil};

fn pair_scans(c: &mut Criterion) {
    let mut group = c.benchmark_group("ball_radius");
    for n in [256, 1024] {
        let curve = circle(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &curve, |b, curve| {
            b.iter(|| thickness::rolling_ball_radius(black_box(curve), 0.0))
        });
    }
    group.finish();

    let curve = stadium(1024);
    c.bench_function("curvature_profile/stadium_1024", |b| {
        b.iter(|| curvature_profile(black_box(&curve), default_window(&curve)).unwrap())
    });
    c.bench_function("mdc/stadium_1024", |b| {
        b.iter(|| thickness::mdc(black_box(&curve), &CriticalOptions::default()).unwrap())
    });
}

fn full_report(c: &mut Criterion) {
    let curve = trefoil(512);
    let mut group = c.benchmark_group("thickness_report");
    group.sample_size(10);
    group.bench_function("trefoil_512", |b| b.iter(|| thickness::thickness_report(black_box(&curve)).unwrap()));
    group.finish();
}

criterion_group!(benches, pair_scans, full_report);
criterion_main!(benches);
