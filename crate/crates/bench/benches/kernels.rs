use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use isodiam_bench::{right_angle, sample_ngon, sample_polygon, sample_profile};
use isodiam_core::closed_form::part_volumes;
use isodiam_core::oracles::{hausdorff, hausdorff_to_disk, monte_carlo_volume, revolution_diameter, Aabb3};
use isodiam_core::search::{optimize_profile, FeasibleSpec};
use isodiam_core::symmetrization::steiner_symmetrize;
use isodiam_core::Direction2;

fn closed_form(c: &mut Criterion) {
    c.bench_function("part_volumes", |b| b.iter(|| part_volumes(black_box(right_angle()))));
}

fn symmetrize(c: &mut Criterion) {
    let mut g = c.benchmark_group("steiner_symmetrize");
    for n in [16, 256, 4096] {
        let p = sample_ngon(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| steiner_symmetrize(p, Direction2::new(0.7)))
        });
    }
    g.finish();
}

fn distances(c: &mut Criterion) {
    let (p, q) = (sample_polygon(200), sample_polygon(50));
    c.bench_function("hausdorff", |b| b.iter(|| hausdorff(black_box(&p), black_box(&q))));
    c.bench_function("hausdorff_to_disk", |b| b.iter(|| hausdorff_to_disk(black_box(&p), 0.5)));
    let prof = sample_profile(1024);
    c.bench_function("revolution_diameter/1024", |b| b.iter(|| revolution_diameter(black_box(&prof))));
}

fn monte_carlo(c: &mut Criterion) {
    let d = isodiam_core::closed_form::delta_params(right_angle()).unwrap();
    let mut g = c.benchmark_group("monte_carlo");
    g.sample_size(10);
    g.bench_function("delta/1e6", |b| {
        b.iter(|| monte_carlo_volume(|p| d.contains(p), Aabb3::for_delta(&d), 1_000_000, 1))
    });
    g.finish();
}

fn optimizer(c: &mut Criterion) {
    let spec = FeasibleSpec::full_cone(right_angle(), 32).unwrap();
    let mut g = c.benchmark_group("optimize_profile");
    g.sample_size(10);
    g.bench_function("32 knots", |b| b.iter(|| optimize_profile(&spec, 20_000, 1)));
    g.finish();
}

criterion_group!(benches, closed_form, symmetrize, distances, monte_carlo, optimizer);
criterion_main!(benches);
