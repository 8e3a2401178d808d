//! Compares the rayon-parallel grid mapper against the sequential fallback
//! on the two dominant workloads: vanishing-factor root-finds (gamma-only,
//! cheap per point) and axis-point quadrature sweeps (expensive per point).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use smoothlab::boundary::{vanish_sigma, RootSettings};
use smoothlab::quad::QuadratureSettings;
use smoothlab::smoothprob::ball_axis_prob;
use smoothlab::sweep::{map_grid, map_grid_seq};

fn vanish_grid() -> Vec<(u32, u32)> {
    let mut grid = Vec::new();
    for d in (3..=100).step_by(7) {
        for c in 2..=6 {
            grid.push((d, c));
        }
    }
    grid
}

fn bench_vanish(c: &mut Criterion) {
    let grid = vanish_grid();
    let rs = RootSettings::default();
    let mut group = c.benchmark_group("vanish_sigma_grid");
    group.bench_with_input(BenchmarkId::new("parallel", grid.len()), &grid, |b, g| {
        b.iter(|| map_grid(g, |&(d, cc)| vanish_sigma(1.0, d, cc, &rs).unwrap()))
    });
    group.bench_with_input(BenchmarkId::new("sequential", grid.len()), &grid, |b, g| {
        b.iter(|| map_grid_seq(g, |&(d, cc)| vanish_sigma(1.0, d, cc, &rs).unwrap()))
    });
    group.finish();
}

fn bench_quadrature(c: &mut Criterion) {
    let q = QuadratureSettings::default();
    let sigmas: Vec<f64> = (1..=48).map(|i| 0.012 * i as f64).collect();
    let mut group = c.benchmark_group("ball_axis_prob_grid");
    group.sample_size(10);
    group.bench_with_input(BenchmarkId::new("parallel", sigmas.len()), &sigmas, |b, g| {
        b.iter(|| map_grid(g, |&s| ball_axis_prob(1.0, 30, s, 0.4, &q).unwrap().get()))
    });
    group.bench_with_input(BenchmarkId::new("sequential", sigmas.len()), &sigmas, |b, g| {
        b.iter(|| map_grid_seq(g, |&s| ball_axis_prob(1.0, 30, s, 0.4, &q).unwrap().get()))
    });
    group.finish();
}

criterion_group!(benches, bench_vanish, bench_quadrature);
criterion_main!(benches);
