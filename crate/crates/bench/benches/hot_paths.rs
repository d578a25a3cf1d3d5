//! Timings for the paths that dominate real workloads: amplitude grids,
//! the two profile-function routes, pole refinement, the flux background
//! sum, and a small completeness reconstruction.

use criterion::{criterion_group, criterion_main, Criterion};
use isq_core::{
    background_amplitude, jost_f, verify_completeness, CouplingSign, IntermediateChannel, OrderNu,
    QuadratureGrid, Ray, SheetPoint,
};
use num_complex::Complex64;
use std::hint::black_box;

fn channel(nu: f64, kappa0: f64) -> IntermediateChannel {
    IntermediateChannel::new(OrderNu::new(nu).unwrap(), CouplingSign::Positive, kappa0).unwrap()
}

fn amplitude_grid(c: &mut Criterion) {
    let ch = channel(0.3, 1.0);
    let ks: Vec<SheetPoint> = (0..256)
        .map(|i| {
            let k = 1e-2 * 1e4f64.powf(i as f64 / 255.0);
            SheetPoint::from_positive_real(k).unwrap()
        })
        .collect();
    c.bench_function("amplitude_real_axis_256", |b| {
        b.iter(|| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &k in &ks {
                acc += ch.s_matrix(black_box(k)).unwrap();
            }
            acc
        })
    });
}

fn profile_function_routes(c: &mut Criterion) {
    let nu = OrderNu::new(0.3).unwrap();
    c.bench_function("profile_series_route", |b| {
        b.iter(|| jost_f(nu, Ray::PositiveReal, black_box(3.0)))
    });
    c.bench_function("profile_asymptotic_route", |b| {
        b.iter(|| jost_f(nu, Ray::PositiveReal, black_box(40.0)))
    });
    c.bench_function("profile_imaginary_ray", |b| {
        b.iter(|| jost_f(nu, Ray::PositiveImaginary, black_box(3.0)))
    });
}

fn pole_refinement(c: &mut Criterion) {
    let ch = channel(0.7, 1.0);
    let seeds: Vec<SheetPoint> = ch
        .pole_ladder(-3, 3)
        .entries
        .iter()
        .map(|e| {
            SheetPoint::new(
                e.location.modulus() * 1.05,
                e.location.argument() + 0.03,
            )
            .unwrap()
        })
        .collect();
    c.bench_function("pole_refine_seven_members", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for &seed in &seeds {
                acc += ch.refine_pole(black_box(seed)).unwrap().modulus();
            }
            acc
        })
    });
}

fn flux_background(c: &mut Criterion) {
    let thetas: Vec<f64> = (1..=64)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / 65.0)
        .collect();
    c.bench_function("flux_background_64_angles", |b| {
        b.iter(|| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &theta in &thetas {
                acc += background_amplitude(black_box(0.7), 1.3, theta).unwrap();
            }
            acc
        })
    });
}

fn completeness_small(c: &mut Criterion) {
    let ch = channel(0.3, 1.0);
    let r_min = QuadratureGrid::singular_head_min(0.3, 1e-10);
    let grid = QuadratureGrid::graded(r_min, 6.0, 4.0);
    let bump = |r: f64| (-(r - 3.0) * (r - 3.0) / 0.5).exp();
    let mut group = c.benchmark_group("spectral");
    group.sample_size(10);
    group.bench_function("completeness_reconstruction_small", |b| {
        b.iter(|| verify_completeness(&ch, bump, &grid, black_box(&[3.0]), true).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    amplitude_grid,
    profile_function_routes,
    pole_refinement,
    flux_background,
    completeness_small
);
criterion_main!(benches);
