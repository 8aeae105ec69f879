use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qwalk_bench::{far_detuned_kick, symmetric_start};
use qwalk_core::apparatus::sample_measurement;
use qwalk_core::open::run_open;
use qwalk_core::pulse::calibrate_kick;
use qwalk_core::{CoinOperator, NoiseModel};

fn pure_walk(c: &mut Criterion) {
    let start = symmetric_start(10_000);
    let coin = CoinOperator::hadamard();
    c.bench_function("evolve_10k_steps", |b| {
        b.iter(|| {
            let mut s = start.clone();
            s.evolve(10_000, &coin).unwrap();
            black_box(s.norm_sq())
        })
    });
}

fn density_walk(c: &mut Criterion) {
    let start = symmetric_start(100);
    let noise = NoiseModel::new(0.1, 0.05, 0.0, 1.0).unwrap();
    let mut group = c.benchmark_group("density");
    group.sample_size(10);
    group.bench_function("run_open_100_steps", |b| {
        b.iter(|| black_box(run_open(&start, 100, &CoinOperator::hadamard(), &noise).unwrap()))
    });
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let mut s = symmetric_start(100);
    s.evolve(100, &CoinOperator::hadamard()).unwrap();
    let d = s.distribution();
    let mut group = c.benchmark_group("sampling");
    group.sample_size(10);
    group.bench_function("sample_1m_trials", |b| b.iter(|| black_box(sample_measurement(&d, 1_000_000, 7).unwrap())));
    group.finish();
}

fn kick(c: &mut Criterion) {
    let cfg = far_detuned_kick();
    let window = 2.0 * std::f64::consts::PI / cfg.effective_rabi();
    c.bench_function("calibrate_kick", |b| b.iter(|| black_box(calibrate_kick(&cfg, window).unwrap())));
}

criterion_group!(benches, pure_walk, density_walk, sampling, kick);
criterion_main!(benches);
