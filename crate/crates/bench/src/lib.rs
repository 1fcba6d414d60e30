//! Benchmark bodies, grouped by library module.

use std::hint::black_box;

use agmean::elliptic::{self, DEFAULT_PANEL_BUDGET, DEFAULT_TERM_BUDGET};
use agmean::verify::{self, Profile};
use agmean::{coefficients, means, MeanInput, Modulus};
use criterion::{BenchmarkId, Criterion};

pub fn means(c: &mut Criterion) {
    let mut group = c.benchmark_group("means");
    for (a, b) in [(1.0, 2.0), (1e-3, 1e3)] {
        let input = MeanInput::new(a, b).unwrap();
        let label = format!("{a:e}/{b:e}");
        group.bench_with_input(BenchmarkId::new("agm", &label), &input, |bch, x| {
            bch.iter(|| means::agm_mean(black_box(x)))
        });
        group.bench_with_input(BenchmarkId::new("log", &label), &input, |bch, x| {
            bch.iter(|| means::log_mean(black_box(x)))
        });
        group.bench_with_input(BenchmarkId::new("identric", &label), &input, |bch, x| {
            bch.iter(|| means::identric_mean(black_box(x)))
        });
    }
    let input = MeanInput::new(1.0, 4.0).unwrap();
    for p in [-2.0, 5e-7, 0.5] {
        group.bench_with_input(BenchmarkId::new("gen_log", p), &p, |bch, &p| {
            bch.iter(|| means::gen_log_mean(black_box(p), &input))
        });
    }
    group.finish();
}

pub fn elliptic(c: &mut Criterion) {
    let mut group = c.benchmark_group("elliptic");
    for t in [0.1, 0.5, 0.95] {
        let m = Modulus::new(t).unwrap();
        group.bench_with_input(BenchmarkId::new("series", t), &m, |bch, &m| {
            bch.iter(|| elliptic::k_series(black_box(m), DEFAULT_TERM_BUDGET))
        });
        group.bench_with_input(BenchmarkId::new("agm", t), &m, |bch, &m| {
            bch.iter(|| elliptic::k_agm(black_box(m)))
        });
        group.bench_with_input(BenchmarkId::new("quadrature", t), &m, |bch, &m| {
            bch.iter(|| elliptic::k_quadrature_modulus(black_box(m), DEFAULT_PANEL_BUDGET))
        });
    }
    let m = Modulus::new(0.999_999).unwrap();
    group.bench_function("quadrature/0.999999", |bch| {
        bch.iter(|| elliptic::k_quadrature_modulus(black_box(m), DEFAULT_PANEL_BUDGET))
    });
    group.finish();
}

pub fn coefficients(c: &mut Criterion) {
    let mut group = c.benchmark_group("coefficients");
    group.sample_size(10);
    for k in [50u32, 200, 500] {
        group.bench_with_input(BenchmarkId::new("build_table", k), &k, |bch, &k| {
            bch.iter(|| coefficients::build_table(black_box(k)))
        });
        group.bench_with_input(BenchmarkId::new("a_coeff_sum", k), &k, |bch, &k| {
            bch.iter(|| coefficients::a_coeff_sum(black_box(k)))
        });
        group.bench_with_input(BenchmarkId::new("g_sum", k), &k, |bch, &k| {
            bch.iter(|| coefficients::g_sum(black_box(k)))
        });
    }
    group.finish();
}

pub fn verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    group.bench_function("ratio_scan/200", |bch| {
        bch.iter(|| verify::scan_ratio(200, 1e-8, 1.0 - 1e-4))
    });
    group.bench_function("double_inequality/1000", |bch| {
        bch.iter(|| verify::check_double_inequality(1_000, black_box(42)))
    });
    group.bench_function("run_all/quick", |bch| {
        bch.iter(|| verify::run_all(Profile::Quick, black_box(42)))
    });
    group.finish();
}
