use criterion::{criterion_group, criterion_main};

criterion_group!(
    benches,
    agmean_bench::means,
    agmean_bench::elliptic,
    agmean_bench::coefficients,
    agmean_bench::verification
);
criterion_main!(benches);
