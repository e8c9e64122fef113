use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fqhyper::verify::{run_verify, Congruence, RecordFilter, Sampling, VerifyConfig};
use fqhyper::Exec;

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_sweep");
    group.sample_size(10);
    let mut config = VerifyConfig::new(5, 100, Congruence::Both, Sampling::Exhaustive);
    config.records = RecordFilter::None;
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        group.bench_function(BenchmarkId::new("exhaustive_q_le_100", name), |b| {
            b.iter(|| run_verify(&config, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
