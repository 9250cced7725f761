//! Sequential against parallel execution on the heavier workloads.

use std::path::PathBuf;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pointed_hopf::cocycle::{cocycle_suite, SplitAlgebras};
use pointed_hopf::datum::load_datum;
use pointed_hopf::hopf::{hopf_axioms_suite, hopf_ideal_suite, normal_form_suite, Presentation};
use pointed_hopf::ncalg::Flavor;
use pointed_hopf::par::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn bench(c: &mut Criterion) {
    let i2 = load_datum(data("i2.toml")).unwrap();
    let i3 = load_datum(data("i3.toml")).unwrap();
    let p3 = Presentation::new(&i3.datum, &i3.gamma, Flavor::Lifted, 24).unwrap();
    let alg = SplitAlgebras::new(&i2.datum, 0).unwrap();

    let mut g = c.benchmark_group("exec");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("hopf-ideal I3", name), &exec, |b, &e| {
            b.iter(|| hopf_ideal_suite(&i3.datum, &i3.gamma, Flavor::Lifted, 24, e).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("normal-form I3", name), &exec, |b, &e| {
            b.iter(|| normal_form_suite(&p3, 7, 100, 8, e))
        });
        g.bench_with_input(BenchmarkId::new("hopf-axioms I3", name), &exec, |b, &e| {
            b.iter(|| hopf_axioms_suite(p3.ctx(), 7, 100, e))
        });
        g.bench_with_input(BenchmarkId::new("cocycle I2", name), &exec, |b, &e| {
            b.iter(|| cocycle_suite(&alg, 7, 50, e))
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
