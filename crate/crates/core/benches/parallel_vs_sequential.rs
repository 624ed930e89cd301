use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qbound::analysis::{self, CwsCode, DenseLimits};
use qbound::bounds::{decide_m, BoundQuery, Method};
use qbound::codefile::read_code_file;
use qbound::par::Execution;
use qbound::pauli::{triple_statistics_with, PauliSet};
use std::hint::black_box;
use std::path::PathBuf;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn code_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/codes").join(name)
}

fn cws(name: &str) -> CwsCode {
    read_code_file(code_path(name)).unwrap().cws().unwrap().clone()
}

fn triple_stats(c: &mut Criterion) {
    let code = cws("ring562.code");
    let si = code.isotropic_subgroup().unwrap();
    let t1 = PauliSet::from_group(&si).unwrap();
    let t2 = PauliSet::coset_set(&code.word_set().unwrap(), &si).unwrap();
    let mut g = c.benchmark_group("triple_statistics");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| triple_statistics_with(black_box(&t1), black_box(&t2), exec).unwrap()));
    }
    g.finish();
}

fn pauli_scan(c: &mut Criterion) {
    let dense = read_code_file(code_path("dicke723.code")).unwrap().dense().unwrap();
    let mut g = c.benchmark_group("gs_scan_7_qubits");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| analysis::gs_report_with(black_box(&dense), DenseLimits::default(), exec).unwrap()));
    }
    g.finish();
}

fn m_sweep_step(c: &mut Criterion) {
    let mut g = c.benchmark_group("decide_m_sdp_4_2_4");
    g.sample_size(10);
    for (name, exec) in MODES {
        let mut q = BoundQuery::new(4, 2, 4, Method::Sdp).unwrap();
        q.exec = exec;
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| decide_m(black_box(&q), 3).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, triple_stats, pauli_scan, m_sweep_step);
criterion_main!(benches);
