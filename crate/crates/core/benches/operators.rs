use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use kshuffle::exec::set_parallel;
use kshuffle::harness::{verify, Relation, Session};
use kshuffle::kaction::{op_matrix, ActionOptions, Method, OpSpec};
use kshuffle::shuffle::Sign;

fn matrices(c: &mut Criterion) {
    let mut g = c.benchmark_group("op_matrix P(2,1) r=2 d=3");
    g.sample_size(10);
    for (label, par) in [("sequential", false), ("parallel", true)] {
        for method in [Method::Syt, Method::Residue] {
            let opts = ActionOptions { method, ..ActionOptions::default() };
            g.bench_with_input(BenchmarkId::new(label, format!("{method:?}")), &opts, |b, opts| {
                set_parallel(par);
                b.iter(|| op_matrix(black_box(&OpSpec::P { k: 2, d: 1 }), Sign::Plus, 2, 3, opts).unwrap())
            });
        }
    }
    set_parallel(true);
    g.finish();
}

fn relations(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    let s = Session {
        r: 2,
        max_d: 2,
        max_k: 2,
        ..Session::default()
    };
    for rel in [Relation::R3, Relation::R4] {
        for (label, par) in [("sequential", false), ("parallel", true)] {
            g.bench_function(BenchmarkId::new(label, rel.id()), |b| {
                set_parallel(par);
                b.iter(|| verify(rel, black_box(&s)).unwrap())
            });
        }
    }
    set_parallel(true);
    g.finish();
}

criterion_group!(benches, matrices, relations);
criterion_main!(benches);
