use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use henselift::check::{self, CorpusOutcome, Execution};
use henselift::{lift_steps, new_system, LiftOptions, ModeRequest, MonicPoly, PadicContext};

type Corpus = fn(u64, usize, Execution) -> CorpusOutcome;

fn corpora(c: &mut Criterion) {
    let suites: [(&str, Corpus, usize); 5] = [
        ("resultant-product", check::resultant_product_corpus, 200),
        ("perturbation", check::perturbation_corpus, 200),
        ("lift-contract", check::lift_contract_corpus, 100),
        ("uniqueness", check::uniqueness_corpus, 50),
        ("smith", check::smith_corpus, 200),
    ];
    for (name, corpus, cases) in suites {
        let mut group = c.benchmark_group(name);
        group.sample_size(10).measurement_time(Duration::from_secs(5));
        for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(label, cases), &cases, |b, &n| {
                b.iter(|| assert!(corpus(1, n, exec).ok()))
            });
        }
        group.finish();
    }
}

fn lift(c: &mut Criterion) {
    let ctx = PadicContext::new(2).unwrap();
    let f = MonicPoly::from_lower([8, -2, 1]);
    let start = vec![
        MonicPoly::from_lower([0]),
        MonicPoly::from_lower([2]),
        MonicPoly::from_lower([7]),
    ];
    let sys = new_system(&ctx, f, start, 3, ModeRequest::Auto).unwrap();
    let mut group = c.benchmark_group("lift-cubic");
    group.sample_size(10);
    for steps in [4usize, 8, 12] {
        group.bench_with_input(BenchmarkId::from_parameter(steps), &steps, |b, &n| {
            b.iter(|| lift_steps(&sys, n, &LiftOptions::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, corpora, lift);
criterion_main!(benches);
