use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use kgdistill::extractor::{extract_subset, ExtractOptions, LocalSource};
use kgdistill::mlpost::{compute_stats, filter_inversion_leakage, split};
use kgdistill::model::Axiom;
use kgdistill::modularizer::{extract_module, initial_signature};
use kgdistill::pipeline::{self, inverse_pairs};
use kgdistill::reasoner::{check_consistency, materialize_schema, ConsistencyOptions, UnsatReport};
use kgdistill::synth::{synthetic_kg, SynthSpec};
use kgdistill_bench::{config, kg, relations};

fn reasoning(c: &mut Criterion) {
    let large = synthetic_kg(&SynthSpec::large()).schema();
    c.bench_function("materialize_schema/large", |b| b.iter(|| materialize_schema(black_box(&large))));

    let g = kg(10_000);
    let schema = g.schema();
    let abox: Vec<Axiom> = g.abox().cloned().collect();
    c.bench_function("check_consistency/10k", |b| {
        b.iter(|| check_consistency(&schema, black_box(&abox), &ConsistencyOptions::default()))
    });
}

fn extraction(c: &mut Criterion) {
    let g = kg(20_000);
    let mut group = c.benchmark_group("extract_subset");
    for k in [1, 5, 20] {
        let options = ExtractOptions {
            k,
            ..ExtractOptions::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(k), &options, |b, o| {
            b.iter(|| extract_subset(&mut LocalSource::new(&g), o, &UnsatReport::default()).unwrap())
        });
    }
    group.finish();

    let large = synthetic_kg(&SynthSpec::large());
    let sig = initial_signature(large.abox());
    c.bench_function("extract_module/large", |b| b.iter(|| extract_module(black_box(&large), &sig)));
}

fn post(c: &mut Criterion) {
    let g = kg(20_000);
    let triples = relations(&g);
    let inverses = inverse_pairs(g.axioms());
    c.bench_function("split+leakage/20k", |b| {
        b.iter_batched(
            || triples.clone(),
            |t| filter_inversion_leakage(&split(t, [0.8, 0.1, 0.1], 42).unwrap(), &inverses),
            BatchSize::LargeInput,
        )
    });
    c.bench_function("compute_stats/20k", |b| b.iter(|| compute_stats(black_box(&g))));
}

fn end_to_end(c: &mut Criterion) {
    let g = kg(5_000);
    let mut group = c.benchmark_group("run");
    group.sample_size(10);
    group.bench_function("5k", |b| {
        b.iter_batched(
            || {
                let dir = tempfile::tempdir().unwrap();
                let cfg = config(dir.path(), &g);
                (dir, cfg)
            },
            |(_dir, cfg)| pipeline::run(&cfg).unwrap(),
            BatchSize::PerIteration,
        )
    });
    group.finish();
}

criterion_group!(benches, reasoning, extraction, post, end_to_end);
criterion_main!(benches);
