use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;

use nudhy::contagion::{phase_sweep, Method, SisConfig};
use nudhy::exec::Execution;
use nudhy::rng::Rng;
use nudhy::samplers::{run_chain, ChainConfig, Model, Steps};
use nudhy::structmetrics::{hypergraph_reciprocity, ReciprocityConfig};
use nudhy::synth;

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn chains(c: &mut Criterion) {
    let h = synth::ecoli_scale(&mut Rng::seed_from_u64(1));
    let mut group = c.benchmark_group("run_chain");
    group.sample_size(10);
    for model in [Model::Degs, Model::Joint, Model::DegsMh] {
        for (name, execution) in MODES {
            let cfg = ChainConfig {
                model,
                steps: Steps::Fixed(20_000),
                sample_count: 16,
                execution,
                ..ChainConfig::default()
            };
            group.bench_with_input(BenchmarkId::new(model.to_string(), name), &cfg, |b, cfg| {
                b.iter(|| black_box(run_chain(&h, cfg).unwrap()))
            });
        }
    }
    group.finish();
}

fn contagion(c: &mut Criterion) {
    let u = synth::contact_surrogate(&mut Rng::seed_from_u64(2));
    let grid: Vec<f64> = (1..=8).map(|i| 0.0474 * 0.5 * i as f64).collect();
    let cfg = SisConfig { burn_in: 50.0, sample_count: 50, rho0: 0.1, ..SisConfig::default() };
    let mut group = c.benchmark_group("phase_sweep");
    group.sample_size(10);
    for (name, execution) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                black_box(phase_sweep(&u, &grid, &cfg, Method::QuasiStationary, Some(0.0474), execution).unwrap())
            })
        });
    }
    group.finish();
}

fn reciprocity(c: &mut Criterion) {
    let h = synth::random_directed(
        &mut Rng::seed_from_u64(3),
        60,
        200,
        synth::SizeDistribution::Uniform(1, 3),
        synth::SizeDistribution::Uniform(1, 3),
    );
    let cfg = ReciprocityConfig::default();
    let mut group = c.benchmark_group("reciprocity");
    group.sample_size(10);
    for (name, execution) in MODES {
        group.bench_function(name, |b| b.iter(|| black_box(hypergraph_reciprocity(&h, &cfg, execution).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, chains, contagion, reciprocity);
criterion_main!(benches);
