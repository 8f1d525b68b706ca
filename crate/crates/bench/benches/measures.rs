use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gaussdisturb_bench::{fixtures, generic};
use gaussdisturb_core::{
    gaussian_classical_mi, gaussian_discord, joint_photon_distribution, measure_report, mid,
    quantum_mutual_information, DiscordDirection, Sampler, SamplerConfig,
};

fn bench_gaussian(c: &mut Criterion) {
    let mut g = c.benchmark_group("gaussian_classical_mi");
    for (name, sf) in fixtures().into_iter().chain([("generic", generic())]) {
        g.bench_with_input(BenchmarkId::from_parameter(name), &sf, |b, sf| {
            b.iter(|| gaussian_classical_mi(black_box(sf)).unwrap())
        });
    }
    g.finish();

    let sf = generic();
    c.bench_function("gaussian_discord/generic", |b| {
        b.iter(|| gaussian_discord(black_box(&sf), DiscordDirection::Left).unwrap())
    });
    c.bench_function("quantum_mutual_information/generic", |b| {
        b.iter(|| quantum_mutual_information(black_box(&sf)).unwrap())
    });
}

fn bench_fock(c: &mut Criterion) {
    let mut g = c.benchmark_group("mid");
    g.sample_size(20);
    for (name, sf) in fixtures() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &sf, |b, sf| {
            b.iter(|| mid(black_box(sf), 1e-10).unwrap())
        });
    }
    g.finish();

    let sf = generic();
    c.bench_function("joint_photon_distribution/generic", |b| {
        b.iter(|| joint_photon_distribution(black_box(&sf), 1e-10).unwrap())
    });
}

fn bench_report(c: &mut Criterion) {
    let states = Sampler::new(SamplerConfig::default()).unwrap().take(16).unwrap();
    let mut g = c.benchmark_group("measure_report");
    g.sample_size(10);
    g.bench_function("sampled-16", |b| {
        b.iter(|| {
            for sf in &states {
                black_box(measure_report(sf).unwrap());
            }
        })
    });
    g.finish();
}

criterion_group!(benches, bench_gaussian, bench_fock, bench_report);
criterion_main!(benches);
