//! Sequential vs parallel execution of the batch workloads: closed-subset
//! enumeration, the definitional pretty-good sweep, and prime reports over
//! the preset catalog.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use rootlattice::intlin::primes_up_to;
use rootlattice::primes;
use rootlattice::rootdatum::{preset, preset_catalog};
use rootlattice::subsystems::closed_subsets;
use rootlattice::{Exec, Prime, RootDatum};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn closed_subset_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("closed_subsets");
    group.sample_size(10);
    for name in ["SC(B3)", "SC(A3)", "GL(4)"] {
        let d = preset(name).unwrap();
        for (label, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(label, name), &d, |b, d| {
                b.iter(|| black_box(closed_subsets(d, exec)).len())
            });
        }
    }
    group.finish();
}

fn definitional_pretty_good(c: &mut Criterion) {
    let mut group = c.benchmark_group("pretty_good_bruteforce");
    group.sample_size(10);
    let d = preset("SC(C3)").unwrap();
    let p = Prime::new(2).unwrap();
    for (label, exec) in MODES {
        group.bench_function(label, |b| {
            b.iter(|| primes::pretty_good_bruteforce(black_box(&d), p, 18, exec).unwrap())
        });
    }
    group.finish();
}

fn catalog_reports(c: &mut Criterion) {
    let data: Vec<RootDatum> = preset_catalog(6).iter().map(|n| preset(n).unwrap()).collect();
    let ps = primes_up_to(30);
    let jobs: Vec<(usize, Prime)> = (0..data.len()).flat_map(|i| ps.iter().map(move |&p| (i, p))).collect();
    let mut group = c.benchmark_group("catalog_reports");
    group.sample_size(10);
    for (label, exec) in MODES {
        group.bench_function(label, |b| {
            b.iter(|| exec.map(jobs.clone(), |(i, p)| primes::report(&data[i], p)).len())
        });
    }
    group.finish();
}

criterion_group!(benches, closed_subset_enumeration, definitional_pretty_good, catalog_reports);
criterion_main!(benches);
