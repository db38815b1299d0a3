//! Genericity trials and the log-det Monte Carlo on one thread versus the
//! full rayon pool. Built without the `parallel` feature, only the
//! sequential path is measured.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use prelog::index_sets::IndexSelection;
use prelog::jacobian::{self, TrialSetup};
use prelog::model::ColoringMatrix;
use prelog::montecarlo;
use prelog::Dims;

#[cfg(feature = "parallel")]
type Pool = rayon::ThreadPool;
#[cfg(not(feature = "parallel"))]
type Pool = ();

#[cfg(feature = "parallel")]
fn pools() -> Vec<(String, Pool)> {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    let name = format!("parallel-{}", all.current_num_threads());
    vec![("sequential".to_string(), one), (name, all)]
}

#[cfg(not(feature = "parallel"))]
fn pools() -> Vec<(String, Pool)> {
    vec![("sequential".to_string(), ())]
}

#[cfg(feature = "parallel")]
fn within<R: Send>(pool: &Pool, f: impl FnOnce() -> R + Send) -> R {
    pool.install(f)
}

#[cfg(not(feature = "parallel"))]
fn within<R: Send>(_pool: &Pool, f: impl FnOnce() -> R + Send) -> R {
    f()
}

fn genericity(c: &mut Criterion) {
    let dims = Dims::new(3, 5, 7, 2).unwrap();
    let sel = IndexSelection::canonical(dims).unwrap();
    let mut group = c.benchmark_group("genericity_1000_trials");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(&name), |b| {
            b.iter(|| {
                within(&pool, || {
                    jacobian::genericity_trial(dims, &sel, 1000, 1, jacobian::DEFAULT_TOL, &TrialSetup::default()).unwrap();
                })
            })
        });
    }
    group.finish();
}

fn logdet(c: &mut Criterion) {
    let dims = Dims::new(2, 3, 4, 1).unwrap();
    let sel = IndexSelection::canonical(dims).unwrap();
    let z = ColoringMatrix::from_seed(dims, 1);
    let mut group = c.benchmark_group("mc_logdet_20000_samples");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(&name), |b| {
            b.iter(|| {
                within(&pool, || {
                    montecarlo::mc_logdet(dims, &z, &sel, 20_000, 1).unwrap();
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, genericity, logdet);
criterion_main!(benches);
