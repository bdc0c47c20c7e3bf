use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use indyn_core::detect::MeasureGridSystem;
use indyn_core::entropy::{entropy_estimate, TimeSequence};
use indyn_core::measure::{prohorov_fast, random_measure};
use indyn_core::par::Exec;
use indyn_core::scalar::rat;
use indyn_core::space::MetricSpace;
use indyn_core::systems::zoo;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn prohorov_batch(c: &mut Criterion) {
    let space = MetricSpace::interval(rat(0, 1), rat(1, 1), 64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let pairs: Vec<_> = (0..256)
        .map(|_| {
            (
                random_measure(&mut rng, &space, 12, 60),
                random_measure(&mut rng, &space, 12, 60),
            )
        })
        .collect();
    let mut g = c.benchmark_group("prohorov_batch_256");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| exec.map(&pairs, |(m, n)| prohorov_fast(&space, m, n).unwrap()))
        });
    }
    g.finish();
}

fn measure_grid_matrix(c: &mut Criterion) {
    let sys = zoo::fig1(4).unwrap();
    let mut g = c.benchmark_group("measure_grid_q6_fig1_q4");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(MeasureGridSystem::build(&sys, 6, 1_000_000, exec).unwrap()))
        });
    }
    g.finish();
}

fn entropy_grid(c: &mut Criterion) {
    let sys = zoo::fig1(1024).unwrap();
    let eps: Vec<f64> = (4..=6).map(|k| 2f64.powi(-k)).collect();
    let ns: Vec<usize> = (1..=10).collect();
    let mut g = c.benchmark_group("entropy_fig1_q1024");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| entropy_estimate(&sys, &TimeSequence::AllIntegers, &eps, &ns, None, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, prohorov_batch, measure_grid_matrix, entropy_grid);
criterion_main!(benches);
