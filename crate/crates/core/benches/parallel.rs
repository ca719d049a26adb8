use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use expmarkov::dynamics::{self, HittingParams};
use expmarkov::multifractal::{default_q_grid, Multifractal};
use expmarkov::parallel::{with_execution, Execution};
use expmarkov::thermo::{self, GibbsModel, Potential};
use expmarkov::MarkovMap;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn hitting(c: &mut Criterion) {
    let map = MarkovMap::doubling();
    let phi = Potential::neg_log_derivative(&map);
    let psi = Potential::bernoulli(&map, &[0.7, 0.3]).unwrap();
    let params = HittingParams { trials: 16, j_max: 10, n_max: 1 << 14, seed: 1 };
    let mut group = c.benchmark_group("hitting_law");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| with_execution(mode, || dynamics::hitting_law_from_potentials(&map, &phi, &psi, black_box(params)).unwrap()))
        });
    }
    group.finish();
}

fn spectrum(c: &mut Criterion) {
    let map = MarkovMap::doubling();
    let phi = Potential::bernoulli(&map, &[0.7, 0.3]).unwrap();
    let mf = Multifractal::new(&map, &phi).unwrap();
    let grid = default_q_grid();
    let mut group = c.benchmark_group("spectrum_grid");
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| with_execution(mode, || mf.spectrum(black_box(&grid)).unwrap()))
        });
    }
    group.finish();
}

fn gibbs_constant(c: &mut Criterion) {
    let map = MarkovMap::three_symbol_restricted();
    let model = GibbsModel::new(&map, &Potential::bernoulli(&map, &[0.2, 0.3, 0.5]).unwrap()).unwrap();
    let mut group = c.benchmark_group("gibbs_constant_n12");
    group.sample_size(20);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| with_execution(mode, || thermo::gibbs_constant(&model, black_box(12)).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, hitting, spectrum, gibbs_constant);
criterion_main!(benches);
