use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use bertrand_core::dynamics::{bifurcation_scan_2d, OrbitOptions, Range};
use bertrand_core::exactpoly::ratio;
use bertrand_core::model::{ModelParams, Param, PriceState, Substitutability};
use bertrand_core::par::Exec;
use bertrand_core::stability::{displayed_identities, region_scan, verify_identities_with, Axis, Fixed, DEFAULT_SEED};

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn orbit_grid(c: &mut Criterion) {
    let base = ModelParams::new(0.5, 0.3, 0.4, 1.0, 1.0).unwrap();
    let init = PriceState::new(0.5, 0.8).unwrap();
    let mut g = c.benchmark_group("bifurcation_scan_2d 40x40");
    g.sample_size(10);
    for (name, exec) in STRATEGIES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let x = Range::new(Param::K1, 0.25, 10.0, 40).unwrap();
                let y = Range::new(Param::K2, 0.25, 10.0, 40).unwrap();
                bifurcation_scan_2d(&base, x, y, init, &OrbitOptions::default(), exec).unwrap()
            })
        });
    }
    g.finish();
}

fn region_grid(c: &mut Criterion) {
    let fixed = Fixed { k: Some(ratio(1, 1)), ..Fixed::default() };
    let mut g = c.benchmark_group("region_scan 12x12");
    g.sample_size(10);
    for (name, exec) in STRATEGIES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let x = Axis::new(Param::C1, ratio(1, 20), ratio(1, 2), 12).unwrap();
                let y = Axis::new(Param::C2, ratio(1, 20), ratio(1, 2), 12).unwrap();
                region_scan(Substitutability::Third, x, y, &fixed, exec).unwrap()
            })
        });
    }
    g.finish();
}

fn identity_trials(c: &mut Criterion) {
    let specs = displayed_identities(Substitutability::Half);
    let mut g = c.benchmark_group("identities alpha=1/2, 4 trials");
    g.sample_size(10);
    for (name, exec) in STRATEGIES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| verify_identities_with(Substitutability::Half, &specs, 4, DEFAULT_SEED, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, orbit_grid, region_grid, identity_trials);
criterion_main!(benches);
