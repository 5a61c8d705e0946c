use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use reeb_core::checkers::check_main_batch;
use reeb_core::{
    enumerate_cylindrical_with, enumerate_feasible_with, BuildingCaps, CobordismData, Ellipsoid, Execution,
    FeasibilityCaps, ReebOrbit, SearchOptions, Setting,
};

const STRATEGIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn ell(a: &str, b: &str) -> Ellipsoid {
    Ellipsoid::new(a.parse().unwrap(), b.parse().unwrap()).unwrap()
}

fn buildings(c: &mut Criterion) {
    let mut group = c.benchmark_group("cylindrical_buildings");
    group.sample_size(10);
    let cob = CobordismData::new(ell("1", "5 + e"), ell("2", "13 + e")).unwrap();
    for (k, caps) in [
        (4, BuildingCaps { max_levels_per_side: 3, max_multiplicity: 12 }),
        (6, BuildingCaps { max_levels_per_side: 3, max_multiplicity: 16 }),
    ] {
        for (name, exec) in STRATEGIES {
            let opts = SearchOptions::with_execution(exec);
            group.bench_with_input(BenchmarkId::new(name, k), &k, |bch, &k| {
                bch.iter(|| enumerate_cylindrical_with(&cob, k, k, caps, &opts).unwrap())
            });
        }
    }
    group.finish();
}

fn feasible(c: &mut Criterion) {
    let mut group = c.benchmark_group("feasible_data");
    group.sample_size(10);
    let setting = Setting::Symplectization(ell("1", "13/2 + e"));
    let caps = FeasibilityCaps { max_negative_punctures: 6, max_total_multiplicity: 14 };
    for (name, exec) in STRATEGIES {
        let opts = SearchOptions::with_execution(exec);
        group.bench_function(name, |bch| {
            bch.iter(|| enumerate_feasible_with(&setting, ReebOrbit::alpha(14), caps, &opts))
        });
    }
    group.finish();
}

fn checkers(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_main_batch");
    let pairs: Vec<(CobordismData, u64)> = (1..=40)
        .flat_map(|i| {
            let inner = ell("1", &format!("{} + e", 5 + i));
            let outer = ell("2", &format!("{} + e", 13 + 3 * i));
            let cob = CobordismData::new(inner, outer).unwrap();
            (1..=8).map(move |k| (cob.clone(), k))
        })
        .collect();
    for (name, exec) in STRATEGIES {
        group.bench_function(name, |bch| bch.iter(|| check_main_batch(&pairs, exec)));
    }
    group.finish();
}

criterion_group!(benches, buildings, feasible, checkers);
criterion_main!(benches);
