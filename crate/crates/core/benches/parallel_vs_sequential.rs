use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gbcodes::distance::{min_distance_with, DistanceOptions};
use gbcodes::search::{search_base_codes, SearchFilter};
use gbcodes::{
    build_gb_str, estimate_ler, CssCode, DecoderConfig, Execution, ExtensionPlan, NoiseModel, SimOptions, StopRule,
};

/// Plain lift of `(a, b)` over ring size `ell` to `times * ell`.
fn lifted(a: &str, b: &str, ell: usize, times: usize) -> CssCode {
    let base = build_gb_str(a, b, ell).unwrap();
    ExtensionPlan::identity_with_lengths(&base, &[ell, times * ell]).unwrap().member(2).unwrap()
}

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn ler(c: &mut Criterion) {
    let code = lifted("1+x^4", "1+x+x^2+x^4", 5, 3);
    let noise = NoiseModel::uniform(0.08).unwrap();
    let cfg = DecoderConfig::default().with_osd_order(5);
    let mut group = c.benchmark_group("estimate_ler");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = SimOptions { trials: 4_000, stop: StopRule::Fixed, seed: 1, exec, ..SimOptions::default() };
        group.bench_function(BenchmarkId::new(name, code.n()), |b| {
            b.iter(|| estimate_ler(&code, "bench", &noise, &cfg, &opts).unwrap())
        });
    }
    group.finish();
}

fn distance(c: &mut Criterion) {
    let code = lifted("1+x^3", "1+x+x^3+x^6", 7, 3);
    let mut group = c.benchmark_group("min_distance");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = DistanceOptions { exec, ..DistanceOptions::default() };
        group.bench_function(BenchmarkId::new(name, code.n()), |b| b.iter(|| min_distance_with(&code, &opts).unwrap()));
    }
    group.finish();
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    for (name, exec) in MODES {
        let filter = SearchFilter { require_distance: Some(3), exec, ..SearchFilter::new(7) };
        group.bench_function(BenchmarkId::new(name, filter.ell), |b| b.iter(|| search_base_codes(&filter).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, ler, distance, search);
criterion_main!(benches);
