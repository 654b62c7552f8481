use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hardy_core::hardy::pn_sequence;
use hardy_core::{gauss_product, kedlaya_matrix, power_mean, GaussConfig, MeanExpr, SampleVector};

fn families(c: &mut Criterion) {
    let x = SampleVector::harmonic(1_000).unwrap();
    let mut g = c.benchmark_group("mean_1000");
    for p in [-1.0, 0.0, 0.5] {
        g.bench_with_input(BenchmarkId::new("power", p), &p, |b, &p| b.iter(|| power_mean(black_box(p), &x)));
    }
    let gini = MeanExpr::Gini(0.5, -1.0);
    g.bench_function("gini(0.5,-1)", |b| b.iter(|| gini.evaluate(black_box(&x)).unwrap()));
    g.finish();
}

fn pn(c: &mut Criterion) {
    let mut g = c.benchmark_group("pn_sequence");
    g.sample_size(20);
    for (name, e) in [
        ("power(0)", MeanExpr::Power(0.0)),
        ("gini(0.5,-1)", MeanExpr::Gini(0.5, -1.0)),
        ("gauss(power(-1),power(0))", MeanExpr::Gauss(vec![MeanExpr::Power(-1.0), MeanExpr::Power(0.0)])),
    ] {
        g.bench_function(name, |b| b.iter(|| pn_sequence(&e, black_box(2_000)).unwrap()));
    }
    g.finish();
}

fn gauss(c: &mut Criterion) {
    let means = [MeanExpr::Power(-1.0), MeanExpr::Power(0.0)];
    let at = SampleVector::new(vec![2.0, std::f64::consts::E]).unwrap();
    let cfg = GaussConfig::default();
    c.bench_function("gauss_product(2,e)", |b| b.iter(|| gauss_product(&means, black_box(&at), &cfg).unwrap()));
}

fn kedlaya(c: &mut Criterion) {
    let mut g = c.benchmark_group("kedlaya_matrix");
    g.sample_size(10);
    for n in [4, 5, 6] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| kedlaya_matrix(n).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, families, pn, gauss, kedlaya);
criterion_main!(benches);
