//! Benchmarks for the hot kernels: free-algebra construction, subspace
//! arithmetic, edge saturation, quotient search, and BCH sampling.

use carnot_bench::n626;
use carnot_core::bch::{sample_semigroup, SampleParams};
use carnot_core::engel::make_engel;
use carnot_core::hall::free_nilpotent;
use carnot_core::lie::GradedLieAlgebra;
use carnot_core::rat::int;
use carnot_core::semigen::{
    decide_semigenerated, find_engel_quotients, saturate_edge, DecideOptions, HalfSpace,
    SaturateOptions, SearchOptions,
};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn bench_free_nilpotent(c: &mut Criterion) {
    c.bench_function("free_nilpotent(3,3)", |b| {
        b.iter(|| black_box(free_nilpotent(3, 3)))
    });
    c.bench_function("free_nilpotent(2,4)", |b| {
        b.iter(|| black_box(free_nilpotent(2, 4)))
    });
}

fn bench_saturation(c: &mut Criterion) {
    let g = n626();
    let w = HalfSpace::new(vec![int(1), int(0), int(0)]).unwrap();
    let opts = SaturateOptions::default();
    c.bench_function("saturate_edge n626", |b| {
        b.iter(|| black_box(saturate_edge(&g, &w, &opts).unwrap()))
    });
}

fn bench_quotient_search(c: &mut Criterion) {
    let f = free_nilpotent(2, 3).algebra;
    let opts = SearchOptions::default();
    c.bench_function("find_engel_quotients free23", |b| {
        b.iter(|| black_box(find_engel_quotients(&f, &opts).unwrap()))
    });
    let product = GradedLieAlgebra::product(&make_engel(1), &make_engel(1));
    c.bench_function("decide engel1xengel1", |b| {
        b.iter(|| black_box(decide_semigenerated(&product, &DecideOptions::default()).unwrap()))
    });
}

fn bench_bch_sampling(c: &mut Criterion) {
    let g = make_engel(2);
    let w = HalfSpace::new(vec![int(1), int(0), int(0)]).unwrap();
    let params = SampleParams {
        word_length: 4,
        count: 100,
        seed: 1,
        bound: 2,
        denominator: 2,
    };
    c.bench_function("sample_semigroup engel2 100x4", |b| {
        b.iter(|| black_box(sample_semigroup(&g, &w, &params, false).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_free_nilpotent,
    bench_saturation,
    bench_quotient_search,
    bench_bch_sampling
);
criterion_main!(benches);
