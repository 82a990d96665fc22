use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use wonderful::autgroup::{
    collineation_search, enumerate_pgl, point_action, realize_as_pgl, SEARCH_BUDGET,
};
use wonderful_bench::lattice;

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("collineation_search");
    group.sample_size(10);
    for (q, n) in [(2u64, 2usize), (3, 2), (2, 3)] {
        let lat = lattice(q, n);
        lat.above();
        group.bench_function(format!("q{q}_n{n}"), |b| {
            b.iter(|| collineation_search(&lat, SEARCH_BUDGET).unwrap().len())
        });
    }
    group.finish();
}

fn realize(c: &mut Criterion) {
    let lat = lattice(3, 2);
    let maps = enumerate_pgl(lat.ambient()).unwrap();
    let sigmas: Vec<Vec<usize>> = maps
        .iter()
        .step_by(97)
        .map(|g| point_action(&lat, g).unwrap())
        .collect();
    c.bench_function("realize_as_pgl_q3_n2", |b| {
        b.iter(|| {
            for s in &sigmas {
                black_box(realize_as_pgl(&lat, s).unwrap());
            }
        })
    });
}

criterion_group!(benches, search, realize);
criterion_main!(benches);
