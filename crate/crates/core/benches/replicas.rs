use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fiid_forest::forest::{build_one_ended_tree, BuildConfig};
use fiid_forest::graph::Window;
use fiid_forest::labels::LabelField;
use fiid_forest::replicas::{map_seeds, seed_range, Mode};
use std::hint::black_box;

fn build_replicas(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_one_ended_tree x16");
    g.sample_size(10);
    for side in [16usize, 32] {
        let w = Window::lattice(side, side, true, 0).unwrap();
        let seeds = seed_range(0, 16);
        for (name, mode) in [("parallel", Mode::Parallel), ("sequential", Mode::Sequential)] {
            g.bench_with_input(BenchmarkId::new(name, side), &side, |b, _| {
                b.iter(|| {
                    map_seeds(&seeds, mode, |s| {
                        let t = build_one_ended_tree(&w, &LabelField::new(s), &BuildConfig::default()).unwrap();
                        black_box(t.report.closure_edges)
                    })
                })
            });
        }
    }
    g.finish();
}

criterion_group!(benches, build_replicas);
criterion_main!(benches);
