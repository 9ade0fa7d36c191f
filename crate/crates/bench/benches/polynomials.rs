use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use knotarc_bench::{braid_ladder, member};
use knotarc_core::grid::template;
use knotarc_core::kauffman::Engine;
use knotarc_core::{jones, kauffman_f, SkeinConfig};

fn kauffman_families(c: &mut Criterion) {
    let mut g = c.benchmark_group("kauffman_f");
    for n in 0..=2 {
        let d = member(1, n);
        g.bench_with_input(BenchmarkId::new("family1", n), &d, |b, d| {
            b.iter(|| kauffman_f(black_box(d), &SkeinConfig::default()).unwrap())
        });
    }
    g.finish();
}

fn memo_against_naive(c: &mut Criterion) {
    let mut g = c.benchmark_group("memo");
    let ladder = braid_ladder(10);
    let naive = SkeinConfig { memo_enabled: false, ..SkeinConfig::default() };
    g.bench_function("memoized", |b| {
        b.iter(|| {
            let mut e = Engine::new(SkeinConfig::default());
            for d in &ladder {
                black_box(e.kauffman_f(d).unwrap());
            }
        })
    });
    g.bench_function("naive", |b| {
        b.iter(|| {
            for d in &ladder {
                black_box(kauffman_f(d, &naive).unwrap());
            }
        })
    });
    g.finish();
}

fn jones_state_sum(c: &mut Criterion) {
    let mut g = c.benchmark_group("jones");
    g.sample_size(10);
    for n in 0..=2 {
        let d = member(5, n);
        g.bench_with_input(BenchmarkId::new("family5", n), &d, |b, d| b.iter(|| jones(black_box(d)).unwrap()));
    }
    g.finish();
}

fn grid_templates(c: &mut Criterion) {
    c.bench_function("grid_template_to_diagram", |b| {
        b.iter(|| template(black_box(7), 2).unwrap().to_diagram().unwrap())
    });
}

criterion_group!(benches, kauffman_families, memo_against_naive, jones_state_sum, grid_templates);
criterion_main!(benches);
