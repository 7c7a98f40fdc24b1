//! Benchmarks for the hot paths: dipole cancellation, group
//! multiplication in all three representations, and graph construction.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use diagram_groups::presentation::SearchLimits;
use diagram_groups::{pl, sampling, squier, thompson, Diagram, NormalForm};

fn bench_reduce(c: &mut Criterion) {
    let p = thompson::presentation();
    let base = p.parse_word("x").unwrap();
    let mut group = c.benchmark_group("reduce");
    for &cells in &[32usize, 128, 512] {
        let mut rng = sampling::seeded(cells as u64);
        let d = sampling::random_diagram(&p, &base, cells, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(cells), &d, |b, d| {
            b.iter(|| black_box(d.clone().reduce()));
        });
    }
    group.finish();
}

fn bench_group_mul(c: &mut Criterion) {
    let p = thompson::presentation();
    let base = p.parse_word("x").unwrap();
    let mut rng = sampling::seeded(7);
    let lhs = sampling::random_sphere(&p, &base, 6, 50_000, &mut rng)
        .expect("sphere within bound");
    let rhs = sampling::random_sphere(&p, &base, 6, 50_000, &mut rng)
        .expect("sphere within bound");
    c.bench_function("group_mul/spheres", |b| {
        b.iter(|| black_box(Diagram::group_mul(black_box(&lhs), black_box(&rhs))));
    });
}

fn bench_normal_form(c: &mut Criterion) {
    let mut rng = sampling::seeded(11);
    let f = sampling::random_normal_form(40, 8, &mut rng);
    let g = sampling::random_normal_form(40, 8, &mut rng);
    c.bench_function("normal_form/mul", |b| {
        b.iter(|| black_box(black_box(&f).mul(black_box(&g))));
    });
    c.bench_function("normal_form/to_diagram", |b| {
        b.iter(|| black_box(thompson::nf_to_diagram(black_box(&f), 1)));
    });
    let d = thompson::nf_to_diagram(&f, 1).unwrap();
    c.bench_function("normal_form/from_diagram", |b| {
        b.iter(|| black_box(thompson::diagram_to_nf(black_box(&d))));
    });
}

fn bench_pl_compose(c: &mut Criterion) {
    let mut rng = sampling::seeded(13);
    let f = pl::pl_from_nf(&sampling::random_normal_form(20, 6, &mut rng));
    let g = pl::pl_from_nf(&sampling::random_normal_form(20, 6, &mut rng));
    c.bench_function("pl/compose", |b| {
        b.iter(|| black_box(black_box(&f).compose(black_box(&g))));
    });
}

fn bench_squier_build(c: &mut Criterion) {
    let p = thompson::presentation();
    let base = p.parse_word("x x").unwrap();
    let mut group = c.benchmark_group("squier_build");
    group.sample_size(20);
    for &max_len in &[5usize, 7] {
        let limits = SearchLimits {
            max_word_len: max_len,
            max_visited: 1_000_000,
        };
        group.bench_with_input(
            BenchmarkId::from_parameter(max_len),
            &limits,
            |b, limits| {
                b.iter(|| black_box(squier::build_component(&p, &base, *limits)));
            },
        );
    }
    group.finish();
}

fn bench_ball(c: &mut Criterion) {
    c.bench_function("thompson/ball_radius_4", |b| {
        b.iter(|| black_box(thompson::ball(4)));
    });
    let words: Vec<NormalForm> = (0..4).map(NormalForm::generator).collect();
    c.bench_function("thompson/word_fold", |b| {
        b.iter(|| {
            let mut acc = NormalForm::identity();
            for w in &words {
                acc = acc.mul(w).mul(&w.inv()).mul(w);
            }
            black_box(acc)
        });
    });
}

criterion_group!(
    benches,
    bench_reduce,
    bench_group_mul,
    bench_normal_form,
    bench_pl_compose,
    bench_squier_build,
    bench_ball
);
criterion_main!(benches);
