use std::hint::black_box;

use condense_core::marked::ReducedWords;
use condense_core::wreath::{collect, is_identity_generic, WindowOracle};
use condense_core::{certify_condensed, Ambient, Fallback, FiniteGroupTable, ForcedSubset, Limits, MarkedSpec, MarkedWord};
use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};

fn setup() -> (Ambient, FiniteGroupTable, ForcedSubset) {
    let h = Ambient::free(2).unwrap();
    (h, FiniteGroupTable::preset("s3").unwrap(), ForcedSubset::new(h, Limits::default()))
}

fn words(len: usize) -> Vec<MarkedWord> {
    ReducedWords::new(2, len).collect()
}

fn ambient_balls(c: &mut Criterion) {
    let (h, _, _) = setup();
    let mut group = c.benchmark_group("ambient_ball");
    for r in [4, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(r), &r, |b, &r| {
            b.iter(|| h.ball(black_box(r), usize::MAX).unwrap().len())
        });
    }
    group.finish();
}

fn collected_forms(c: &mut Criterion) {
    let (h, _, _) = setup();
    let ws = words(4);
    c.bench_function("collect/all_len4", |b| {
        b.iter(|| ws.iter().map(|w| collect(w, h).factors.len()).sum::<usize>())
    });
}

fn generic_oracle(c: &mut Criterion) {
    let (_, table, _) = setup();
    let ws = words(4);
    c.bench_function("generic/all_len4", |b| {
        b.iter_batched(
            || setup().2,
            |mut s| ws.iter().filter(|w| is_identity_generic(w, &table, &mut s.view()).unwrap().is_identity()).count(),
            BatchSize::LargeInput,
        )
    });
}

fn window_oracle(c: &mut Criterion) {
    let (h, table, mut s) = setup();
    s.snapshot(4).unwrap();
    let ws = words(3);
    let mut group = c.benchmark_group("window/all_len3");
    group.sample_size(10);
    for r in [4, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(r), &r, |b, &r| {
            let frozen = s.frozen(&h.identity(), Fallback::Hashed(1));
            b.iter(|| {
                let mut oracle = WindowOracle::new(h, r, 1 << 20, &frozen).unwrap();
                ws.iter().filter(|w| oracle.check(w, &table) == condense_core::WindowVerdict::IdentityUpToWindow).count()
            })
        });
    }
    group.finish();
}

fn marked_balls(c: &mut Criterion) {
    let mut group = c.benchmark_group("marked_ball");
    group.sample_size(10);
    for r in [1, 2, 3] {
        group.bench_with_input(BenchmarkId::from_parameter(r), &r, |b, &r| {
            b.iter_batched(
                setup,
                |(h, t, mut s)| MarkedSpec::xi(h, t).build_ball(&mut s, r).unwrap().len(),
                BatchSize::LargeInput,
            )
        });
    }
    group.finish();
}

fn certificates(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify");
    group.sample_size(10);
    for r in [1, 2] {
        group.bench_with_input(BenchmarkId::from_parameter(r), &r, |b, &r| {
            b.iter_batched(
                setup,
                |(_, t, mut s)| certify_condensed(&mut s, &t, r).unwrap().h,
                BatchSize::LargeInput,
            )
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    ambient_balls,
    collected_forms,
    generic_oracle,
    window_oracle,
    marked_balls,
    certificates
);
criterion_main!(benches);
