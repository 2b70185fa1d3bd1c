// SPDX-License-Identifier: Apache-2.0

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use keven_bench::fundamental_discs;
use keven_core::kummer::irregular_scan;
use keven_core::qforms::class_group;
use keven_core::zeta::{bernoulli_akiyama_tanigawa, bernoulli_recurrence};

fn bernoulli(c: &mut Criterion) {
    let mut g = c.benchmark_group("bernoulli");
    g.sample_size(10);
    g.bench_function("recurrence_200", |b| b.iter(|| bernoulli_recurrence(black_box(200))));
    g.bench_function("akiyama_tanigawa_200", |b| b.iter(|| bernoulli_akiyama_tanigawa(black_box(200))));
    g.finish();
}

fn class_groups(c: &mut Criterion) {
    let neg = fundamental_discs(-5000, -4000);
    let pos = fundamental_discs(4000, 5000);
    c.bench_function("class_group_definite_1000", |b| {
        b.iter(|| neg.iter().map(|&d| class_group(d).unwrap().order()).sum::<u64>())
    });
    c.bench_function("class_group_indefinite_1000", |b| {
        b.iter(|| pos.iter().map(|&d| class_group(d).unwrap().order()).sum::<u64>())
    });
}

fn scan(c: &mut Criterion) {
    let mut g = c.benchmark_group("kummer");
    g.sample_size(10);
    // memoized after the first iteration, so this times the valuation pass
    g.bench_function("irregular_scan_300", |b| b.iter(|| irregular_scan(black_box(300))));
    g.finish();
}

criterion_group!(benches, bernoulli, class_groups, scan);
criterion_main!(benches);
