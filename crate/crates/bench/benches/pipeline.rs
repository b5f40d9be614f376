use std::collections::BTreeSet;
use std::hint::black_box;

use acsplit_core::link::ElementRef;
use acsplit_core::testkit::{gen, rng};
use acsplit_core::{impact, parse_case, print_case, resolve_links, validate_case, CaseKind};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

/// Every tenth element of every case.
fn pick_changed(bundle: &acsplit_core::Bundle) -> BTreeSet<ElementRef> {
    bundle
        .cases()
        .flat_map(|c| c.elements.iter().step_by(10).map(move |e| (c.id.clone(), e.id.clone())))
        .collect()
}

fn parse_and_print(c: &mut Criterion) {
    let mut group = c.benchmark_group("parse");
    for size in [50, 500, 5000] {
        let case = gen::grow_case(&mut rng(size as u64), "Bench", CaseKind::Monolithic, size);
        let text = print_case(&case);
        group.bench_with_input(BenchmarkId::from_parameter(size), &text, |b, text| {
            b.iter(|| parse_case(black_box(text), "bench.acd"))
        });
    }
    group.finish();
}

fn validate(c: &mut Criterion) {
    let mut group = c.benchmark_group("validate");
    for size in [50, 500, 5000] {
        let case = gen::grow_case(&mut rng(size as u64), "Bench", CaseKind::Monolithic, size);
        group.bench_with_input(BenchmarkId::from_parameter(size), &case, |b, case| {
            b.iter(|| validate_case(black_box(case)))
        });
    }
    group.finish();
}

fn impact_analysis(c: &mut Criterion) {
    let bundles: Vec<_> = (0..100)
        .map(|seed| {
            let bundle = gen::random_valid_bundle(&mut rng(seed), 30);
            let changed = pick_changed(&bundle);
            (resolve_links(&bundle).0.expect("generated bundles resolve"), changed)
        })
        .collect();
    c.bench_function("impact/100 bundles", |b| {
        b.iter(|| {
            for (resolved, changed) in &bundles {
                black_box(impact(resolved, changed).unwrap());
            }
        })
    });
}

criterion_group!(benches, parse_and_print, validate, impact_analysis);
criterion_main!(benches);
