mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use acsplit_core::analyze::{case_metrics, parse_element_ref};
use acsplit_core::link::ElementRef;
use acsplit_core::testkit::{gen, oracle, rng, Rng};
use acsplit_core::{
    impact, metrics_bundle, metrics_case, resolve_links, validate_bundle, validate_case, Bundle, CaseKind,
};
use common::*;
use rand::seq::SliceRandom;
use rand::Rng as _;

fn random_changed(r: &mut Rng, bundle: &Bundle, max: usize) -> BTreeSet<ElementRef> {
    let all: Vec<ElementRef> =
        bundle.cases().flat_map(|c| c.elements.iter().map(move |e| (c.id.clone(), e.id.clone()))).collect();
    let k = r.gen_range(0..=max.min(all.len()));
    all.choose_multiple(r, k).cloned().collect()
}

#[test]
fn corpus_tac_change_reaches_cac() {
    let (resolved, _) = resolve_links(&corpus_bundle("bundle_mrgfus.acb"));
    let resolved = resolved.unwrap();
    let report = impact(&resolved, &BTreeSet::from([parse_element_ref("TAC-1.C2").unwrap()])).unwrap();
    for (c, e) in [("TAC-1", "C1"), ("CAC-UF", "C4"), ("CAC-UF", "S"), ("CAC-UF", "C1")] {
        assert!(report.is_affected(&cid(c), &eid(e)), "{c}.{e}");
    }
    assert!(!report.is_affected(&cid("CAC-UF"), &eid("C5")));
    assert_eq!(report.affected_cacs, BTreeSet::from([cid("CAC-UF")]));
}

#[test]
fn empty_change() {
    let (resolved, _) = resolve_links(&corpus_bundle("bundle_multi.acb"));
    let report = impact(&resolved.unwrap(), &BTreeSet::new()).unwrap();
    assert_eq!(report.affected.len(), 3);
    assert!(report.affected.values().all(BTreeSet::is_empty));
}

#[test]
fn generated_bundles_are_valid() {
    for seed in 0..200 {
        let bundle = gen::random_valid_bundle(&mut rng(seed), 30);
        assert!(bundle.cases().map(|c| c.elements.len()).sum::<usize>() <= 30);
        for case in bundle.cases() {
            let errs: Vec<_> = validate_case(case).into_iter().filter(|d| d.is_error()).collect();
            assert!(errs.is_empty(), "seed {seed}: {errs:?}");
        }
        assert!(validate_bundle(&bundle).is_empty(), "seed {seed}");
    }
}

#[test]
fn impact_matches_union_graph_oracle() {
    let start = Instant::now();
    for seed in 0..1000 {
        let mut r = rng(seed);
        let bundle = gen::random_valid_bundle(&mut r, 30);
        let resolved = resolve_links(&bundle).0.unwrap();
        let changed = random_changed(&mut r, &bundle, 4);
        let report = impact(&resolved, &changed).unwrap();
        assert_eq!(report.affected, oracle::impact_by_union(&bundle, &changed), "seed {seed}");
        for c in &changed {
            assert!(report.is_affected(&c.0, &c.1));
        }
        let expected_cacs: BTreeSet<_> = bundle
            .cacs
            .iter()
            .filter(|c| !report.affected[&c.id].is_empty())
            .map(|c| c.id.clone())
            .collect();
        assert_eq!(report.affected_cacs, expected_cacs);
    }
    eprintln!("1000 bundles in {:?}", start.elapsed());
}

#[test]
fn impact_is_monotone_and_respects_direction() {
    for seed in 0..300 {
        let mut r = rng(seed);
        let bundle = gen::random_valid_bundle(&mut r, 30);
        let resolved = resolve_links(&bundle).0.unwrap();
        let small = random_changed(&mut r, &bundle, 3);
        let mut large = small.clone();
        large.extend(random_changed(&mut r, &bundle, 3));
        let a = impact(&resolved, &small).unwrap();
        let b = impact(&resolved, &large).unwrap();
        for (case, ids) in &a.affected {
            assert!(ids.is_subset(&b.affected[case]), "seed {seed}");
        }

        let cac_only: BTreeSet<_> = large.into_iter().filter(|(c, _)| c != &bundle.tac.id).collect();
        let report = impact(&resolved, &cac_only).unwrap();
        assert!(report.affected[&bundle.tac.id].is_empty(), "seed {seed}");
    }
}

#[test]
fn unknown_changed_ids() {
    let (resolved, _) = resolve_links(&corpus_bundle("bundle_mrgfus.acb"));
    let resolved = resolved.unwrap();
    assert!(impact(&resolved, &BTreeSet::from([(cid("TAC-1"), eid("Zzz"))])).is_err());
    assert!(impact(&resolved, &BTreeSet::from([(cid("NOPE"), eid("C1"))])).is_err());
}

#[test]
fn corpus_metrics() {
    let bundle = metrics_bundle(&corpus_bundle("bundle_mrgfus.acb"));
    let mono = metrics_case(&corpus_case("monolithic_mrgfus.acd"));
    let largest = bundle.cases.iter().map(|c| c.element_count).max().unwrap();
    assert_eq!((largest, mono.totals.element_count), (15, 23));
    assert!(largest < mono.totals.element_count);

    let tac = &bundle.cases[0];
    assert_eq!((tac.depth, tac.undeveloped_count, tac.evidence_coverage), (5, 0, 1.0));
    assert_eq!((tac.elements["strategy"], tac.elements["context"]), (1, 3));
    let cac = &bundle.cases[1];
    assert_eq!((cac.depth, cac.undeveloped_count, cac.evidence_coverage), (4, 2, 0.5));
    assert_eq!((cac.concerns["safety"], cac.concerns["effectiveness"]), (2, 2));
    assert_eq!(mono.totals.depth, 6);
    assert_eq!(bundle.cross_link_count, 2);
}

#[test]
fn metrics_totals_are_sums() {
    for seed in 0..100 {
        let bundle = gen::random_valid_bundle(&mut rng(seed), 30);
        let m = metrics_bundle(&bundle);
        let sum = |f: fn(&acsplit_core::analyze::CaseMetrics) -> usize| m.cases.iter().map(f).sum::<usize>();
        assert_eq!(m.totals.element_count, sum(|c| c.element_count));
        assert_eq!(m.totals.edge_count, sum(|c| c.edge_count));
        assert_eq!(m.totals.undeveloped_count, sum(|c| c.undeveloped_count));
        assert_eq!(m.cross_link_count, resolve_links(&bundle).0.unwrap().resolutions().len());
        for c in &m.cases {
            assert!((0.0..=1.0).contains(&c.evidence_coverage));
        }
    }
}

#[test]
fn metrics_ignore_declaration_order() {
    for seed in 0..100 {
        let mut r = rng(seed);
        let case = gen::grow_case(&mut r, "M", CaseKind::Monolithic, 25);
        let mut shuffled = case.clone();
        shuffled.elements.shuffle(&mut r);
        shuffled.edges.shuffle(&mut r);
        assert_eq!(case_metrics(&case), case_metrics(&shuffled));
    }
}
