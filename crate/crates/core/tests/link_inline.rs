mod common;

use std::collections::BTreeMap;

use acsplit_core::diag::{has_errors, Rule};
use acsplit_core::link::normalize_case_id;
use acsplit_core::testkit::{gen, oracle, rng};
use acsplit_core::{canonicalize, inline_bundle, resolve_links, validate_case, CaseKind};
use common::*;

#[test]
fn corpus_resolutions() {
    let (resolved, diags) = resolve_links(&corpus_bundle("bundle_mrgfus.acb"));
    assert!(diags.is_empty());
    let expected = BTreeMap::from([
        ((cid("CAC-UF"), eid("C4")), (cid("TAC-1"), eid("C2"))),
        ((cid("CAC-UF"), eid("C5")), (cid("TAC-1"), eid("C3"))),
    ]);
    assert_eq!(resolved.unwrap().resolutions(), &expected);
}

#[test]
fn resolution_failures_reuse_rule_messages() {
    let bundle = corpus_bundle("bad_s1.acb");
    let (resolved, diags) = resolve_links(&bundle);
    assert!(resolved.is_none());
    let from_validate: Vec<_> =
        acsplit_core::validate_bundle(&bundle).into_iter().filter(|d| d.rule == Rule::S1).collect();
    assert_eq!(diags, from_validate);
}

#[test]
fn resolve_is_idempotent() {
    let bundle = corpus_bundle("bundle_multi.acb");
    let a = resolve_links(&bundle).0.unwrap();
    let b = resolve_links(a.bundle()).0.unwrap();
    assert_eq!(a.resolutions(), b.resolutions());
}

#[test]
fn inline_matches_hand_written_monolithic_case() {
    let (resolved, _) = resolve_links(&corpus_bundle("bundle_mrgfus.acb"));
    let inlined = inline_bundle(&resolved.unwrap(), &cid("CAC-UF")).unwrap();
    assert!(validate_case(&inlined).is_empty(), "{:?}", validate_case(&inlined));
    let oracle_case = corpus_case("monolithic_mrgfus.acd");
    let normalized = normalize_case_id(inlined, oracle_case.id.clone());
    assert_eq!(canonicalize(&normalized), canonicalize(&oracle_case));
}

#[test]
fn inline_without_away_claims() {
    let mut bundle = corpus_bundle("bundle_mrgfus.acb");
    let cac = &mut bundle.cacs[0];
    for id in ["C4", "C5"] {
        let claim = cac.element_mut(&eid(id)).unwrap();
        claim.away_ref = None;
    }
    let expected = {
        let mut c = cac.clone();
        c.kind = CaseKind::Monolithic;
        c.associated_tac = None;
        c.capabilities.clear();
        c
    };
    let (resolved, _) = resolve_links(&bundle);
    let resolved = resolved.unwrap();
    assert!(resolved.resolutions().is_empty());
    let inlined = inline_bundle(&resolved, &cid("CAC-UF")).unwrap();
    assert_eq!(canonicalize(&inlined), canonicalize(&expected));
}

#[test]
fn inline_unknown_cac() {
    let (resolved, _) = resolve_links(&corpus_bundle("bundle_mrgfus.acb"));
    assert!(inline_bundle(&resolved.unwrap(), &cid("TAC-1")).is_err());
}

#[test]
fn shared_target_is_duplicated() {
    let mut bundle = corpus_bundle("bundle_mrgfus.acb");
    let cac = &mut bundle.cacs[0];
    cac.element_mut(&eid("C5")).unwrap().away_ref =
        Some(acsplit_core::AwayRef { case: cid("TAC-1"), element: eid("C2") });
    let subtree = oracle::subtree_size(&bundle.tac, &eid("C2"));
    let cac_len = bundle.cacs[0].elements.len();
    let (resolved, _) = resolve_links(&bundle);
    let inlined = inline_bundle(&resolved.unwrap(), &cid("CAC-UF")).unwrap();
    assert_eq!(inlined.elements.len(), cac_len + 2 * subtree);
    assert!(validate_case(&inlined).iter().all(|d| !d.is_error()));
}

#[test]
fn random_bundles_inline_cleanly() {
    for seed in 0..300 {
        let bundle = gen::random_valid_bundle(&mut rng(seed), 30);
        let (resolved, diags) = resolve_links(&bundle);
        assert!(!has_errors(&diags), "seed {seed}");
        let resolved = resolved.unwrap();
        for cac in &bundle.cacs {
            assert!(validate_case(cac).iter().all(|d| !d.is_error()));
            let inlined = inline_bundle(&resolved, &cac.id).unwrap();
            let expected_len: usize = cac.elements.len()
                + cac
                    .away_claims()
                    .map(|(_, away)| oracle::subtree_size(&bundle.tac, &away.element))
                    .sum::<usize>();
            assert_eq!(inlined.elements.len(), expected_len, "seed {seed}");
            let errs: Vec<_> = validate_case(&inlined).into_iter().filter(|d| d.is_error()).collect();
            assert!(errs.is_empty(), "seed {seed}: {errs:?}");
            assert!(inlined.elements.iter().all(|e| e.away_ref.is_none()));
            // undeveloped flags only where the CAC already had them on non-away claims
            for e in inlined.elements.iter().filter(|e| e.is_undeveloped) {
                let tac_copy = e.id.as_str().starts_with("TAC__");
                let original = if tac_copy {
                    bundle.tac.element(&eid(e.id.as_str().trim_start_matches("TAC__").split("__").next().unwrap()))
                } else {
                    cac.element(&e.id)
                };
                let original = original.unwrap();
                assert!(original.is_undeveloped && original.away_ref.is_none());
            }
        }
    }
}
