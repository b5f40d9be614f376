mod common;

use acsplit_core::diag::{has_errors, Rule, Severity};
use acsplit_core::validate::validate_bundle_full;
use acsplit_core::{validate_bundle, validate_case, AwayRef, Bundle, Capability, Direction, MatchStatus, UnitTable};
use common::*;

fn errors(bundle: &Bundle) -> Vec<(Rule, Vec<(String, String)>)> {
    validate_bundle_full(bundle, &UnitTable::builtin())
        .into_iter()
        .filter(|d| d.severity == Severity::Error)
        .map(|d| (d.rule, d.elements.iter().map(|(c, e)| (c.to_string(), e.to_string())).collect()))
        .collect()
}

#[test]
fn corpus_is_clean() {
    for name in ["tac_mrgfus.acd", "cac_uterine_fibroids.acd", "cac_pancreatic_cancer.acd", "monolithic_mrgfus.acd"] {
        assert!(validate_case(&corpus_case(name)).is_empty(), "{name}");
    }
    for name in ["bundle_mrgfus.acb", "bundle_multi.acb"] {
        assert!(validate_bundle_full(&corpus_bundle(name), &UnitTable::builtin()).is_empty(), "{name}");
    }
}

#[test]
fn tac_reference_into_cac_is_one_s1() {
    let bundle = corpus_bundle("bad_s1.acb");
    assert_eq!(errors(&bundle), vec![(Rule::S1, vec![("TAC-1".into(), "C9".into())])]);
}

#[test]
fn tac_reference_elsewhere_is_a_warning() {
    let mut bundle = corpus_bundle("bundle_mrgfus.acb");
    let claim = bundle.tac.element_mut(&eid("C2-1")).unwrap();
    claim.is_undeveloped = true;
    claim.away_ref = Some(AwayRef { case: cid("OTHER"), element: eid("C1") });
    let diags: Vec<_> = validate_bundle(&bundle).into_iter().filter(|d| d.rule == Rule::S1).collect();
    assert_eq!(diags.len(), 1, "{diags:?}");
    assert_eq!(diags[0].severity, Severity::Warning);
}

#[test]
fn cac_reference_to_other_case_is_one_s2() {
    let mut bundle = corpus_bundle("bundle_multi.acb");
    let uf = bundle.cacs.iter_mut().find(|c| c.id.as_str() == "CAC-UF").unwrap();
    uf.element_mut(&eid("C4")).unwrap().away_ref = Some(AwayRef { case: cid("CAC-PC"), element: eid("C2") });
    assert_eq!(errors(&bundle), vec![(Rule::S2, vec![("CAC-UF".into(), "C4".into())])]);
}

#[test]
fn removing_c4_context_is_one_s3() {
    let mut bundle = corpus_bundle("bundle_mrgfus.acb");
    bundle.cacs[0].remove_element(&eid("X4")).unwrap();
    assert_eq!(errors(&bundle), vec![(Rule::S3, vec![("CAC-UF".into(), "C4".into())])]);
}

#[test]
fn s3_wants_a_context_not_an_assumption() {
    let mut bundle = corpus_bundle("bundle_mrgfus.acb");
    bundle.cacs[0].element_mut(&eid("X4")).unwrap().kind = acsplit_core::ElementKind::Assumption;
    assert_eq!(errors(&bundle), vec![(Rule::S3, vec![("CAC-UF".into(), "C4".into())])]);
}

#[test]
fn missing_capability_is_s4() {
    let mut bundle = corpus_bundle("bundle_mrgfus.acb");
    bundle.cacs[0].capabilities.push(Capability::new(
        "cavitation_index",
        Direction::Required,
        "W",
        "0".parse().unwrap(),
        "1".parse().unwrap(),
    ));
    let diags = validate_bundle(&bundle);
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0].rule, Rule::S4);
    assert!(diags[0].message.contains(MatchStatus::Missing.as_str()));
}

#[test]
fn corpus_capabilities_all_satisfied() {
    let bundle = corpus_bundle("bundle_multi.acb");
    let report = acsplit_core::validate::capability_report(&bundle, &UnitTable::builtin());
    assert_eq!(report.len(), 7);
    assert!(report.iter().all(|(_, r)| r.status == MatchStatus::Satisfied));
}

#[test]
fn s5_target_checks() {
    for (target, reason) in [("Nope", "does not exist"), ("Xa", "not a claim"), ("C1", "not public")] {
        let mut bundle = corpus_bundle("bundle_mrgfus.acb");
        bundle.cacs[0].element_mut(&eid("C4")).unwrap().away_ref = Some(AwayRef { case: cid("TAC-1"), element: eid(target) });
        let diags = validate_bundle(&bundle);
        let s5: Vec<_> = diags.iter().filter(|d| d.rule == Rule::S5).collect();
        assert_eq!(s5.len(), 1, "{target}: {diags:?}");
        assert!(s5[0].message.contains(reason), "{}", s5[0].message);
    }
}

#[test]
fn s6_wrong_association() {
    let mut bundle = corpus_bundle("bundle_mrgfus.acb");
    bundle.cacs[0].associated_tac = Some(cid("TAC-2"));
    assert_eq!(errors(&bundle), vec![(Rule::S6, vec![])]);
}

#[test]
fn s7_statement_drift_warns() {
    let mut bundle = corpus_bundle("bundle_mrgfus.acb");
    bundle.cacs[0].element_mut(&eid("C4")).unwrap().statement.push_str(" (edited)");
    let diags = validate_bundle(&bundle);
    assert_eq!(diags.len(), 1);
    assert_eq!((diags[0].rule, diags[0].severity), (Rule::S7, Severity::Warning));
    assert!(!has_errors(&diags));
}

#[test]
fn validation_is_deterministic() {
    let bundle = corpus_bundle("bad_s1.acb");
    let a = validate_bundle_full(&bundle, &UnitTable::builtin());
    let b = validate_bundle_full(&bundle.clone(), &UnitTable::builtin());
    assert_eq!(a, b);
}
