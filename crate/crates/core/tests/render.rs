mod common;

use acsplit_core::analyze::metrics_bundle;
use acsplit_core::testkit::{gen, rng};
use acsplit_core::validate::{capability_report, validate_bundle_full};
use acsplit_core::{report_json, resolve_links, to_dot, RenderOptions, Report, UnitTable};
use common::*;

#[test]
fn tac_diagram() {
    let dot = to_dot(&corpus_case("tac_mrgfus.acd"), &RenderOptions::default());
    assert_eq!(dot.matches("shape=parallelogram").count(), 1);
    assert!(dot.contains("\"S\" [label=\"S\\n"));
    let contexts: Vec<&str> = dot.lines().filter(|l| l.contains("style=\"rounded\"")).collect();
    assert_eq!(contexts.len(), 3);
    for x in ["\"Xa\"", "\"Xb\"", "\"Xc\""] {
        assert!(contexts.iter().any(|l| l.trim_start().starts_with(x)));
    }
    assert_eq!(dot.matches("shape=tab").count(), 2);
}

#[test]
fn node_count_equals_element_count() {
    for seed in 0..100 {
        let case = gen::random_case(&mut rng(seed), 20);
        let dot = to_dot(&case, &RenderOptions::default());
        let nodes = dot.lines().filter(|l| l.contains(" [label=")).count();
        assert_eq!(nodes, case.elements.len());
        for e in &case.elements {
            assert!(dot.contains(&format!("    \"{}\" [label=", e.id)));
        }
    }
}

#[test]
fn bundle_diagram() {
    let (resolved, _) = resolve_links(&corpus_bundle("bundle_multi.acb"));
    let resolved = resolved.unwrap();
    let dot = to_dot(&resolved, &RenderOptions::default());
    assert_eq!(dot.matches("subgraph \"cluster_").count(), 3);
    assert_eq!(dot.matches("[style=dashed]").count(), 4);
    assert!(dot.contains("\"CAC-UF.C4\" -> \"TAC-1.C2\" [style=dashed];"));
    assert_eq!(dot.matches("◇").count(), 4);
    assert_eq!(dot, to_dot(&resolved, &RenderOptions::default()));
}

#[test]
fn json_report_round_trips() {
    let bundle = corpus_bundle("bad_s1.acb");
    let units = UnitTable::builtin();
    let diagnostics = validate_bundle_full(&bundle, &units);
    let capabilities = capability_report(&bundle, &units);
    let metrics = metrics_bundle(&bundle);
    let text = report_json(&Report {
        diagnostics: Some(&diagnostics),
        capabilities: Some(&capabilities),
        metrics: Some(&metrics),
        impact: None,
    });
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    assert_eq!(keys, ["diagnostics", "capabilities", "metrics"]);
    assert_eq!(value["diagnostics"][0]["ruleId"], "S1");
    assert_eq!(value["diagnostics"][0]["severity"], "error");
    assert_eq!(value["capabilities"].as_array().unwrap().len(), 4);
    // decimals are bare numbers written as declared
    assert_eq!(value["capabilities"][1]["required"]["name"], "sonication_frequency");
    assert_eq!(value["capabilities"][1]["required"]["low"].to_string(), "950");
    assert_eq!(value["capabilities"][1]["provider"]["unit"], "MHz");
    let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&value).unwrap()).unwrap();
    assert_eq!(value, again);
}
