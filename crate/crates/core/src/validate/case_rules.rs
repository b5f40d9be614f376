use std::collections::BTreeSet;

use crate::diag::{Diagnostic, Rule};
use crate::graph::CaseGraph;
use crate::model::{AssuranceCase, EdgeKind, ElementKind};
use crate::validate::units::UnitTable;

pub(super) fn check(case: &AssuranceCase, units: &UnitTable) -> Vec<Diagnostic> {
    let graph = CaseGraph::new(case);
    let mut out = Vec::new();
    root_rule(case, &mut out);
    acyclic_rule(case, &graph, &mut out);
    edge_rules(case, &graph, &mut out);
    leaf_rule(case, &graph, &mut out);
    reachability_rule(case, &graph, &mut out);
    strategy_rule(case, &graph, &mut out);
    unit_rule(case, units, &mut out);
    out
}

fn root_rule(case: &AssuranceCase, out: &mut Vec<Diagnostic>) {
    let roots: Vec<_> = case
        .elements
        .iter()
        .filter(|e| e.is_root && e.kind == ElementKind::Claim)
        .collect();
    match roots.as_slice() {
        [_] => {}
        [] => out.push(Diagnostic::new(
            Rule::G1,
            case.span.clone(),
            format!("case '{}' has no root claim", case.id),
        )),
        [_, second, ..] => {
            let names: Vec<&str> = roots.iter().map(|e| e.id.as_str()).collect();
            let mut d = Diagnostic::new(
                Rule::G1,
                second.span.clone(),
                format!("case '{}' has {} root claims ({}); exactly one is allowed", case.id, roots.len(), names.join(", ")),
            );
            for r in &roots {
                d = d.with_element(&case.id, &r.id);
            }
            out.push(d);
        }
    }
}

fn acyclic_rule(case: &AssuranceCase, graph: &CaseGraph<'_>, out: &mut Vec<Diagnostic>) {
    for component in graph.cyclic_components(EdgeKind::SupportedBy) {
        let region: BTreeSet<usize> = component.iter().copied().collect();
        let cycle = graph
            .find_cycle_within(EdgeKind::SupportedBy, &region)
            .expect("cyclic component contains a cycle");
        let mut path: Vec<&str> = cycle.iter().map(|&i| graph.id(i).as_str()).collect();
        path.push(graph.id(cycle[0]).as_str());
        let anchor = component
            .iter()
            .map(|&i| &case.elements[i])
            .min_by(|a, b| (a.span.line, a.span.column).cmp(&(b.span.line, b.span.column)))
            .unwrap();
        let mut d = Diagnostic::new(
            Rule::G2,
            anchor.span.clone(),
            format!("supportedBy cycle: {}", path.join(" -> ")),
        );
        for &i in &cycle {
            d = d.with_element(&case.id, graph.id(i));
        }
        out.push(d);
    }
}

fn edge_rules(case: &AssuranceCase, graph: &CaseGraph<'_>, out: &mut Vec<Diagnostic>) {
    use ElementKind::*;
    for edge in &case.edges {
        let rule = match edge.kind {
            EdgeKind::SupportedBy => Rule::G3,
            EdgeKind::InContextOf => Rule::G4,
        };
        let label = format!("'{} {} {}'", edge.source, edge.kind, edge.target);
        let (Some(s), Some(t)) = (graph.index_of(&edge.source), graph.index_of(&edge.target)) else {
            out.push(Diagnostic::new(rule, edge.span.clone(), format!("edge {label} names an unknown element")));
            continue;
        };
        let (sk, tk) = (graph.kind(s), graph.kind(t));
        let problem = match edge.kind {
            EdgeKind::SupportedBy => {
                if sk == Evidence {
                    Some("evidence has no outgoing edges".to_string())
                } else if !matches!(sk, Claim | Strategy) {
                    Some(format!("a {sk} cannot be supported"))
                } else if !matches!(tk, Claim | Strategy | Evidence) {
                    Some(format!("a {tk} cannot support; use inContextOf"))
                } else if sk == Strategy && tk != Claim {
                    Some(format!("a strategy is supported by claims only, not a {tk}"))
                } else {
                    None
                }
            }
            EdgeKind::InContextOf => {
                if sk == Evidence {
                    Some("evidence has no outgoing edges".to_string())
                } else if !matches!(sk, Claim | Strategy) {
                    Some(format!("a {sk} cannot take context"))
                } else if !tk.is_contextual() {
                    Some(format!("a {tk} cannot be context; expected context, assumption or justification"))
                } else {
                    None
                }
            }
        };
        if let Some(problem) = problem {
            out.push(
                Diagnostic::new(rule, edge.span.clone(), format!("edge {label}: {problem}"))
                    .with_element(&case.id, &edge.source)
                    .with_element(&case.id, &edge.target),
            );
        }
    }
}

fn leaf_rule(case: &AssuranceCase, graph: &CaseGraph<'_>, out: &mut Vec<Diagnostic>) {
    for (i, element) in case.elements.iter().enumerate() {
        if element.kind != ElementKind::Claim || graph.index_of(&element.id) != Some(i) {
            continue;
        }
        let support = graph.out(i, EdgeKind::SupportedBy);
        let is_leaf = support
            .iter()
            .all(|&c| !matches!(graph.kind(c), ElementKind::Claim | ElementKind::Strategy));
        if !is_leaf {
            continue;
        }
        let has_evidence = support.iter().any(|&c| graph.kind(c) == ElementKind::Evidence);
        if !(has_evidence || element.is_undeveloped || element.away_ref.is_some()) {
            out.push(
                Diagnostic::new(
                    Rule::G5,
                    element.span.clone(),
                    format!("leaf claim '{}' has no evidence and is not marked undeveloped", element.id),
                )
                .with_element(&case.id, &element.id),
            );
        }
    }
}

fn reachability_rule(case: &AssuranceCase, graph: &CaseGraph<'_>, out: &mut Vec<Diagnostic>) {
    let roots: Vec<usize> = (0..graph.len())
        .filter(|&i| case.elements[i].is_root && graph.index_of(graph.id(i)) == Some(i))
        .collect();
    if roots.is_empty() {
        return;
    }
    let reached = graph.forward_reach(&roots, &EdgeKind::ALL);
    for (i, element) in case.elements.iter().enumerate() {
        if !reached.contains(&i) && graph.index_of(&element.id) == Some(i) {
            out.push(
                Diagnostic::new(
                    Rule::G6,
                    element.span.clone(),
                    format!("{} '{}' is not reachable from the root claim", element.kind, element.id),
                )
                .with_element(&case.id, &element.id),
            );
        }
    }
}

fn strategy_rule(case: &AssuranceCase, graph: &CaseGraph<'_>, out: &mut Vec<Diagnostic>) {
    for (i, element) in case.elements.iter().enumerate() {
        if element.kind == ElementKind::Strategy
            && graph.index_of(&element.id) == Some(i)
            && graph.out(i, EdgeKind::SupportedBy).is_empty()
        {
            out.push(
                Diagnostic::new(
                    Rule::G7,
                    element.span.clone(),
                    format!("strategy '{}' has no supportedBy children", element.id),
                )
                .with_element(&case.id, &element.id),
            );
        }
    }
}

fn unit_rule(case: &AssuranceCase, units: &UnitTable, out: &mut Vec<Diagnostic>) {
    for cap in &case.capabilities {
        if !units.contains(&cap.unit) {
            out.push(Diagnostic::new(
                Rule::U1,
                cap.span.clone(),
                format!("capability '{}' uses unknown unit '{}'", cap.name, cap.unit),
            ));
        }
    }
}
