use crate::diag::{Diagnostic, Rule, Severity};
use crate::model::{AssuranceCase, Bundle, CaseId, EdgeKind, ElementKind};
use crate::validate::capability::{match_capabilities, MatchResult, MatchStatus};
use crate::validate::units::UnitTable;

pub(super) fn check(bundle: &Bundle, units: &UnitTable) -> Vec<Diagnostic> {
    let mut out = reference_rules(bundle);
    documentation_rule(bundle, &mut out);
    capability_rule(bundle, units, &mut out);
    association_rule(bundle, &mut out);
    out.extend(statement_drift(bundle));
    out
}

/// S1, S2 and S5: the rules that decide whether references can be resolved.
pub(crate) fn reference_rules(bundle: &Bundle) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let tac = &bundle.tac;

    for (claim, away) in tac.away_claims() {
        let clinical = bundle.cacs.iter().any(|c| c.id == away.case);
        let d = if clinical {
            Diagnostic::new(
                Rule::S1,
                claim.span.clone(),
                format!(
                    "technological case '{}' references clinical case '{}' ({}); references may only point from clinical to technological",
                    tac.id, away.case, away
                ),
            )
        } else {
            Diagnostic::new(
                Rule::S1,
                claim.span.clone(),
                format!(
                    "technological case '{}' references '{}' outside the bundle's clinical cases; keep the technological case self-contained",
                    tac.id, away
                ),
            )
            .with_severity(Severity::Warning)
        };
        out.push(d.with_element(&tac.id, &claim.id));
    }

    for cac in &bundle.cacs {
        for (claim, away) in cac.away_claims() {
            if away.case != tac.id {
                out.push(
                    Diagnostic::new(
                        Rule::S2,
                        claim.span.clone(),
                        format!(
                            "clinical case '{}' references '{}'; clinical cases may only reference their technological case '{}'",
                            cac.id, away, tac.id
                        ),
                    )
                    .with_element(&cac.id, &claim.id),
                );
                continue;
            }
            let problem = match tac.element(&away.element) {
                None => Some(format!("'{}' does not exist in '{}'", away.element, tac.id)),
                Some(t) if t.kind != ElementKind::Claim => {
                    Some(format!("'{}' is a {}, not a claim", away, t.kind))
                }
                Some(t) if !t.is_public => Some(format!("'{}' is not public", away)),
                Some(_) => None,
            };
            if let Some(problem) = problem {
                out.push(
                    Diagnostic::new(
                        Rule::S5,
                        claim.span.clone(),
                        format!("away-claim '{}' in '{}' cannot be resolved: {problem}", claim.id, cac.id),
                    )
                    .with_element(&cac.id, &claim.id),
                );
            }
        }
    }
    out
}

fn documentation_rule(bundle: &Bundle, out: &mut Vec<Diagnostic>) {
    for case in bundle.cases() {
        for (claim, _) in case.away_claims() {
            let documented = case.edges.iter().any(|e| {
                e.source == claim.id
                    && e.kind == EdgeKind::InContextOf
                    && case.element(&e.target).is_some_and(|t| t.kind == ElementKind::Context)
            });
            if !documented {
                out.push(
                    Diagnostic::new(
                        Rule::S3,
                        claim.span.clone(),
                        format!(
                            "away-claim '{}' in '{}' has no attached context documenting what it relies on",
                            claim.id, case.id
                        ),
                    )
                    .with_element(&case.id, &claim.id),
                );
            }
        }
    }
}

fn known_units(case: &AssuranceCase, units: &UnitTable) -> Vec<crate::model::Capability> {
    case.capabilities
        .iter()
        .filter(|c| units.contains(&c.unit))
        .cloned()
        .collect()
}

/// Match results for every CAC's required capabilities against the TAC.
/// Capabilities with unknown units are left out (U1 reports them).
pub fn capability_report(bundle: &Bundle, units: &UnitTable) -> Vec<(CaseId, MatchResult)> {
    let provided = known_units(&bundle.tac, units);
    let mut report = Vec::new();
    for cac in &bundle.cacs {
        let required = known_units(cac, units);
        let results = match_capabilities(&required, &provided, units)
            .expect("unknown units were filtered out");
        report.extend(results.into_iter().map(|r| (cac.id.clone(), r)));
    }
    report
}

fn capability_rule(bundle: &Bundle, units: &UnitTable, out: &mut Vec<Diagnostic>) {
    for (cac, result) in capability_report(bundle, units) {
        if result.status == MatchStatus::Satisfied {
            continue;
        }
        let req = &result.required;
        let detail = match (&result.status, &result.matched_provider) {
            (MatchStatus::Missing, _) => format!("'{}' provides no capability named '{}'", bundle.tac.id, req.name),
            (MatchStatus::UnitMismatch, Some(p)) => format!(
                "provided in '{}', which has a different dimension than '{}'",
                p.unit, req.unit
            ),
            (MatchStatus::RangeNotCovered, Some(p)) => format!(
                "provided range [{}, {}] {} does not contain it",
                p.low, p.high, p.unit
            ),
            _ => String::new(),
        };
        out.push(Diagnostic::new(
            Rule::S4,
            req.span.clone(),
            format!(
                "required capability '{}' [{}, {}] {} of '{}' is not satisfied ({}): {detail}",
                req.name, req.low, req.high, req.unit, cac, result.status
            ),
        ));
    }
}

fn association_rule(bundle: &Bundle, out: &mut Vec<Diagnostic>) {
    for cac in &bundle.cacs {
        if cac.associated_tac.as_ref() != Some(&bundle.tac.id) {
            let named = cac
                .associated_tac
                .as_ref()
                .map(|t| format!("'{t}'"))
                .unwrap_or_else(|| "nothing".to_string());
            out.push(Diagnostic::new(
                Rule::S6,
                cac.span.clone(),
                format!(
                    "clinical case '{}' associates {named} but the bundle's technological case is '{}'",
                    cac.id, bundle.tac.id
                ),
            ));
        }
    }
}

fn normalized(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// S7: away-claims whose statement differs from the TAC claim they resolve to.
fn statement_drift(bundle: &Bundle) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for cac in &bundle.cacs {
        for (claim, away) in cac.away_claims() {
            if away.case != bundle.tac.id {
                continue;
            }
            let Some(target) = bundle.tac.element(&away.element) else { continue };
            if normalized(&target.statement) != normalized(&claim.statement) {
                out.push(
                    Diagnostic::new(
                        Rule::S7,
                        claim.span.clone(),
                        format!("statement of away-claim '{}' differs from its target '{}'", claim.id, away),
                    )
                    .with_element(&cac.id, &claim.id)
                    .with_element(&bundle.tac.id, &target.id),
                );
            }
        }
    }
    out
}
