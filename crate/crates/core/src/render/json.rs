use std::collections::BTreeMap;

use serde::Serialize;

use crate::analyze::{ImpactReport, Metrics};
use crate::decimal::Decimal;
use crate::diag::Diagnostic;
use crate::model::{CaseId, Capability};
use crate::validate::capability::MatchResult;

/// The sections of a JSON report; absent sections are omitted.
#[derive(Debug, Clone, Copy, Default)]
pub struct Report<'a> {
    pub diagnostics: Option<&'a [Diagnostic]>,
    pub capabilities: Option<&'a [(CaseId, MatchResult)]>,
    pub metrics: Option<&'a Metrics>,
    pub impact: Option<&'a ImpactReport>,
}

#[derive(Serialize)]
struct ElementRefJson<'a> {
    case: &'a str,
    element: &'a str,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DiagnosticJson<'a> {
    rule_id: &'static str,
    severity: &'static str,
    file: &'a str,
    line: u32,
    column: u32,
    message: &'a str,
    elements: Vec<ElementRefJson<'a>>,
}

#[derive(Serialize)]
struct CapabilityJson<'a> {
    name: &'a str,
    unit: &'a str,
    low: &'a Decimal,
    high: &'a Decimal,
}

impl<'a> From<&'a Capability> for CapabilityJson<'a> {
    fn from(c: &'a Capability) -> Self {
        CapabilityJson { name: &c.name, unit: c.unit.as_str(), low: &c.low, high: &c.high }
    }
}

#[derive(Serialize)]
struct MatchJson<'a> {
    case: &'a str,
    required: CapabilityJson<'a>,
    status: &'static str,
    provider: Option<CapabilityJson<'a>>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ImpactJson<'a> {
    changed: Vec<ElementRefJson<'a>>,
    affected: BTreeMap<&'a str, Vec<&'a str>>,
    affected_cacs: Vec<&'a str>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostics: Option<Vec<DiagnosticJson<'a>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    capabilities: Option<Vec<MatchJson<'a>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metrics: Option<&'a Metrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    impact: Option<ImpactJson<'a>>,
}

fn diagnostic(d: &Diagnostic) -> DiagnosticJson<'_> {
    DiagnosticJson {
        rule_id: d.rule.id(),
        severity: d.severity.as_str(),
        file: &d.span.file,
        line: d.span.line,
        column: d.span.column,
        message: &d.message,
        elements: d
            .elements
            .iter()
            .map(|(c, e)| ElementRefJson { case: c.as_str(), element: e.as_str() })
            .collect(),
    }
}

fn impact(report: &ImpactReport) -> ImpactJson<'_> {
    ImpactJson {
        changed: report
            .changed
            .iter()
            .map(|(c, e)| ElementRefJson { case: c.as_str(), element: e.as_str() })
            .collect(),
        affected: report
            .affected
            .iter()
            .map(|(c, ids)| (c.as_str(), ids.iter().map(|e| e.as_str()).collect()))
            .collect(),
        affected_cacs: report.affected_cacs.iter().map(CaseId::as_str).collect(),
    }
}

/// One pretty-printed JSON document, keys in the order `diagnostics`,
/// `capabilities`, `metrics`, `impact`, terminated by a newline.
pub fn report_json(report: &Report<'_>) -> String {
    let doc = ReportJson {
        diagnostics: report.diagnostics.map(|ds| ds.iter().map(diagnostic).collect()),
        capabilities: report.capabilities.map(|rs| {
            rs.iter()
                .map(|(case, r)| MatchJson {
                    case: case.as_str(),
                    required: (&r.required).into(),
                    status: r.status.as_str(),
                    provider: r.matched_provider.as_ref().map(Into::into),
                })
                .collect()
        }),
        metrics: report.metrics,
        impact: report.impact.map(impact),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diag::{Rule, SourceSpan};
    use crate::model::ElementId;

    #[test]
    fn empty_diagnostics() {
        let text = report_json(&Report { diagnostics: Some(&[]), ..Default::default() });
        assert_eq!(text, "{\n  \"diagnostics\": []\n}\n");
        assert_eq!(report_json(&Report::default()), "{}\n");
    }

    #[test]
    fn diagnostic_entry() {
        let d = Diagnostic::new(Rule::S1, SourceSpan::new("t.acd", 3, 5, 1), "bad")
            .with_element(&CaseId::new("T").unwrap(), &ElementId::new("C9").unwrap());
        let text = report_json(&Report { diagnostics: Some(std::slice::from_ref(&d)), ..Default::default() });
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let entry = &v["diagnostics"][0];
        assert_eq!(entry["ruleId"], "S1");
        assert_eq!(entry["severity"], "error");
        assert_eq!(entry["file"], "t.acd");
        assert_eq!(entry["line"], 3);
        assert_eq!(entry["column"], 5);
        assert_eq!(entry["elements"][0]["element"], "C9");
    }
}
