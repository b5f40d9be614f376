//! Change impact across the TAC/CAC boundary, and structural metrics.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::Serialize;
use thiserror::Error;

use crate::graph::CaseGraph;
use crate::link::{ElementRef, ResolvedBundle};
use crate::model::{AssuranceCase, Bundle, CaseId, ConcernKind, EdgeKind, ElementId, ElementKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImpactError {
    #[error("unknown case '{0}'")]
    UnknownCase(CaseId),
    #[error("unknown element '{1}' in case '{0}'")]
    UnknownElement(CaseId, ElementId),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ImpactReport {
    pub changed: BTreeSet<ElementRef>,
    /// One entry per case of the bundle, possibly empty.
    pub affected: BTreeMap<CaseId, BTreeSet<ElementId>>,
    pub affected_cacs: BTreeSet<CaseId>,
}

impl ImpactReport {
    pub fn is_affected(&self, case: &CaseId, element: &ElementId) -> bool {
        self.affected.get(case).is_some_and(|s| s.contains(element))
    }

    pub fn affected_count(&self) -> usize {
        self.affected.values().map(BTreeSet::len).sum()
    }
}

/// Everything that must be revisited when `changed` elements change: their
/// supportedBy/inContextOf ancestors, and across each resolution the
/// away-claims referring to an affected target together with their own
/// ancestors.
pub fn impact(resolved: &ResolvedBundle, changed: &BTreeSet<ElementRef>) -> Result<ImpactReport, ImpactError> {
    let bundle = resolved.bundle();
    let cases: Vec<&AssuranceCase> = bundle.cases().collect();
    let graphs: Vec<CaseGraph<'_>> = cases.iter().map(|c| CaseGraph::new(c)).collect();
    let position: BTreeMap<&CaseId, usize> = cases.iter().enumerate().map(|(i, c)| (&c.id, i)).collect();

    let mut marked: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cases.len()];
    let mut pending: Vec<(usize, usize)> = Vec::new();
    for (case_id, element_id) in changed {
        let c = *position.get(case_id).ok_or_else(|| ImpactError::UnknownCase(case_id.clone()))?;
        let e = graphs[c]
            .index_of(element_id)
            .ok_or_else(|| ImpactError::UnknownElement(case_id.clone(), element_id.clone()))?;
        pending.push((c, e));
    }

    // away-claims keyed by the (case, element) index of their target
    let mut referrers: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for ((claim_case, claim), (target_case, target)) in resolved.resolutions() {
        let (cc, tc) = (position[claim_case], position[target_case]);
        let (Some(ci), Some(ti)) = (graphs[cc].index_of(claim), graphs[tc].index_of(target)) else {
            continue;
        };
        referrers.entry((tc, ti)).or_default().push((cc, ci));
    }

    while let Some((c, e)) = pending.pop() {
        if marked[c].contains(&e) {
            continue;
        }
        for i in graphs[c].reverse_reach(&[e], &EdgeKind::ALL) {
            if marked[c].insert(i) {
                if let Some(claims) = referrers.get(&(c, i)) {
                    pending.extend(claims.iter().copied());
                }
            }
        }
    }

    let mut report = ImpactReport { changed: changed.clone(), ..Default::default() };
    for (c, case) in cases.iter().enumerate() {
        let ids: BTreeSet<ElementId> = marked[c].iter().map(|&i| graphs[c].id(i).clone()).collect();
        if !ids.is_empty() && c > 0 {
            report.affected_cacs.insert(case.id.clone());
        }
        report.affected.insert(case.id.clone(), ids);
    }
    Ok(report)
}

/// Parses `CASE.ELEMENT` (the first `.` splits; ids cannot contain one).
pub fn parse_element_ref(text: &str) -> Option<ElementRef> {
    let (case, element) = text.trim().split_once('.')?;
    Some((CaseId::new(case).ok()?, ElementId::new(element).ok()?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CaseMetrics {
    pub case: String,
    pub kind: &'static str,
    pub element_count: usize,
    pub elements: BTreeMap<&'static str, usize>,
    pub edge_count: usize,
    pub edges: BTreeMap<&'static str, usize>,
    pub depth: usize,
    pub undeveloped_count: usize,
    pub leaf_claims: usize,
    pub evidenced_leaf_claims: usize,
    pub evidence_coverage: f64,
    pub concerns: BTreeMap<&'static str, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Metrics {
    pub cases: Vec<CaseMetrics>,
    pub totals: CaseMetrics,
    pub cross_link_count: usize,
}

fn coverage(leaves: usize, evidenced: usize) -> f64 {
    if leaves == 0 {
        1.0
    } else {
        evidenced as f64 / leaves as f64
    }
}

type Counts = BTreeMap<&'static str, usize>;

fn empty_counts() -> (Counts, Counts, Counts) {
    (
        ElementKind::ALL.iter().map(|k| (k.keyword(), 0)).collect(),
        EdgeKind::ALL.iter().map(|k| (k.keyword(), 0)).collect(),
        ConcernKind::ALL.iter().map(|k| (k.keyword(), 0)).collect(),
    )
}

pub fn case_metrics(case: &AssuranceCase) -> CaseMetrics {
    let graph = CaseGraph::new(case);
    let (mut elements, mut edges, mut concerns) = empty_counts();
    for e in &case.elements {
        *elements.get_mut(e.kind.keyword()).unwrap() += 1;
        if let Some(c) = e.concern {
            *concerns.get_mut(c.keyword()).unwrap() += 1;
        }
    }
    for e in &case.edges {
        *edges.get_mut(e.kind.keyword()).unwrap() += 1;
    }

    let (mut leaves, mut evidenced) = (0, 0);
    for i in 0..graph.len() {
        if graph.kind(i) != ElementKind::Claim {
            continue;
        }
        let support = graph.out(i, EdgeKind::SupportedBy);
        if support.iter().any(|&c| matches!(graph.kind(c), ElementKind::Claim | ElementKind::Strategy)) {
            continue;
        }
        leaves += 1;
        if support.iter().any(|&c| graph.kind(c) == ElementKind::Evidence) {
            evidenced += 1;
        }
    }

    CaseMetrics {
        case: case.id.to_string(),
        kind: case.kind.keyword(),
        element_count: case.elements.len(),
        elements,
        edge_count: case.edges.len(),
        edges,
        depth: graph.longest_path(EdgeKind::SupportedBy),
        undeveloped_count: case.elements.iter().filter(|e| e.is_undeveloped).count(),
        leaf_claims: leaves,
        evidenced_leaf_claims: evidenced,
        evidence_coverage: coverage(leaves, evidenced),
        concerns,
    }
}

/// Sums counts; depth is the maximum, coverage is recomputed from the
/// summed leaf counts.
fn totals<'a>(label: &str, kind: &'static str, parts: impl IntoIterator<Item = &'a CaseMetrics>) -> CaseMetrics {
    let (elements, edges, concerns) = empty_counts();
    let mut t = CaseMetrics {
        case: label.to_string(),
        kind,
        element_count: 0,
        elements,
        edge_count: 0,
        edges,
        depth: 0,
        undeveloped_count: 0,
        leaf_claims: 0,
        evidenced_leaf_claims: 0,
        evidence_coverage: 1.0,
        concerns,
    };
    for m in parts {
        t.element_count += m.element_count;
        t.edge_count += m.edge_count;
        t.depth = t.depth.max(m.depth);
        t.undeveloped_count += m.undeveloped_count;
        t.leaf_claims += m.leaf_claims;
        t.evidenced_leaf_claims += m.evidenced_leaf_claims;
        for (map, other) in [(&mut t.elements, &m.elements), (&mut t.edges, &m.edges), (&mut t.concerns, &m.concerns)] {
            for (k, v) in other {
                *map.entry(k).or_insert(0) += v;
            }
        }
    }
    t.evidence_coverage = coverage(t.leaf_claims, t.evidenced_leaf_claims);
    t
}

pub fn metrics_case(case: &AssuranceCase) -> Metrics {
    let m = case_metrics(case);
    let totals = totals("total", "case", [&m]);
    Metrics { cases: vec![m], totals, cross_link_count: 0 }
}

/// Per-case metrics in bundle order (TAC first). `crossLinkCount` counts
/// CAC away-references that target the bundle's TAC.
pub fn metrics_bundle(bundle: &Bundle) -> Metrics {
    let cases: Vec<CaseMetrics> = bundle.cases().map(case_metrics).collect();
    let totals = totals("total", "bundle", &cases);
    let cross_link_count = bundle
        .cacs
        .iter()
        .flat_map(|c| c.away_claims())
        .filter(|(_, away)| away.case == bundle.tac.id)
        .count();
    Metrics { cases, totals, cross_link_count }
}

fn format_coverage(value: f64) -> String {
    format!("{:.3}", value)
}

/// Aligned plain-text table, one row per case plus a total row.
pub fn metrics_table(metrics: &Metrics) -> String {
    let header = [
        "case", "kind", "elements", "claim", "strategy", "context", "assumption", "justification",
        "evidence", "edges", "depth", "undeveloped", "coverage", "safety", "effectiveness",
    ];
    let row = |m: &CaseMetrics| -> Vec<String> {
        let mut cells = vec![m.case.clone(), m.kind.to_string(), m.element_count.to_string()];
        cells.extend(ElementKind::ALL.iter().map(|k| m.elements[k.keyword()].to_string()));
        cells.push(m.edge_count.to_string());
        cells.push(m.depth.to_string());
        cells.push(m.undeveloped_count.to_string());
        cells.push(format_coverage(m.evidence_coverage));
        cells.extend(ConcernKind::ALL.iter().map(|k| m.concerns[k.keyword()].to_string()));
        cells
    };
    let mut rows: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    rows.extend(metrics.cases.iter().map(row));
    rows.push(row(&metrics.totals));

    let widths: Vec<usize> = (0..header.len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in &rows {
        let mut line = String::new();
        for (c, cell) in r.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            if c < 2 {
                let _ = write!(line, "{cell:<w$}", w = widths[c]);
            } else {
                let _ = write!(line, "{cell:>w$}", w = widths[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    let _ = writeln!(out, "cross-links: {}", metrics.cross_link_count);
    out
}

/// `CASE.ELEMENT` lines grouped per case, for the CLI.
pub fn impact_text(report: &ImpactReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "changed: {}", join_refs(&report.changed));
    for (case, ids) in &report.affected {
        let list: Vec<&str> = ids.iter().map(ElementId::as_str).collect();
        let _ = writeln!(out, "{case}: {} affected [{}]", ids.len(), list.join(", "));
    }
    let cacs: Vec<&str> = report.affected_cacs.iter().map(CaseId::as_str).collect();
    let _ = writeln!(out, "affected clinical cases: [{}]", cacs.join(", "));
    out
}

fn join_refs(refs: &BTreeSet<ElementRef>) -> String {
    let parts: Vec<String> = refs.iter().map(|(c, e)| format!("{c}.{e}")).collect();
    format!("[{}]", parts.join(", "))
}
