//! Cross-case reference resolution and inlining of a bundle into a single
//! monolithic case.
//!
//! Inlined copies of technological-case elements are named
//! `<tacId>__<elementId>`. When the same element is copied more than once
//! (two away-claims reaching it) the later copies are named
//! `<tacId>__<elementId>__2`, `__3`, ... in resolution order; the suffix is
//! also bumped past any id the clinical case already uses.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::diag::{has_errors, sort_diagnostics, Diagnostic};
use crate::graph::CaseGraph;
use crate::model::{AssuranceCase, Bundle, CaseId, CaseKind, Edge, EdgeKind, ElementId};
use crate::validate::reference_rules;

pub type ElementRef = (CaseId, ElementId);

/// A bundle whose away-references all resolve to public claims of its
/// technological case. Only [`resolve_links`] builds one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedBundle {
    bundle: Bundle,
    resolutions: BTreeMap<ElementRef, ElementRef>,
}

impl ResolvedBundle {
    pub fn bundle(&self) -> &Bundle {
        &self.bundle
    }

    /// Away-claim → technological-case target, for every clinical case.
    pub fn resolutions(&self) -> &BTreeMap<ElementRef, ElementRef> {
        &self.resolutions
    }

    /// Away-claims resolving to `target`, in key order.
    pub fn referrers<'a>(&'a self, target: &'a ElementRef) -> impl Iterator<Item = &'a ElementRef> + 'a {
        self.resolutions
            .iter()
            .filter(move |(_, t)| *t == target)
            .map(|(claim, _)| claim)
    }
}

/// Resolves every clinical-case away-reference. Fails (diagnostics only)
/// when rule S1, S2 or S5 reports an error; warnings from those rules are
/// returned either way.
pub fn resolve_links(bundle: &Bundle) -> (Option<ResolvedBundle>, Vec<Diagnostic>) {
    let mut diagnostics = reference_rules(bundle);
    sort_diagnostics(&mut diagnostics);
    if has_errors(&diagnostics) {
        return (None, diagnostics);
    }
    let mut resolutions = BTreeMap::new();
    for cac in &bundle.cacs {
        for (claim, away) in cac.away_claims() {
            resolutions.insert(
                (cac.id.clone(), claim.id.clone()),
                (away.case.clone(), away.element.clone()),
            );
        }
    }
    let resolved = ResolvedBundle { bundle: bundle.clone(), resolutions };
    (Some(resolved), diagnostics)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InlineError {
    #[error("no clinical case '{0}' in the bundle")]
    UnknownCase(CaseId),
}

struct CopyNamer {
    tac: String,
    used: HashSet<String>,
    copies: HashMap<ElementId, usize>,
}

impl CopyNamer {
    fn next(&mut self, original: &ElementId) -> ElementId {
        let count = self.copies.entry(original.clone()).or_insert(0);
        loop {
            *count += 1;
            let candidate = if *count == 1 {
                format!("{}__{}", self.tac, original)
            } else {
                format!("{}__{}__{}", self.tac, original, count)
            };
            if self.used.insert(candidate.clone()) {
                return ElementId::new(candidate).expect("prefixed ids stay valid identifiers");
            }
        }
    }
}

/// Builds the monolithic view of one clinical case: each away-claim gets
/// the technological subtree (supportedBy and inContextOf descendants) of
/// its target hung beneath it, and loses its `undeveloped`/`awayref` flags.
pub fn inline_bundle(resolved: &ResolvedBundle, cac_id: &CaseId) -> Result<AssuranceCase, InlineError> {
    let bundle = &resolved.bundle;
    let cac = bundle.cac(cac_id).ok_or_else(|| InlineError::UnknownCase(cac_id.clone()))?;
    let tac = &bundle.tac;
    let graph = CaseGraph::new(tac);

    let mut out = cac.clone();
    out.kind = CaseKind::Monolithic;
    out.associated_tac = None;
    out.capabilities.clear();

    let mut namer = CopyNamer {
        tac: tac.id.to_string(),
        used: cac.elements.iter().map(|e| e.id.to_string()).collect(),
        copies: HashMap::new(),
    };

    for ((claim_case, claim_id), (_, target_id)) in &resolved.resolutions {
        if claim_case != cac_id {
            continue;
        }
        let claim = out.element_mut(claim_id).expect("resolution keys name existing claims");
        claim.is_undeveloped = false;
        claim.away_ref = None;

        let start = graph.index_of(target_id).expect("resolved targets exist");
        let reach = graph.forward_reach(&[start], &EdgeKind::ALL);
        let mut renamed: HashMap<&ElementId, ElementId> = HashMap::new();
        for &i in &reach {
            let original = &tac.elements[i];
            let mut copy = original.clone();
            copy.id = namer.next(&original.id);
            copy.is_root = false;
            copy.is_public = false;
            copy.away_ref = None;
            renamed.insert(&original.id, copy.id.clone());
            out.elements.push(copy);
        }

        let mut link = Edge::new(claim_id.clone(), EdgeKind::SupportedBy, renamed[target_id].clone());
        link.span = out.element(claim_id).map(|c| c.span.clone()).unwrap_or_default();
        out.edges.push(link);
        for edge in &tac.edges {
            if let (Some(s), Some(t)) = (renamed.get(&edge.source), renamed.get(&edge.target)) {
                let mut copy = edge.clone();
                copy.source = s.clone();
                copy.target = t.clone();
                out.edges.push(copy);
            }
        }
    }
    Ok(out)
}

/// Sets the case id; the one normalization applied before comparing an
/// inlined case with a hand-written monolithic case.
pub fn normalize_case_id(mut case: AssuranceCase, id: CaseId) -> AssuranceCase {
    case.id = id;
    case
}
