//! In-memory assurance cases and bundles.
//!
//! A case is a list of GSN elements plus typed edges pointing from a parent
//! to its support or context. Values are plain data: every query in this
//! module is a pure function of its arguments.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::decimal::Decimal;
use crate::diag::SourceSpan;
use crate::graph::CaseGraph;
use crate::validate::units::UnitSymbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid identifier `{0}`")]
    InvalidId(String),
    #[error("unknown element `{0}`")]
    UnknownElement(ElementId),
    #[error("supportedBy cycle: {}", format_cycle(.0))]
    Cycle(Vec<ElementId>),
    #[error("bundle slot `{slot}` requires a {expected} case, `{case}` is {found}")]
    KindMismatch {
        slot: &'static str,
        case: CaseId,
        expected: CaseKind,
        found: CaseKind,
    },
    #[error("bundle requires at least one cac")]
    NoClinicalCase,
    #[error("duplicate case id `{0}` in bundle")]
    DuplicateCase(CaseId),
}

fn format_cycle(cycle: &[ElementId]) -> String {
    let mut parts: Vec<&str> = cycle.iter().map(ElementId::as_str).collect();
    if let Some(first) = cycle.first() {
        parts.push(first.as_str());
    }
    parts.join(" -> ")
}

pub fn is_valid_identifier(text: &str) -> bool {
    let mut chars = text.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

macro_rules! identifier {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(text: impl Into<String>) -> Result<Self, ModelError> {
                let text = text.into();
                if is_valid_identifier(&text) {
                    Ok($name(text))
                } else {
                    Err(ModelError::InvalidId(text))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl std::str::FromStr for $name {
            type Err = ModelError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                $name::new(s)
            }
        }
    };
}

identifier!(
    /// Identifier of a case, unique within a bundle.
    CaseId
);
identifier!(
    /// Identifier of an element, unique within its case.
    ElementId
);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Claim,
    Strategy,
    Context,
    Assumption,
    Justification,
    Evidence,
}

impl ElementKind {
    pub const ALL: [ElementKind; 6] = [
        ElementKind::Claim,
        ElementKind::Strategy,
        ElementKind::Context,
        ElementKind::Assumption,
        ElementKind::Justification,
        ElementKind::Evidence,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            ElementKind::Claim => "claim",
            ElementKind::Strategy => "strategy",
            ElementKind::Context => "context",
            ElementKind::Assumption => "assumption",
            ElementKind::Justification => "justification",
            ElementKind::Evidence => "evidence",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        ElementKind::ALL.into_iter().find(|k| k.keyword() == word)
    }

    /// Context, Assumption or Justification.
    pub fn is_contextual(self) -> bool {
        matches!(
            self,
            ElementKind::Context | ElementKind::Assumption | ElementKind::Justification
        )
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConcernKind {
    Safety,
    Effectiveness,
}

impl ConcernKind {
    pub const ALL: [ConcernKind; 2] = [ConcernKind::Safety, ConcernKind::Effectiveness];

    pub fn keyword(self) -> &'static str {
        match self {
            ConcernKind::Safety => "safety",
            ConcernKind::Effectiveness => "effectiveness",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        ConcernKind::ALL.into_iter().find(|k| k.keyword() == word)
    }
}

/// Target of an away-resolved claim.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AwayRef {
    pub case: CaseId,
    pub element: ElementId,
}

impl fmt::Display for AwayRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.case, self.element)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub id: ElementId,
    pub kind: ElementKind,
    pub statement: String,
    pub is_root: bool,
    pub is_public: bool,
    pub is_undeveloped: bool,
    pub is_module: bool,
    pub concern: Option<ConcernKind>,
    pub away_ref: Option<AwayRef>,
    pub span: SourceSpan,
}

impl Element {
    pub fn new(id: ElementId, kind: ElementKind, statement: impl Into<String>) -> Self {
        Element {
            id,
            kind,
            statement: statement.into(),
            is_root: false,
            is_public: false,
            is_undeveloped: false,
            is_module: false,
            concern: None,
            away_ref: None,
            span: SourceSpan::synthetic(),
        }
    }

    /// Field invariants this element breaks, as short descriptions. Empty for
    /// a well-formed element.
    pub fn flag_violations(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let claim = self.kind == ElementKind::Claim;
        if self.is_root && !claim {
            out.push("`root` is only allowed on claims");
        }
        if self.is_undeveloped && !claim {
            out.push("`undeveloped` is only allowed on claims");
        }
        if self.is_module && !claim {
            out.push("`module` is only allowed on claims");
        }
        if self.away_ref.is_some() && !claim {
            out.push("`awayref` is only allowed on claims");
        }
        if self.away_ref.is_some() && !self.is_undeveloped {
            out.push("`awayref` requires `undeveloped`");
        }
        out
    }

    /// Flags in their fixed textual order.
    pub(crate) fn flag_words(&self) -> Vec<String> {
        let mut words = Vec::new();
        if self.is_root {
            words.push("root".to_string());
        }
        if self.is_public {
            words.push("public".to_string());
        }
        if self.is_undeveloped {
            words.push("undeveloped".to_string());
        }
        if self.is_module {
            words.push("module".to_string());
        }
        if let Some(concern) = self.concern {
            words.push(format!("concern {}", concern.keyword()));
        }
        if let Some(away) = &self.away_ref {
            words.push(format!("awayref {away}"));
        }
        words
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EdgeKind {
    #[serde(rename = "supportedBy")]
    SupportedBy,
    #[serde(rename = "inContextOf")]
    InContextOf,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 2] = [EdgeKind::SupportedBy, EdgeKind::InContextOf];

    pub fn keyword(self) -> &'static str {
        match self {
            EdgeKind::SupportedBy => "supportedBy",
            EdgeKind::InContextOf => "inContextOf",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        EdgeKind::ALL.into_iter().find(|k| k.keyword() == word)
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Directed parent → child edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub source: ElementId,
    pub target: ElementId,
    pub kind: EdgeKind,
    pub span: SourceSpan,
}

impl Edge {
    pub fn new(source: ElementId, kind: EdgeKind, target: ElementId) -> Self {
        Edge { source, target, kind, span: SourceSpan::synthetic() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseKind {
    Monolithic,
    Technological,
    Clinical,
}

impl CaseKind {
    pub const ALL: [CaseKind; 3] = [CaseKind::Monolithic, CaseKind::Technological, CaseKind::Clinical];

    pub fn keyword(self) -> &'static str {
        match self {
            CaseKind::Monolithic => "monolithic",
            CaseKind::Technological => "technological",
            CaseKind::Clinical => "clinical",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        CaseKind::ALL.into_iter().find(|k| k.keyword() == word)
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Provided,
    Required,
}

impl Direction {
    /// DSL keyword introducing a capability of this direction.
    pub fn keyword(self) -> &'static str {
        match self {
            Direction::Provided => "provides",
            Direction::Required => "requires",
        }
    }

    /// The only case kind allowed to declare this direction.
    pub fn owning_kind(self) -> CaseKind {
        match self {
            Direction::Provided => CaseKind::Technological,
            Direction::Required => CaseKind::Clinical,
        }
    }
}

/// A named, unit-bearing closed interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Capability {
    pub name: String,
    pub direction: Direction,
    pub unit: UnitSymbol,
    pub low: Decimal,
    pub high: Decimal,
    pub span: SourceSpan,
}

impl Capability {
    pub fn new(
        name: impl Into<String>,
        direction: Direction,
        unit: impl Into<UnitSymbol>,
        low: Decimal,
        high: Decimal,
    ) -> Self {
        Capability {
            name: name.into(),
            direction,
            unit: unit.into(),
            low,
            high,
            span: SourceSpan::synthetic(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssuranceCase {
    pub id: CaseId,
    pub kind: CaseKind,
    pub elements: Vec<Element>,
    pub edges: Vec<Edge>,
    pub capabilities: Vec<Capability>,
    pub associated_tac: Option<CaseId>,
    /// Span of the `case` header.
    pub span: SourceSpan,
}

impl AssuranceCase {
    pub fn new(id: CaseId, kind: CaseKind) -> Self {
        AssuranceCase {
            id,
            kind,
            elements: Vec::new(),
            edges: Vec::new(),
            capabilities: Vec::new(),
            associated_tac: None,
            span: SourceSpan::synthetic(),
        }
    }

    pub fn element(&self, id: &ElementId) -> Option<&Element> {
        self.elements.iter().find(|e| &e.id == id)
    }

    pub fn element_mut(&mut self, id: &ElementId) -> Option<&mut Element> {
        self.elements.iter_mut().find(|e| &e.id == id)
    }

    pub fn element_index(&self) -> HashMap<&ElementId, &Element> {
        self.elements.iter().map(|e| (&e.id, e)).collect()
    }

    pub fn roots(&self) -> impl Iterator<Item = &Element> {
        self.elements.iter().filter(|e| e.is_root)
    }

    pub fn away_claims(&self) -> impl Iterator<Item = (&Element, &AwayRef)> {
        self.elements
            .iter()
            .filter_map(|e| e.away_ref.as_ref().map(|away| (e, away)))
    }

    /// Removes an element together with every edge touching it.
    pub fn remove_element(&mut self, id: &ElementId) -> Option<Element> {
        let pos = self.elements.iter().position(|e| &e.id == id)?;
        self.edges.retain(|e| &e.source != id && &e.target != id);
        Some(self.elements.remove(pos))
    }
}

/// One technological case plus the clinical cases that build on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub name: String,
    pub tac: AssuranceCase,
    pub cacs: Vec<AssuranceCase>,
}

impl Bundle {
    /// Checks slot kinds, case-id uniqueness and the one-cac minimum. The
    /// `associates` back-reference is left to rule S6.
    pub fn new(
        name: impl Into<String>,
        tac: AssuranceCase,
        cacs: Vec<AssuranceCase>,
    ) -> Result<Self, ModelError> {
        if tac.kind != CaseKind::Technological {
            return Err(ModelError::KindMismatch {
                slot: "tac",
                case: tac.id.clone(),
                expected: CaseKind::Technological,
                found: tac.kind,
            });
        }
        if cacs.is_empty() {
            return Err(ModelError::NoClinicalCase);
        }
        let mut seen = BTreeSet::from([tac.id.clone()]);
        for cac in &cacs {
            if cac.kind != CaseKind::Clinical {
                return Err(ModelError::KindMismatch {
                    slot: "cac",
                    case: cac.id.clone(),
                    expected: CaseKind::Clinical,
                    found: cac.kind,
                });
            }
            if !seen.insert(cac.id.clone()) {
                return Err(ModelError::DuplicateCase(cac.id.clone()));
            }
        }
        Ok(Bundle { name: name.into(), tac, cacs })
    }

    /// The TAC first, then the CACs in manifest order.
    pub fn cases(&self) -> impl Iterator<Item = &AssuranceCase> {
        std::iter::once(&self.tac).chain(self.cacs.iter())
    }

    pub fn case(&self, id: &CaseId) -> Option<&AssuranceCase> {
        self.cases().find(|c| &c.id == id)
    }

    pub fn cac(&self, id: &CaseId) -> Option<&AssuranceCase> {
        self.cacs.iter().find(|c| &c.id == id)
    }
}

/// Targets of `node`'s outgoing edges of `kind`, in declaration order.
pub fn children(
    case: &AssuranceCase,
    node: &ElementId,
    kind: EdgeKind,
) -> Result<Vec<ElementId>, ModelError> {
    if case.element(node).is_none() {
        return Err(ModelError::UnknownElement(node.clone()));
    }
    Ok(case
        .edges
        .iter()
        .filter(|e| &e.source == node && e.kind == kind)
        .map(|e| e.target.clone())
        .collect())
}

/// Every element from which `node` is reachable along supportedBy edges,
/// excluding `node` itself. Fails if a cycle lies on any such path.
pub fn ancestors(case: &AssuranceCase, node: &ElementId) -> Result<BTreeSet<ElementId>, ModelError> {
    let graph = CaseGraph::new(case);
    let start = graph
        .index_of(node)
        .ok_or_else(|| ModelError::UnknownElement(node.clone()))?;
    let reached = graph.reverse_reach(&[start], &[EdgeKind::SupportedBy]);
    let mut region = reached.clone();
    region.insert(start);
    if let Some(cycle) = graph.find_cycle_within(EdgeKind::SupportedBy, &region) {
        return Err(ModelError::Cycle(cycle.into_iter().map(|i| graph.id(i).clone()).collect()));
    }
    Ok(reached
        .into_iter()
        .filter(|&i| i != start)
        .map(|i| graph.id(i).clone())
        .collect())
}

pub(crate) fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Order-independent serialization: two cases are structurally identical
/// iff their canonical texts are byte-equal. Spans are not part of it.
pub fn canonicalize(case: &AssuranceCase) -> String {
    use std::fmt::Write;

    let mut out = String::new();
    let _ = writeln!(out, "case {} kind {}", case.id, case.kind);
    if let Some(tac) = &case.associated_tac {
        let _ = writeln!(out, "associates {tac}");
    }

    let mut capabilities: Vec<&Capability> = case.capabilities.iter().collect();
    capabilities.sort_by(|a, b| {
        (a.direction, &a.name, a.unit.as_str(), &a.low, &a.high)
            .cmp(&(b.direction, &b.name, b.unit.as_str(), &b.low, &b.high))
    });
    for c in capabilities {
        let _ = writeln!(
            out,
            "capability {} {} unit {} range [{}, {}]",
            c.direction.keyword(),
            c.name,
            c.unit,
            c.low,
            c.high
        );
    }

    let mut elements: Vec<&Element> = case.elements.iter().collect();
    elements.sort_by(|a, b| a.id.cmp(&b.id));
    for e in elements {
        let _ = write!(out, "element {} {} {}", e.id, e.kind, quote(&e.statement));
        for word in e.flag_words() {
            let _ = write!(out, " {word}");
        }
        out.push('\n');
    }

    let mut edges: Vec<&Edge> = case.edges.iter().collect();
    edges.sort_by(|a, b| (&a.source, a.kind, &a.target).cmp(&(&b.source, b.kind, &b.target)));
    for e in edges {
        let _ = writeln!(out, "edge {} {} {}", e.source, e.kind, e.target);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> ElementId {
        ElementId::new(s).unwrap()
    }

    fn chain_case() -> AssuranceCase {
        let mut case = AssuranceCase::new(CaseId::new("T").unwrap(), CaseKind::Monolithic);
        let mut root = Element::new(id("C1"), ElementKind::Claim, "top");
        root.is_root = true;
        case.elements.push(root);
        case.elements.push(Element::new(id("S"), ElementKind::Strategy, "s"));
        case.elements.push(Element::new(id("C2"), ElementKind::Claim, "c2"));
        case.elements.push(Element::new(id("E1"), ElementKind::Evidence, "e"));
        case.elements.push(Element::new(id("X"), ElementKind::Context, "x"));
        case.edges.push(Edge::new(id("C1"), EdgeKind::SupportedBy, id("S")));
        case.edges.push(Edge::new(id("S"), EdgeKind::SupportedBy, id("C2")));
        case.edges.push(Edge::new(id("C2"), EdgeKind::SupportedBy, id("E1")));
        case.edges.push(Edge::new(id("C1"), EdgeKind::InContextOf, id("X")));
        case
    }

    #[test]
    fn identifiers_follow_the_token_pattern() {
        assert!(ElementId::new("TAC-1__C2").is_ok());
        assert!(ElementId::new("W_per_cm2").is_ok());
        for bad in ["", "1C", "_a", "a.b", "a b", "ä"] {
            assert!(ElementId::new(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn children_in_declaration_order() {
        let case = chain_case();
        assert_eq!(children(&case, &id("C1"), EdgeKind::SupportedBy).unwrap(), vec![id("S")]);
        assert_eq!(children(&case, &id("C1"), EdgeKind::InContextOf).unwrap(), vec![id("X")]);
        assert!(children(&case, &id("E1"), EdgeKind::SupportedBy).unwrap().is_empty());
        assert_eq!(
            children(&case, &id("nope"), EdgeKind::SupportedBy),
            Err(ModelError::UnknownElement(id("nope")))
        );
    }

    #[test]
    fn ancestors_follow_supported_by_only() {
        let case = chain_case();
        let got = ancestors(&case, &id("E1")).unwrap();
        assert_eq!(got, BTreeSet::from([id("C1"), id("S"), id("C2")]));
        assert!(ancestors(&case, &id("X")).unwrap().is_empty());
        assert!(ancestors(&case, &id("C1")).unwrap().is_empty());
    }

    #[test]
    fn ancestors_reports_a_cycle() {
        let mut case = chain_case();
        case.edges.push(Edge::new(id("C2"), EdgeKind::SupportedBy, id("C1")));
        match ancestors(&case, &id("E1")) {
            Err(ModelError::Cycle(cycle)) => {
                assert_eq!(cycle.len(), 3);
                assert!(cycle.contains(&id("C1")));
            }
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn canonical_text_ignores_declaration_order() {
        let a = chain_case();
        let mut b = chain_case();
        b.elements.reverse();
        b.edges.reverse();
        assert_eq!(canonicalize(&a), canonicalize(&b));
        let mut c = chain_case();
        c.elements[2].statement.push('!');
        assert_ne!(canonicalize(&a), canonicalize(&c));
    }

    #[test]
    fn flag_violations_cover_kind_restrictions() {
        let mut s = Element::new(id("S"), ElementKind::Strategy, "s");
        s.is_undeveloped = true;
        assert_eq!(s.flag_violations(), vec!["`undeveloped` is only allowed on claims"]);
        let mut c = Element::new(id("C"), ElementKind::Claim, "c");
        c.away_ref = Some(AwayRef { case: CaseId::new("T").unwrap(), element: id("C2") });
        assert_eq!(c.flag_violations(), vec!["`awayref` requires `undeveloped`"]);
        c.is_undeveloped = true;
        assert!(c.flag_violations().is_empty());
    }

    #[test]
    fn bundle_requires_a_clinical_case() {
        let tac = AssuranceCase::new(CaseId::new("T").unwrap(), CaseKind::Technological);
        assert_eq!(Bundle::new("b", tac, vec![]), Err(ModelError::NoClinicalCase));
    }
}
