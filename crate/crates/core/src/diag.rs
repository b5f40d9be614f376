//! Diagnostics shared by the parser, the rule engine and the linker.
//!
//! Every diagnostic names a rule from [`Rule`]; the catalog returned by
//! [`Rule::catalog`] is the single list of rule ids, default severities and
//! descriptions (it is what `RULES.md` documents).

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::model::{CaseId, ElementId};

/// A position in a source file. Line and column are 1-based; the column
/// counts Unicode scalar values. `length` is in characters and may be zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct SourceSpan {
    pub file: String,
    pub line: u32,
    pub column: u32,
    pub length: u32,
}

impl SourceSpan {
    pub fn new(file: impl Into<String>, line: u32, column: u32, length: u32) -> Self {
        let (line, column) = (line.max(1), column.max(1));
        SourceSpan { file: file.into(), line, column, length }
    }

    /// Span used for values built in memory rather than parsed.
    pub fn synthetic() -> Self {
        SourceSpan { file: String::new(), line: 1, column: 1, length: 0 }
    }

    fn sort_key(&self) -> (&str, u32, u32) {
        (&self.file, self.line, self.column)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

macro_rules! rules {
    ($( $variant:ident => $severity:ident, $description:literal; )*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Rule {
            $( $variant, )*
        }

        impl Rule {
            pub const ALL: &'static [Rule] = &[ $( Rule::$variant, )* ];

            pub fn id(self) -> &'static str {
                match self {
                    $( Rule::$variant => stringify!($variant), )*
                }
            }

            pub fn default_severity(self) -> Severity {
                match self {
                    $( Rule::$variant => Severity::$severity, )*
                }
            }

            pub fn description(self) -> &'static str {
                match self {
                    $( Rule::$variant => $description, )*
                }
            }
        }
    };
}

rules! {
    L1 => Error, "Lexical error: a character or literal that cannot start any token.";
    P0 => Error, "Syntax error: unexpected token; the expected set is listed.";
    P1 => Error, "Duplicate declaration: element id repeated within a case (Error), or an edge declared twice (Warning, the repeat is dropped).";
    P2 => Error, "Dangling edge: an edge endpoint names no element of the case.";
    P3 => Error, "Flag not permitted: root/undeveloped/module/awayref on a non-Claim, awayref without undeveloped, or a repeated concern/awayref flag.";
    P4 => Error, "Bundle slot kind mismatch: the tac slot must load a technological case and each cac slot a clinical case.";
    P5 => Error, "Duplicate case id within a bundle.";
    P6 => Error, "Invalid capability declaration: inverted range, or a direction not allowed for the case kind (provides only in technological, requires only in clinical).";
    P7 => Error, "Invalid association: a clinical case must have exactly one `associates`; other kinds must have none.";
    P8 => Error, "A file referenced by a bundle manifest could not be loaded.";
    P9 => Error, "Bundle manifest structure: exactly one tac entry and at least one cac entry are required.";
    G1 => Error, "A case has exactly one root claim.";
    G2 => Error, "The supportedBy graph is acyclic.";
    G3 => Error, "supportedBy edges run from a Claim or Strategy to a Claim, Strategy or Evidence; a Strategy is supported by Claims only; Evidence has no outgoing edges.";
    G4 => Error, "inContextOf edges run from a Claim or Strategy to a Context, Assumption or Justification.";
    G5 => Error, "Every leaf claim is supported by Evidence, marked undeveloped, or carries an awayref.";
    G6 => Warning, "Every element is reachable from the root claim via any edge kind.";
    G7 => Error, "Every Strategy has at least one supportedBy child.";
    U1 => Error, "A capability names a unit that is not in the unit table.";
    S1 => Error, "The technological case never references a clinical case (Error); any other awayref out of the technological case is a Warning.";
    S2 => Error, "Every clinical-case awayref targets the bundle's technological case.";
    S3 => Error, "Every away-resolved claim is documented by at least one attached Context (inContextOf).";
    S4 => Error, "Every capability required by a clinical case is provided by the technological case (same name, same dimension, range contained).";
    S5 => Error, "Every awayref target exists in the technological case, is a Claim, and is public.";
    S6 => Error, "Every clinical case associates the bundle's technological case.";
    S7 => Warning, "An away-resolved claim's statement differs from its target's statement.";
}

impl Rule {
    pub fn from_id(id: &str) -> Option<Rule> {
        Rule::ALL.iter().copied().find(|r| r.id() == id)
    }

    pub fn catalog() -> impl Iterator<Item = (&'static str, Severity, &'static str)> {
        Rule::ALL.iter().map(|r| (r.id(), r.default_severity(), r.description()))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for Rule {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule: Rule,
    pub severity: Severity,
    pub span: SourceSpan,
    pub message: String,
    pub elements: Vec<(CaseId, ElementId)>,
}

impl Diagnostic {
    pub fn new(rule: Rule, span: SourceSpan, message: impl Into<String>) -> Self {
        let message = message.into();
        debug_assert!(!message.is_empty());
        Diagnostic {
            rule,
            severity: rule.default_severity(),
            span,
            message,
            elements: Vec::new(),
        }
    }

    pub fn with_severity(mut self, severity: Severity) -> Self {
        self.severity = severity;
        self
    }

    pub fn with_element(mut self, case: &CaseId, element: &ElementId) -> Self {
        self.elements.push((case.clone(), element.clone()));
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Ordering used whenever diagnostics are merged: file, line, column,
    /// then rule id, then message.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.span
            .sort_key()
            .cmp(&other.span.sort_key())
            .then_with(|| self.rule.cmp(&other.rule))
            .then_with(|| self.message.cmp(&other.message))
    }
}

impl fmt::Display for Diagnostic {
    /// `<file>:<line>:<col>: <severity> <RULEID>: <message>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} {}: {}", self.span, self.severity, self.rule, self.message)
    }
}

pub fn sort_diagnostics(diagnostics: &mut [Diagnostic]) {
    diagnostics.sort_by(Diagnostic::canonical_cmp);
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}

/// Promote every Warning to an Error (`--strict`).
pub fn promote_warnings(diagnostics: &mut [Diagnostic]) {
    for d in diagnostics {
        d.severity = Severity::Error;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_line_format() {
        let d = Diagnostic::new(Rule::S1, SourceSpan::new("tac.acd", 12, 5, 3), "bad reference");
        assert_eq!(d.to_string(), "tac.acd:12:5: error S1: bad reference");
    }

    #[test]
    fn catalog_ids_are_unique_and_resolvable() {
        let ids: Vec<_> = Rule::catalog().map(|(id, _, _)| id).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids.len(), sorted.len());
        for id in ids {
            assert_eq!(Rule::from_id(id).unwrap().id(), id);
        }
    }

    #[test]
    fn sorting_uses_span_then_rule() {
        let mut ds = vec![
            Diagnostic::new(Rule::G5, SourceSpan::new("a", 3, 1, 0), "x"),
            Diagnostic::new(Rule::G1, SourceSpan::new("a", 3, 1, 0), "x"),
            Diagnostic::new(Rule::G7, SourceSpan::new("a", 1, 9, 0), "x"),
        ];
        sort_diagnostics(&mut ds);
        let order: Vec<_> = ds.iter().map(|d| d.rule).collect();
        assert_eq!(order, vec![Rule::G7, Rule::G1, Rule::G5]);
    }
}
