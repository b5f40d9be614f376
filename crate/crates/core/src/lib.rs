//! Toolchain for GSN assurance cases split into a technological case (what
//! the device delivers) and clinical cases (what a treatment needs), linked
//! by away-references that may only point from clinical into technological.
//!
//! The pipeline is: [`parse`] text into [`model`] values, check them with
//! [`validate`], resolve cross-case references with [`link`], then
//! [`analyze`] or [`render`] the result.

pub mod analyze;
pub mod decimal;
pub mod diag;
mod graph;
pub mod link;
pub mod model;
pub mod parse;
pub mod render;
pub mod validate;

#[cfg(feature = "testkit")]
pub mod testkit;

pub use analyze::{impact, metrics_bundle, metrics_case, ImpactReport, Metrics};
pub use decimal::Decimal;
pub use diag::{Diagnostic, Rule, Severity, SourceSpan};
pub use link::{inline_bundle, resolve_links, ResolvedBundle};
pub use model::{
    ancestors, canonicalize, children, AssuranceCase, AwayRef, Bundle, Capability, CaseId,
    CaseKind, ConcernKind, Direction, Edge, EdgeKind, Element, ElementId, ElementKind, ModelError,
};
pub use parse::{parse_bundle, parse_case, print_case, ParseResult, SourceFile};
pub use render::{report_json, to_dot, RenderOptions, Report};
pub use validate::capability::{match_capabilities, MatchResult, MatchStatus};
pub use validate::units::{Dimension, UnitDef, UnitError, UnitSymbol, UnitTable};
pub use validate::{validate_bundle, validate_case};
