//! Recursive-descent parser for `.acd` case files and `.acb` bundle
//! manifests.
//!
//! Parsing never stops at the first problem. A syntax error inside the case
//! body skips to the next statement terminator (newline, `;` or the closing
//! brace) and parsing continues, so one run reports every diagnosable error.
//! Statements that fail semantic checks (duplicate ids, dangling edges, flags
//! on the wrong kind) are dropped, so any case returned satisfies the model's
//! field invariants.

use std::collections::{BTreeSet, HashSet};

use crate::decimal::Decimal;
use crate::diag::{has_errors, sort_diagnostics, Diagnostic, Rule, Severity, SourceSpan};
use crate::model::{
    AssuranceCase, AwayRef, Bundle, Capability, CaseId, CaseKind, ConcernKind, Direction, Edge,
    EdgeKind, Element, ElementId, ElementKind,
};
use crate::parse::lexer::{tokenize, Tok, Token};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseResult {
    pub case: Option<AssuranceCase>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseResult {
    pub fn has_errors(&self) -> bool {
        has_errors(&self.diagnostics)
    }
}

type PResult<T> = Result<T, Diagnostic>;

struct Parser<'t> {
    toks: &'t [Token],
    pos: usize,
    file: &'t str,
    diags: Vec<Diagnostic>,
}

impl<'t> Parser<'t> {
    fn new(toks: &'t [Token], file: &'t str) -> Self {
        Parser { toks, pos: 0, file, diags: Vec::new() }
    }

    fn peek(&self) -> &'t Token {
        &self.toks[self.pos]
    }

    fn peek_nth(&self, n: usize) -> &'t Token {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)]
    }

    fn bump(&mut self) -> &'t Token {
        let t = &self.toks[self.pos];
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn span(&self, t: &Token) -> SourceSpan {
        t.span(self.file)
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        let t = self.peek();
        Diagnostic::new(
            Rule::P0,
            self.span(t),
            format!("expected {expected}, found {}", t.tok.describe()),
        )
    }

    fn at_keyword(&self, kw: &str) -> bool {
        self.peek().ident() == Some(kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<&'t Token> {
        if self.at_keyword(kw) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&format!("'{kw}'")))
        }
    }

    fn expect_ident(&mut self, what: &str) -> PResult<(&'t Token, &'t str)> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let t = self.bump();
                Ok((t, s.as_str()))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<&'t Token> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn skip_terminators(&mut self) {
        while self.peek().tok.is_terminator() {
            self.bump();
        }
    }

    /// Skip to the next terminator, `}` or end of input without consuming it.
    fn recover(&mut self) {
        while !matches!(self.peek().tok, Tok::Newline | Tok::Semi | Tok::RBrace | Tok::Eof) {
            self.bump();
        }
    }

    fn end_statement(&mut self) -> PResult<()> {
        match self.peek().tok {
            Tok::Newline | Tok::Semi | Tok::RBrace | Tok::Eof => Ok(()),
            _ => Err(self.unexpected("end of line or ';'")),
        }
    }

    fn expect_end_of_input(&mut self) {
        self.skip_terminators();
        if self.peek().tok != Tok::Eof {
            let d = self.unexpected("end of input");
            self.diags.push(d);
        }
    }
}

enum Item {
    Assoc(CaseId, SourceSpan),
    Capability(Capability),
    Node(Element),
    Edge(Edge),
}

const ITEM_START: &str = "'associates', 'provides', 'requires', a node kind or an edge";

fn element_id(text: &str) -> ElementId {
    ElementId::new(text).expect("lexer identifiers match the id pattern")
}

fn case_id(text: &str) -> CaseId {
    CaseId::new(text).expect("lexer identifiers match the id pattern")
}

impl<'t> Parser<'t> {
    fn item(&mut self) -> PResult<Item> {
        let first = self.peek();
        let Some(word) = first.ident() else {
            return Err(self.unexpected(ITEM_START));
        };
        if let Some(kind) = self.peek_nth(1).ident().and_then(EdgeKind::from_keyword) {
            self.bump();
            self.bump();
            let (_, target) = self.expect_ident("edge target id")?;
            let mut edge = Edge::new(element_id(word), kind, element_id(target));
            edge.span = self.span(first);
            return Ok(Item::Edge(edge));
        }
        match word {
            "associates" => {
                self.bump();
                let (t, id) = self.expect_ident("case id")?;
                Ok(Item::Assoc(case_id(id), self.span(t)))
            }
            "provides" | "requires" => self.capability(),
            _ => match ElementKind::from_keyword(word) {
                Some(kind) => self.node(kind),
                None => Err(self.unexpected(ITEM_START)),
            },
        }
    }

    fn number(&mut self) -> PResult<Decimal> {
        match &self.peek().tok {
            Tok::Num(text) => {
                let t = self.bump();
                text.parse().map_err(|_| {
                    Diagnostic::new(Rule::L1, self.span(t), format!("malformed number '{text}'"))
                })
            }
            _ => Err(self.unexpected("number")),
        }
    }

    fn capability(&mut self) -> PResult<Item> {
        let start = self.bump();
        let direction = if start.ident() == Some("provides") {
            Direction::Provided
        } else {
            Direction::Required
        };
        self.expect_keyword("capability")?;
        let (_, name) = self.expect_ident("capability name")?;
        self.expect_keyword("unit")?;
        let (_, unit) = self.expect_ident("unit symbol")?;
        self.expect_keyword("range")?;
        self.expect(Tok::LBracket)?;
        let low = self.number()?;
        self.expect(Tok::Comma)?;
        let high = self.number()?;
        self.expect(Tok::RBracket)?;
        let mut cap = Capability::new(name, direction, unit, low, high);
        cap.span = self.span(start);
        Ok(Item::Capability(cap))
    }

    fn node(&mut self, kind: ElementKind) -> PResult<Item> {
        self.bump();
        let (id_tok, id) = self.expect_ident("element id")?;
        let statement = match &self.peek().tok {
            Tok::Str(s) => {
                self.bump();
                s.clone()
            }
            _ => return Err(self.unexpected("statement string")),
        };
        let mut element = Element::new(element_id(id), kind, statement);
        element.span = self.span(id_tok);

        loop {
            let flag_tok = self.peek();
            let Some(flag) = flag_tok.ident() else { break };
            match flag {
                "root" => element.is_root = true,
                "public" => element.is_public = true,
                "undeveloped" => element.is_undeveloped = true,
                "module" => element.is_module = true,
                "concern" => {
                    self.bump();
                    let (t, word) = self.expect_ident("'safety' or 'effectiveness'")?;
                    let Some(concern) = ConcernKind::from_keyword(word) else {
                        return Err(Diagnostic::new(
                            Rule::P0,
                            self.span(t),
                            format!("expected 'safety' or 'effectiveness', found '{word}'"),
                        ));
                    };
                    if element.concern.is_some() {
                        self.diags.push(Diagnostic::new(
                            Rule::P3,
                            self.span(flag_tok),
                            format!("element '{}' has more than one concern; the first is kept", element.id),
                        ));
                    } else {
                        element.concern = Some(concern);
                    }
                    continue;
                }
                "awayref" => {
                    self.bump();
                    let (_, case) = self.expect_ident("target case id")?;
                    self.expect(Tok::Dot)?;
                    let (_, target) = self.expect_ident("target element id")?;
                    if element.away_ref.is_some() {
                        self.diags.push(Diagnostic::new(
                            Rule::P3,
                            self.span(flag_tok),
                            format!("element '{}' has more than one awayref; the first is kept", element.id),
                        ));
                    } else {
                        element.away_ref =
                            Some(AwayRef { case: case_id(case), element: element_id(target) });
                    }
                    continue;
                }
                _ => break,
            }
            self.bump();
        }
        Ok(Item::Node(element))
    }

    fn case_header(&mut self) -> PResult<(CaseId, CaseKind, SourceSpan)> {
        self.skip_terminators();
        self.expect_keyword("case")?;
        let (id_tok, id) = self.expect_ident("case id")?;
        self.expect_keyword("kind")?;
        let (kind_tok, word) =
            self.expect_ident("'monolithic', 'technological' or 'clinical'")?;
        let kind = CaseKind::from_keyword(word).ok_or_else(|| {
            Diagnostic::new(
                Rule::P0,
                self.span(kind_tok),
                format!("expected 'monolithic', 'technological' or 'clinical', found '{word}'"),
            )
        })?;
        self.skip_terminators();
        self.expect(Tok::LBrace)?;
        Ok((case_id(id), kind, self.span(id_tok)))
    }

    fn case_body(&mut self) -> Vec<Item> {
        let mut items = Vec::new();
        loop {
            self.skip_terminators();
            match self.peek().tok {
                Tok::RBrace => {
                    self.bump();
                    self.expect_end_of_input();
                    break;
                }
                Tok::Eof => {
                    let d = self.unexpected("'}'");
                    self.diags.push(d);
                    break;
                }
                _ => {}
            }
            match self.item().and_then(|item| self.end_statement().map(|_| item)) {
                Ok(item) => items.push(item),
                Err(d) => {
                    self.diags.push(d);
                    self.recover();
                }
            }
        }
        items
    }
}

fn clear_invalid_flags(element: &mut Element) {
    if element.kind != ElementKind::Claim {
        element.is_root = false;
        element.is_undeveloped = false;
        element.is_module = false;
        element.away_ref = None;
    }
    if element.away_ref.is_some() && !element.is_undeveloped {
        element.away_ref = None;
    }
}

fn assemble(
    id: CaseId,
    kind: CaseKind,
    header_span: SourceSpan,
    items: Vec<Item>,
    diags: &mut Vec<Diagnostic>,
) -> Option<AssuranceCase> {
    let mut case = AssuranceCase::new(id, kind);
    case.span = header_span;
    let mut edges = Vec::new();
    let mut association: Option<(CaseId, SourceSpan)> = None;
    let mut ids = HashSet::new();

    for item in items {
        match item {
            Item::Assoc(target, span) => {
                if kind != CaseKind::Clinical {
                    diags.push(Diagnostic::new(
                        Rule::P7,
                        span,
                        format!("only clinical cases declare 'associates'; this case is {kind}"),
                    ));
                } else if association.is_some() {
                    diags.push(Diagnostic::new(
                        Rule::P7,
                        span,
                        "'associates' declared more than once; the first is kept",
                    ));
                } else {
                    association = Some((target, span));
                }
            }
            Item::Capability(cap) => {
                if cap.low > cap.high {
                    diags.push(Diagnostic::new(
                        Rule::P6,
                        cap.span.clone(),
                        format!("capability '{}' has an inverted range [{}, {}]", cap.name, cap.low, cap.high),
                    ));
                } else if cap.direction.owning_kind() != kind {
                    diags.push(Diagnostic::new(
                        Rule::P6,
                        cap.span.clone(),
                        format!(
                            "'{}' capabilities are only allowed in {} cases; this case is {kind}",
                            cap.direction.keyword(),
                            cap.direction.owning_kind()
                        ),
                    ));
                } else {
                    case.capabilities.push(cap);
                }
            }
            Item::Node(mut element) => {
                if !ids.insert(element.id.clone()) {
                    diags.push(
                        Diagnostic::new(
                            Rule::P1,
                            element.span.clone(),
                            format!("duplicate element id '{}'", element.id),
                        )
                        .with_element(&case.id, &element.id),
                    );
                    continue;
                }
                let violations = element.flag_violations();
                if !violations.is_empty() {
                    for v in violations {
                        diags.push(
                            Diagnostic::new(
                                Rule::P3,
                                element.span.clone(),
                                format!("{v} ('{}' is a {})", element.id, element.kind),
                            )
                            .with_element(&case.id, &element.id),
                        );
                    }
                    clear_invalid_flags(&mut element);
                }
                case.elements.push(element);
            }
            Item::Edge(edge) => edges.push(edge),
        }
    }

    let mut seen_edges = HashSet::new();
    for edge in edges {
        let missing: Vec<&ElementId> = [&edge.source, &edge.target]
            .into_iter()
            .filter(|id| !ids.contains(*id))
            .collect();
        if !missing.is_empty() {
            for id in missing {
                diags.push(Diagnostic::new(
                    Rule::P2,
                    edge.span.clone(),
                    format!("edge '{} {} {}' names unknown element '{id}'", edge.source, edge.kind, edge.target),
                ));
            }
            continue;
        }
        if !seen_edges.insert((edge.source.clone(), edge.kind, edge.target.clone())) {
            diags.push(
                Diagnostic::new(
                    Rule::P1,
                    edge.span.clone(),
                    format!("duplicate edge '{} {} {}' ignored", edge.source, edge.kind, edge.target),
                )
                .with_severity(Severity::Warning),
            );
            continue;
        }
        case.edges.push(edge);
    }

    match (kind, association) {
        (CaseKind::Clinical, Some((target, _))) => case.associated_tac = Some(target),
        (CaseKind::Clinical, None) => {
            diags.push(Diagnostic::new(
                Rule::P7,
                case.span.clone(),
                format!("clinical case '{}' must declare 'associates <tac id>'", case.id),
            ));
            return None;
        }
        _ => {}
    }
    Some(case)
}

pub fn parse_case(source: &str, file_name: &str) -> ParseResult {
    let (tokens, mut diagnostics) = tokenize(source, file_name);
    let mut parser = Parser::new(&tokens, file_name);
    let case = match parser.case_header() {
        Ok((id, kind, span)) => {
            let items = parser.case_body();
            assemble(id, kind, span, items, &mut parser.diags)
        }
        Err(d) => {
            parser.diags.push(d);
            None
        }
    };
    diagnostics.append(&mut parser.diags);
    sort_diagnostics(&mut diagnostics);
    debug_assert!(case.is_some() || has_errors(&diagnostics));
    ParseResult { case, diagnostics }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Tac,
    Cac,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub slot: Slot,
    pub path: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub name: String,
    pub entries: Vec<ManifestEntry>,
}

/// `bundle ID { tac "path"; cac "path"; ... }`
pub fn parse_manifest(source: &str, file_name: &str) -> (Option<Manifest>, Vec<Diagnostic>) {
    let (tokens, mut diagnostics) = tokenize(source, file_name);
    let mut p = Parser::new(&tokens, file_name);

    let header = (|| {
        p.skip_terminators();
        p.expect_keyword("bundle")?;
        let (_, name) = p.expect_ident("bundle id")?;
        p.skip_terminators();
        p.expect(Tok::LBrace)?;
        Ok::<_, Diagnostic>(name.to_string())
    })();

    let manifest = match header {
        Ok(name) => {
            let mut entries = Vec::new();
            loop {
                p.skip_terminators();
                match p.peek().tok {
                    Tok::RBrace => {
                        p.bump();
                        p.expect_end_of_input();
                        break;
                    }
                    Tok::Eof => {
                        let d = p.unexpected("'}'");
                        p.diags.push(d);
                        break;
                    }
                    _ => {}
                }
                let entry = (|| {
                    let t = p.peek();
                    let slot = match t.ident() {
                        Some("tac") => Slot::Tac,
                        Some("cac") => Slot::Cac,
                        _ => return Err(p.unexpected("'tac' or 'cac'")),
                    };
                    p.bump();
                    let path = match &p.peek().tok {
                        Tok::Str(s) => {
                            p.bump();
                            s.clone()
                        }
                        _ => return Err(p.unexpected("path string")),
                    };
                    p.end_statement()?;
                    Ok(ManifestEntry { slot, path, span: t.span(file_name) })
                })();
                match entry {
                    Ok(e) => entries.push(e),
                    Err(d) => {
                        p.diags.push(d);
                        p.recover();
                    }
                }
            }
            Some(Manifest { name, entries })
        }
        Err(d) => {
            p.diags.push(d);
            None
        }
    };
    diagnostics.append(&mut p.diags);
    sort_diagnostics(&mut diagnostics);
    (manifest, diagnostics)
}

/// A file handed back by a bundle loader. `name` is what diagnostics show.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub name: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleParse {
    pub bundle: Option<Bundle>,
    /// Every member case that parsed, in manifest order, even when no bundle
    /// could be formed.
    pub cases: Vec<AssuranceCase>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Parses a manifest and each file it lists. `load` receives the path as
/// written in the manifest and is called once per entry, in order.
pub fn parse_bundle<F>(manifest_source: &str, manifest_name: &str, mut load: F) -> BundleParse
where
    F: FnMut(&str) -> Result<SourceFile, String>,
{
    let (manifest, mut diagnostics) = parse_manifest(manifest_source, manifest_name);
    let Some(manifest) = manifest else {
        return BundleParse { bundle: None, cases: Vec::new(), diagnostics };
    };

    let mut tac: Option<AssuranceCase> = None;
    let mut cacs = Vec::new();
    let mut cases = Vec::new();
    let mut case_ids = BTreeSet::new();
    let mut tac_seen = false;

    for entry in &manifest.entries {
        if entry.slot == Slot::Tac {
            if tac_seen {
                diagnostics.push(Diagnostic::new(
                    Rule::P9,
                    entry.span.clone(),
                    "bundle declares more than one tac",
                ));
                continue;
            }
            tac_seen = true;
        }
        let file = match load(&entry.path) {
            Ok(file) => file,
            Err(message) => {
                diagnostics.push(Diagnostic::new(
                    Rule::P8,
                    entry.span.clone(),
                    format!("cannot load '{}': {message}", entry.path),
                ));
                continue;
            }
        };
        let parsed = parse_case(&file.text, &file.name);
        let failed = parsed.has_errors();
        diagnostics.extend(parsed.diagnostics);
        let Some(case) = parsed.case else { continue };
        cases.push(case.clone());
        if failed {
            continue;
        }

        let expected = match entry.slot {
            Slot::Tac => CaseKind::Technological,
            Slot::Cac => CaseKind::Clinical,
        };
        if case.kind != expected {
            let slot = if entry.slot == Slot::Tac { "tac" } else { "cac" };
            diagnostics.push(Diagnostic::new(
                Rule::P4,
                entry.span.clone(),
                format!("the {slot} slot requires a {expected} case; '{}' is {}", case.id, case.kind),
            ));
            continue;
        }
        if !case_ids.insert(case.id.clone()) {
            diagnostics.push(Diagnostic::new(
                Rule::P5,
                entry.span.clone(),
                format!("case id '{}' appears more than once in the bundle", case.id),
            ));
            continue;
        }
        match entry.slot {
            Slot::Tac => tac = Some(case),
            Slot::Cac => cacs.push(case),
        }
    }

    let end = SourceSpan::new(manifest_name, 1, 1, 0);
    if !tac_seen {
        diagnostics.push(Diagnostic::new(Rule::P9, end.clone(), "bundle requires a tac"));
    }
    if !manifest.entries.iter().any(|e| e.slot == Slot::Cac) {
        diagnostics.push(Diagnostic::new(Rule::P9, end, "bundle requires at least one cac"));
    }

    let bundle = match tac {
        Some(tac) if !has_errors(&diagnostics) => Bundle::new(manifest.name, tac, cacs).ok(),
        _ => None,
    };
    sort_diagnostics(&mut diagnostics);
    BundleParse { bundle, cases, diagnostics }
}
