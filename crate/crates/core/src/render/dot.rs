use std::collections::BTreeSet;
use std::fmt::Write;

use crate::decimal::Decimal;
use crate::graph::CaseGraph;
use crate::link::{ElementRef, ResolvedBundle};
use crate::model::{AssuranceCase, EdgeKind, Element, ElementKind};

const WRAP: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("rank separation must be positive, got {0}")]
pub struct RankSepError(pub Decimal);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderOptions {
    pub show_contexts: bool,
    /// Hide everything below a module claim.
    pub collapse_modules: bool,
    pub highlight: BTreeSet<ElementRef>,
    rank_sep: Decimal,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            show_contexts: true,
            collapse_modules: false,
            highlight: BTreeSet::new(),
            rank_sep: Decimal::from_scaled(6, 1),
        }
    }
}

impl RenderOptions {
    pub fn rank_sep(&self) -> &Decimal {
        &self.rank_sep
    }

    pub fn set_rank_sep(&mut self, value: Decimal) -> Result<(), RankSepError> {
        if !value.is_positive() {
            return Err(RankSepError(value));
        }
        self.rank_sep = value;
        Ok(())
    }
}

pub enum DotInput<'a> {
    Case(&'a AssuranceCase),
    Bundle(&'a ResolvedBundle),
}

impl<'a> From<&'a AssuranceCase> for DotInput<'a> {
    fn from(case: &'a AssuranceCase) -> Self {
        DotInput::Case(case)
    }
}

impl<'a> From<&'a ResolvedBundle> for DotInput<'a> {
    fn from(bundle: &'a ResolvedBundle) -> Self {
        DotInput::Bundle(bundle)
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out
}

fn wrap(text: &str) -> Vec<String> {
    let mut lines: Vec<String> = Vec::new();
    let mut current = String::new();
    for word in text.split_whitespace() {
        if !current.is_empty() && current.chars().count() + 1 + word.chars().count() > WRAP {
            lines.push(std::mem::take(&mut current));
        }
        if !current.is_empty() {
            current.push(' ');
        }
        current.push_str(word);
    }
    if !current.is_empty() {
        lines.push(current);
    }
    lines
}

fn label(e: &Element) -> String {
    let mut parts = vec![e.id.to_string()];
    parts.extend(wrap(&e.statement));
    if e.kind == ElementKind::Claim && e.is_undeveloped {
        parts.push("◇".to_string());
    }
    parts.iter().map(|p| escape(p)).collect::<Vec<_>>().join("\\n")
}

fn node_attrs(e: &Element, highlighted: bool) -> String {
    let mut styles: Vec<&str> = Vec::new();
    let shape = match e.kind {
        ElementKind::Claim if e.is_module => "tab",
        ElementKind::Claim => "box",
        ElementKind::Strategy => "parallelogram",
        ElementKind::Context | ElementKind::Assumption | ElementKind::Justification => {
            styles.push("rounded");
            "box"
        }
        ElementKind::Evidence => "circle",
    };
    if highlighted {
        styles.push("filled");
    }
    let mut attrs = format!("label=\"{}\", shape={shape}", label(e));
    if !styles.is_empty() {
        let _ = write!(attrs, ", style=\"{}\"", styles.join(","));
    }
    if highlighted {
        attrs.push_str(", fillcolor=\"lightgrey\"");
    }
    attrs
}

/// Indices drawn for `case` under `options`, each element id once.
fn visible(case: &AssuranceCase, graph: &CaseGraph<'_>, options: &RenderOptions) -> BTreeSet<usize> {
    let mut shown: BTreeSet<usize> = (0..graph.len()).filter(|&i| graph.index_of(graph.id(i)) == Some(i)).collect();
    if !options.show_contexts {
        shown.retain(|&i| !graph.kind(i).is_contextual());
    }
    if options.collapse_modules {
        let modules: Vec<usize> = shown.iter().copied().filter(|&i| case.elements[i].is_module).collect();
        let below: BTreeSet<usize> = modules
            .iter()
            .flat_map(|&m| graph.out(m, EdgeKind::SupportedBy).iter().chain(graph.out(m, EdgeKind::InContextOf)))
            .copied()
            .collect();
        let below = graph.forward_reach(&below.into_iter().collect::<Vec<_>>(), &EdgeKind::ALL);
        // Keep nodes still reachable from an entry point without passing through a module.
        let entries: Vec<usize> = (0..graph.len())
            .filter(|&i| EdgeKind::ALL.iter().all(|&k| graph.inc(i, k).is_empty()))
            .collect();
        let mut open: BTreeSet<usize> = entries.iter().copied().collect();
        let mut stack = entries;
        while let Some(v) = stack.pop() {
            if case.elements[v].is_module {
                continue;
            }
            for &k in &EdgeKind::ALL {
                for &w in graph.out(v, k) {
                    if open.insert(w) {
                        stack.push(w);
                    }
                }
            }
        }
        shown.retain(|i| !below.contains(i) || open.contains(i));
    }
    shown
}

fn edge_line(from: &str, to: &str, kind: EdgeKind) -> String {
    match kind {
        EdgeKind::SupportedBy => format!("\"{}\" -> \"{}\";", escape(from), escape(to)),
        EdgeKind::InContextOf => format!("\"{}\" -> \"{}\" [arrowhead=empty];", escape(from), escape(to)),
    }
}

/// Node and edge lines for one case, sorted. Node names are `prefix + id`.
fn case_body(case: &AssuranceCase, options: &RenderOptions, prefix: &str) -> (Vec<String>, Vec<String>) {
    let graph = CaseGraph::new(case);
    let shown = visible(case, &graph, options);
    let mut nodes: Vec<(String, String)> = shown
        .iter()
        .map(|&i| {
            let e = &case.elements[i];
            let hl = options.highlight.contains(&(case.id.clone(), e.id.clone()));
            (format!("{prefix}{}", e.id), node_attrs(e, hl))
        })
        .collect();
    nodes.sort();
    let node_lines = nodes
        .into_iter()
        .map(|(name, attrs)| format!("\"{}\" [{attrs}];", escape(&name)))
        .collect();

    let mut edges: BTreeSet<(String, EdgeKind, String)> = BTreeSet::new();
    for e in &case.edges {
        let (Some(s), Some(t)) = (graph.index_of(&e.source), graph.index_of(&e.target)) else { continue };
        if shown.contains(&s) && shown.contains(&t) {
            edges.insert((format!("{prefix}{}", e.source), e.kind, format!("{prefix}{}", e.target)));
        }
    }
    let edge_lines = edges.iter().map(|(s, k, t)| edge_line(s, t, *k)).collect();
    (node_lines, edge_lines)
}

fn header(out: &mut String, name: &str, options: &RenderOptions) {
    let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
    let _ = writeln!(out, "    graph [rankdir=TB, ranksep={}];", options.rank_sep);
    out.push_str("    node [fontname=\"Helvetica\", fontsize=10];\n");
}

fn case_dot(case: &AssuranceCase, options: &RenderOptions) -> String {
    let (nodes, edges) = case_body(case, options, "");
    let mut out = String::new();
    if nodes.is_empty() {
        let _ = writeln!(out, "digraph \"{}\" {{", escape(case.id.as_str()));
        out.push_str("}\n");
        return out;
    }
    header(&mut out, case.id.as_str(), options);
    for line in nodes.iter().chain(&edges) {
        let _ = writeln!(out, "    {line}");
    }
    out.push_str("}\n");
    out
}

fn bundle_dot(resolved: &ResolvedBundle, options: &RenderOptions) -> String {
    let bundle = resolved.bundle();
    let mut out = String::new();
    header(&mut out, &bundle.name, options);
    out.push_str("    compound=true;\n");
    for case in bundle.cases() {
        let prefix = format!("{}.", case.id);
        let (nodes, edges) = case_body(case, options, &prefix);
        let _ = writeln!(out, "    subgraph \"cluster_{}\" {{", escape(case.id.as_str()));
        let _ = writeln!(out, "        label=\"{} ({})\";", escape(case.id.as_str()), case.kind);
        for line in nodes.iter().chain(&edges) {
            let _ = writeln!(out, "        {line}");
        }
        out.push_str("    }\n");
    }
    for ((cc, ce), (tc, te)) in resolved.resolutions() {
        let _ = writeln!(
            out,
            "    \"{}\" -> \"{}\" [style=dashed];",
            escape(&format!("{cc}.{ce}")),
            escape(&format!("{tc}.{te}"))
        );
    }
    out.push_str("}\n");
    out
}

/// GSN diagram as a DOT digraph. Nodes and edges are emitted in sorted
/// order so the output depends only on the model.
pub fn to_dot<'a>(input: impl Into<DotInput<'a>>, options: &RenderOptions) -> String {
    match input.into() {
        DotInput::Case(case) => case_dot(case, options),
        DotInput::Bundle(bundle) => bundle_dot(bundle, options),
    }
}
