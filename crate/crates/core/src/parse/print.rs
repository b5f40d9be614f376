use std::fmt::Write;

use crate::model::{quote, AssuranceCase};

/// Pretty-prints a case as DSL text. Layout is fixed: header, association,
/// capabilities, elements, then edges, each group in stored order and
/// separated by a blank line. `fmt` output is exactly this text.
pub fn print_case(case: &AssuranceCase) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "case {} kind {} {{", case.id, case.kind);

    let mut groups: Vec<Vec<String>> = Vec::new();
    if let Some(tac) = &case.associated_tac {
        groups.push(vec![format!("associates {tac}")]);
    }
    groups.push(
        case.capabilities
            .iter()
            .map(|c| {
                format!(
                    "{} capability {} unit {} range [{}, {}]",
                    c.direction.keyword(),
                    c.name,
                    c.unit,
                    c.low,
                    c.high
                )
            })
            .collect(),
    );
    groups.push(
        case.elements
            .iter()
            .map(|e| {
                let mut line = format!("{} {} {}", e.kind, e.id, quote(&e.statement));
                for word in e.flag_words() {
                    line.push(' ');
                    line.push_str(&word);
                }
                line
            })
            .collect(),
    );
    groups.push(
        case.edges
            .iter()
            .map(|e| format!("{} {} {}", e.source, e.kind, e.target))
            .collect(),
    );

    let mut first = true;
    for group in groups.into_iter().filter(|g| !g.is_empty()) {
        if !first {
            out.push('\n');
        }
        first = false;
        for line in group {
            let _ = writeln!(out, "    {line}");
        }
    }
    out.push_str("}\n");
    out
}
