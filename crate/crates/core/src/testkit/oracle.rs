//! Deliberately naive reference implementations. They use only the public
//! model fields (never the crate's graph index or rule engine) so that
//! agreement with the real implementations is evidence, not tautology.

use std::collections::{BTreeMap, BTreeSet};

use crate::model::{AssuranceCase, Bundle, CaseId, EdgeKind, ElementId, ElementKind};

fn position(case: &AssuranceCase, id: &ElementId) -> Option<usize> {
    case.elements.iter().position(|e| &e.id == id)
}

/// `reach[i][j]`: a path of one or more `kind` edges leads from i to j.
/// Floyd-Warshall on a boolean matrix.
pub fn closure(case: &AssuranceCase, kind: EdgeKind) -> Vec<Vec<bool>> {
    let n = case.elements.len();
    let mut reach = vec![vec![false; n]; n];
    for e in case.edges.iter().filter(|e| e.kind == kind) {
        if let (Some(s), Some(t)) = (position(case, &e.source), position(case, &e.target)) {
            reach[s][t] = true;
        }
    }
    #[allow(clippy::needless_range_loop)]
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach
}

pub fn has_supported_by_cycle(case: &AssuranceCase) -> bool {
    let reach = closure(case, EdgeKind::SupportedBy);
    (0..reach.len()).any(|i| reach[i][i])
}

/// Number of strongly connected supportedBy components that contain a
/// cycle. Nodes i and j share a component iff each reaches the other.
pub fn cyclic_component_count(case: &AssuranceCase) -> usize {
    let reach = closure(case, EdgeKind::SupportedBy);
    let n = reach.len();
    let mut assigned = vec![false; n];
    let mut count = 0;
    for i in 0..n {
        if assigned[i] || !reach[i][i] {
            continue;
        }
        count += 1;
        for j in 0..n {
            if i == j || (reach[i][j] && reach[j][i]) {
                assigned[j] = true;
            }
        }
    }
    count
}

/// Edge-kind legality from an explicit table of allowed (source, target)
/// kind pairs.
pub fn edge_allowed(kind: EdgeKind, source: ElementKind, target: ElementKind) -> bool {
    use ElementKind::*;
    const SUPPORTED_BY: &[(ElementKind, ElementKind)] = &[
        (Claim, Claim),
        (Claim, Strategy),
        (Claim, Evidence),
        (Strategy, Claim),
    ];
    const IN_CONTEXT_OF: &[(ElementKind, ElementKind)] = &[
        (Claim, Context),
        (Claim, Assumption),
        (Claim, Justification),
        (Strategy, Context),
        (Strategy, Assumption),
        (Strategy, Justification),
    ];
    let table = match kind {
        EdgeKind::SupportedBy => SUPPORTED_BY,
        EdgeKind::InContextOf => IN_CONTEXT_OF,
    };
    table.contains(&(source, target))
}

/// Edges of `kind` that break the kind table or name a missing element.
pub fn edge_violations(case: &AssuranceCase, kind: EdgeKind) -> usize {
    case.edges
        .iter()
        .filter(|e| e.kind == kind)
        .filter(|e| {
            match (position(case, &e.source), position(case, &e.target)) {
                (Some(s), Some(t)) => !edge_allowed(kind, case.elements[s].kind, case.elements[t].kind),
                _ => true,
            }
        })
        .count()
}

/// Ancestors by enumerating every supportedBy path into `node` backwards.
/// Exponential in general; meant for small acyclic cases.
pub fn ancestors_by_paths(case: &AssuranceCase, node: &ElementId) -> BTreeSet<ElementId> {
    fn extend(case: &AssuranceCase, path: &mut Vec<ElementId>, found: &mut BTreeSet<ElementId>) {
        let last = path.last().unwrap().clone();
        for e in case.edges.iter().filter(|e| e.kind == EdgeKind::SupportedBy && e.target == last) {
            if path.contains(&e.source) {
                continue;
            }
            found.insert(e.source.clone());
            path.push(e.source.clone());
            extend(case, path, found);
            path.pop();
        }
    }
    let mut found = BTreeSet::new();
    extend(case, &mut vec![node.clone()], &mut found);
    found.remove(node);
    found
}

/// Impact on the union graph: every case edge plus an edge from each
/// resolved away-claim to its target. An element is affected iff some
/// changed element is reachable from it (itself included). Reachability
/// is recomputed from scratch for every node.
pub fn impact_by_union(
    bundle: &Bundle,
    changed: &BTreeSet<(CaseId, ElementId)>,
) -> BTreeMap<CaseId, BTreeSet<ElementId>> {
    type Node = (CaseId, ElementId);
    let mut successors: BTreeMap<Node, Vec<Node>> = BTreeMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    for case in bundle.cases() {
        for e in &case.elements {
            nodes.push((case.id.clone(), e.id.clone()));
        }
        for e in &case.edges {
            successors
                .entry((case.id.clone(), e.source.clone()))
                .or_default()
                .push((case.id.clone(), e.target.clone()));
        }
    }
    for cac in &bundle.cacs {
        for e in &cac.elements {
            if let Some(away) = &e.away_ref {
                successors
                    .entry((cac.id.clone(), e.id.clone()))
                    .or_default()
                    .push((away.case.clone(), away.element.clone()));
            }
        }
    }

    let mut affected: BTreeMap<CaseId, BTreeSet<ElementId>> =
        bundle.cases().map(|c| (c.id.clone(), BTreeSet::new())).collect();
    for start in nodes {
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = std::collections::VecDeque::from([start.clone()]);
        let mut hit = false;
        while let Some(v) = queue.pop_front() {
            if changed.contains(&v) {
                hit = true;
                break;
            }
            for w in successors.get(&v).into_iter().flatten() {
                if seen.insert(w.clone()) {
                    queue.push_back(w.clone());
                }
            }
        }
        if hit {
            affected.get_mut(&start.0).unwrap().insert(start.1);
        }
    }
    affected
}

/// Size of the subtree under `root` along both edge kinds, by repeated
/// frontier expansion until nothing new appears.
pub fn subtree_size(case: &AssuranceCase, root: &ElementId) -> usize {
    let mut members: BTreeSet<ElementId> = BTreeSet::from([root.clone()]);
    loop {
        let before = members.len();
        for e in &case.edges {
            if members.contains(&e.source) && case.element(&e.target).is_some() {
                members.insert(e.target.clone());
            }
        }
        if members.len() == before {
            return members.len();
        }
    }
}
